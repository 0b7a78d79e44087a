#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Simulate monotone multi-agent systems and check convergence hypotheses"};
    app.require_subcommand(1);

    mas::cli::Invocation inv;
    std::string out;
    std::uint64_t seed = 0;

    const std::vector<std::pair<const char*, mas::cli::Command>> commands = {
        {"check", mas::cli::Command::Check},
        {"simulate", mas::cli::Command::Simulate},
        {"infer-graph", mas::cli::Command::InferGraph},
        {"sweep", mas::cli::Command::Sweep},
    };
    const std::map<std::string, const char*> help = {
        {"check", "check the theorem hypotheses and write one report per property"},
        {"simulate", "run the configured ensemble and write trajectories"},
        {"infer-graph", "infer the dependency graph from the Jacobian"},
        {"sweep", "map the SIS stability conditions over a parameter grid"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", inv.config, "experiment config (JSON)")->required();
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "seed (overrides the config)");
        sub->add_flag("--quiet", inv.quiet, "no summary on stdout");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mas::cli::kExitConfig;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        inv.command = commands[i].second;
        if (subs[i]->count("--out")) inv.out = out;
        if (subs[i]->count("--seed")) inv.seed = seed;
    }
    return mas::cli::run(inv, std::cout, std::cerr);
}

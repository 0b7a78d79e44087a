#include "commands.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "monotone_mas/parallel.hpp"
#include "monotone_mas/properties.hpp"
#include "svg.hpp"

namespace mas::cli {

using nlohmann::json;

namespace {

// Every output file goes through here, from the calling thread only.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
    }

    std::ofstream open(const std::string& name) const {
        std::ofstream f(dir_ / name, std::ios::binary);
        if (!f) throw Error(fmt::format("cannot write '{}'", (dir_ / name).string()));
        return f;
    }

    void write_json(const std::string& name, const json& j) const { open(name) << j.dump(2) << '\n'; }

private:
    std::filesystem::path dir_;
};

json sis_json(const SisConditionsReport& r) {
    json nodes = json::array();
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const auto& c = r.nodes[i];
        nodes.push_back({{"node", i + 1},
                         {"c16", c.c16},
                         {"c17", c.c17},
                         {"c18", c.c18},
                         {"c19", c.c19},
                         {"c20", c.c20},
                         {"min_slack", c.min_slack}});
    }
    return {{"c16", r.c16}, {"c17", r.c17}, {"c18", r.c18}, {"c19", r.c19},
            {"c20", r.c20}, {"all_16_19", r.all_16_19()}, {"nodes", nodes}};
}

SisParams sis_params(const ModelConfig& m) {
    SisParams p;
    p.h = m.h;
    p.delta = m.delta;
    p.beta = m.beta;
    p.beta_self = m.beta_self;
    return p;
}

std::vector<double> values(const StateVector& x) { return x.vector(); }

}  // namespace

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitOk;
        case Verdict::Fail: return kExitFail;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitRuntime;
}

int default_theorem(ModelKind kind) { return kind == ModelKind::Arctan ? 9 : 8; }

int cmd_check(const ExperimentConfig& cfg, std::ostream& out, bool quiet) {
    const SystemMap f = build_model(cfg);
    const SampleSpec s = sample_spec(cfg, f);
    const int theorem = cfg.theorem ? cfg.theorem : default_theorem(cfg.model->kind);
    std::optional<StateVector> fp;
    if (cfg.fixed_point) fp = StateVector(*cfg.fixed_point);

    const TheoremReport report = theorem == 8 ? theorem8_report(f, s, fp) : theorem9_report(f, std::nullopt, s);

    const OutputDir dir(cfg.output_dir);
    json summary = to_json(report);
    summary["model"] = f.name();
    summary["seed"] = cfg.seed;
    if (cfg.outputs.reports) {
        for (const auto* group : {&report.conditions, &report.supplementary}) {
            for (const auto& r : *group) dir.write_json(fmt::format("report_{}.json", to_string(r.property)), to_json(r));
        }
    }
    if (cfg.model->kind == ModelKind::Sis) {
        const json sis = sis_json(sis_conditions(*cfg.graph, sis_params(*cfg.model)));
        if (cfg.outputs.reports) dir.write_json("report_SisConditions.json", sis);
        summary["sis_conditions"] = sis;
    }
    const int code = exit_code(report.overall);
    summary["exit_code"] = code;
    dir.write_json("check_summary.json", summary);

    if (!quiet) {
        out << fmt::format("{}: theorem {} hypotheses\n", f.name(), theorem);
        for (const auto& r : report.conditions) {
            out << fmt::format("  {:<22} {}\n", to_string(r.property), to_string(r.verdict));
        }
        for (const auto& r : report.supplementary) {
            out << fmt::format("  {:<22} {} (supplementary)\n", to_string(r.property), to_string(r.verdict));
        }
        if (summary.contains("sis_conditions")) {
            const json& c = summary["sis_conditions"];
            out << fmt::format("  SIS conditions: 16-19 {}, 20 {}\n", c["all_16_19"].get<bool>() ? "hold" : "fail",
                               c["c20"].get<bool>() ? "holds" : "fails");
        }
        out << fmt::format("overall: {}\n", to_string(report.overall));
    }
    return code;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, bool quiet) {
    const SystemMap f = build_model(cfg);
    const std::vector<StateVector> states = initial_states(cfg, f);
    if (states.empty()) throw ConfigError("initial_states", "simulate needs at least one initial state");

    std::vector<std::optional<Trajectory>> slots(states.size());
    parallel_for(states.size(), [&](std::size_t k) { slots[k].emplace(run(f, states[k], cfg.run)); });
    std::vector<Trajectory> runs;
    for (auto& t : slots) runs.push_back(std::move(*t));

    const OutputDir dir(cfg.output_dir);
    std::map<std::string, std::size_t> counts;
    for (Termination t : {Termination::FixedPoint, Termination::Consensus, Termination::PeriodicSuspected,
                          Termination::BudgetExceeded, Termination::PositivityViolation, Termination::NonFinite}) {
        counts[to_string(t)] = 0;
    }
    json list = json::array();
    std::size_t support_violations = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const Trajectory& t = runs[k];
        ++counts[to_string(t.termination)];
        const LemmaAudit audit = trajectory_lemma_audit(t, cfg.run.zero_tol);
        support_violations += audit.support_violations.size();
        json r = {{"run", k},
                  {"termination", to_string(t.termination)},
                  {"iterations", t.iterations},
                  {"residual", t.residual},
                  {"spread", t.spread},
                  {"initial", values(t.initial)},
                  {"initial_min", t.initial.min()},
                  {"initial_max", t.initial.max()},
                  {"terminal", values(t.terminal)},
                  {"support_violations", audit.support_violations.size()},
                  {"part_stabilized", audit.part_stabilized}};
        r["consensus_value"] = t.termination == Termination::Consensus ? json(t.consensus_value()) : json(nullptr);
        r["period"] = t.period ? json(*t.period) : json(nullptr);
        if (t.violation_index) r["violation"] = {{"index", *t.violation_index + 1}, {"value", *t.violation_value}};
        if (!t.message.empty()) r["message"] = t.message;
        list.push_back(std::move(r));
        if (cfg.outputs.trajectories) {
            auto file = dir.open(fmt::format("trajectory_{:03}.csv", k));
            write_trajectory_csv(file, t);
        }
    }
    json summary = {{"model", f.name()},
                    {"seed", cfg.seed},
                    {"runs_total", runs.size()},
                    {"counts", counts},
                    {"support_violations", support_violations},
                    {"runs", list}};
    dir.write_json("simulate_summary.json", summary);
    if (cfg.outputs.plot) {
        auto file = dir.open("trajectories.svg");
        write_trajectories_svg(file, runs, f.name());
    }
    if (!quiet) {
        out << fmt::format("{}: {} runs\n", f.name(), runs.size());
        for (const auto& [name, c] : counts) {
            if (c) out << fmt::format("  {:<20} {}\n", name, c);
        }
    }
    return kExitOk;
}

int cmd_infer_graph(const ExperimentConfig& cfg, std::ostream& out, bool quiet) {
    const SystemMap f = build_model(cfg);
    const SampleSpec s = sample_spec(cfg, f);
    const InferenceGraph g = infer_graph(f, s, cfg.edge_tol);
    const auto root = has_globally_reachable_node(g);
    const bool aperiodic = is_aperiodic_by_self_loops(g);

    const OutputDir dir(cfg.output_dir);
    {
        auto file = dir.open("inferred_graph.txt");
        write_edge_list(file, g.edge_list());
    }
    json edges = json::array();
    for (const auto& [i, j] : g.edges()) edges.push_back({{"i", i + 1}, {"j", j + 1}, {"support", g.support(i, j)}});
    json report = {{"model", f.name()},
                   {"n", g.size()},
                   {"edge_tol", cfg.edge_tol},
                   {"samples", s.total()},
                   {"seed", cfg.seed},
                   {"edges", edges},
                   {"aperiodic_by_self_loops", aperiodic}};
    report["globally_reachable_node"] = root ? json(*root + 1) : json(nullptr);
    dir.write_json("graph_report.json", report);
    if (!quiet) {
        out << fmt::format("{}: {} nodes, {} edges\n", f.name(), g.size(), edges.size());
        out << fmt::format("  globally reachable node: {}\n", root ? std::to_string(*root + 1) : "none");
        out << fmt::format("  self-loops on every node: {}\n", aperiodic ? "yes" : "no");
    }
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, bool quiet) {
    if (!cfg.sweep) throw ConfigError("sweep", "sweep needs a 'sweep' section");
    const SweepConfig& sw = *cfg.sweep;
    struct Row {
        double h, delta, beta, beta_self;
        SisNodeConditions c, strict;
    };
    const std::size_t nb = sw.beta.size(), nd = sw.delta.size(), nh = sw.h.size();
    const std::size_t total = sw.beta_self.size() * nh * nd * nb;
    std::vector<Row> rows(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t ib = idx % nb, id = (idx / nb) % nd, ih = (idx / nb / nd) % nh, is = idx / nb / nd / nh;
        Row& r = rows[idx];
        r.h = sw.h[ih];
        r.delta = sw.delta[id];
        r.beta = sw.beta[ib];
        r.beta_self = sw.beta_self[is];
        r.c = sis_node_conditions(r.h, r.delta, r.beta, r.beta_self);
        r.strict = sis_node_conditions(r.h, r.delta, r.beta, r.beta_self, Inequalities::Strict);
    });

    const OutputDir dir(cfg.output_dir);
    auto csv = dir.open("sweep.csv");
    csv << "h,delta,beta,beta_self,c16,c17,c18,c19,c20,all_1619,agree\n";
    std::size_t disagree = 0, residual = 0, boundary = 0;
    std::map<double, std::size_t> by_self;
    json examples = json::array();
    for (const Row& r : rows) {
        const bool agree = r.c.all_16_19() == r.c.c20;
        const bool strict_agree = r.strict.all_16_19() == r.strict.c20;
        csv << fmt::format("{},{},{},{},{:d},{:d},{:d},{:d},{:d},{:d},{:d}\n", r.h, r.delta, r.beta, r.beta_self,
                           r.c.c16, r.c.c17, r.c.c18, r.c.c19, r.c.c20, r.c.all_16_19(), agree);
        by_self[r.beta_self] += agree ? 0 : 1;
        if (agree) continue;
        ++disagree;
        if (r.c.min_slack <= 1e-12) ++boundary;
        if (!strict_agree) ++residual;
        if (examples.size() < 20) {
            examples.push_back({{"h", r.h},
                                {"delta", r.delta},
                                {"beta", r.beta},
                                {"beta_self", r.beta_self},
                                {"all_1619", r.c.all_16_19()},
                                {"c20", r.c.c20},
                                {"min_slack", r.c.min_slack}});
        }
    }
    csv.close();
    json per_self = json::array();
    for (const auto& [b, d] : by_self) per_self.push_back({{"beta_self", b}, {"disagreements", d}});
    json summary = {{"total", total},
                    {"disagreements", disagree},
                    {"boundary_disagreements", boundary},
                    {"interior_disagreements", disagree - boundary},
                    {"strict_disagreements", residual},
                    {"by_beta_self", per_self},
                    {"examples", examples}};
    dir.write_json("sweep_summary.json", summary);
    if (!quiet) {
        out << fmt::format("sweep: {} points, {} disagreements ({} at equality boundaries, {} interior), "
                           "{} remain with strict inequalities\n",
                           total, disagree, boundary, disagree - boundary, residual);
    }
    return kExitOk;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(inv.config);
        if (inv.out) cfg.output_dir = *inv.out;
        if (inv.seed) cfg.seed = *inv.seed;
        if (inv.command != Command::Sweep && !cfg.model) throw ConfigError("model", "missing required key");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        switch (inv.command) {
            case Command::Check: return cmd_check(cfg, out, inv.quiet);
            case Command::Simulate: return cmd_simulate(cfg, out, inv.quiet);
            case Command::InferGraph: return cmd_infer_graph(cfg, out, inv.quiet);
            case Command::Sweep: return cmd_sweep(cfg, out, inv.quiet);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}

}  // namespace mas::cli

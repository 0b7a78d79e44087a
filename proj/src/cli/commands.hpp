#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "monotone_mas/properties.hpp"

namespace mas::cli {

enum class Command { Check, Simulate, InferGraph, Sweep };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitRuntime = 4;

struct Invocation {
    Command command = Command::Check;
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

/// Loads the config, applies the --out / --seed overrides and runs the
/// command. Config errors are reported on `err` and give exit code 1.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

int cmd_check(const ExperimentConfig& cfg, std::ostream& out, bool quiet = false);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, bool quiet = false);
int cmd_infer_graph(const ExperimentConfig& cfg, std::ostream& out, bool quiet = false);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, bool quiet = false);

/// 0 for Pass, 2 for Fail, 3 for Inconclusive.
int exit_code(Verdict v);

/// Theorem checked when the config leaves it open.
int default_theorem(ModelKind kind);

}  // namespace mas::cli

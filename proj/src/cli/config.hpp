#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/graph.hpp"
#include "monotone_mas/models.hpp"
#include "monotone_mas/sampling.hpp"
#include "monotone_mas/simulate.hpp"

namespace mas::cli {

/// Invalid configuration; `field` is the dotted path of the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class ModelKind { Sis, Arctan, Linear, Counterexample };

struct ModelConfig {
    ModelKind kind = ModelKind::Sis;
    // sis
    double h = 0.0;
    std::vector<double> delta;
    std::vector<std::vector<double>> beta;  // aligned with Digraph::neighbors
    std::vector<double> beta_self;
    // arctan
    std::vector<double> eps;
    // linear
    Eigen::MatrixXd matrix;
    // counterexample: "constant", "swap" or "sqrt_shift"
    std::string counterexample;
    std::optional<double> domain_bound;
};

struct InitialStates {
    std::vector<std::vector<double>> explicit_states;
    std::size_t random_count = 0;
    bool random_boundary = false;  // pin at least one coordinate to 0
    std::optional<double> random_bound;
};

struct SweepConfig {
    std::vector<double> h, delta, beta;  // expanded grids
    std::vector<double> beta_self{0.0};
};

struct Outputs {
    bool trajectories = true;
    bool reports = true;
    bool plot = false;
};

struct ExperimentConfig {
    std::optional<ModelConfig> model;
    std::optional<Digraph> graph;
    InitialStates initial;
    RunConfig run;
    SampleSpec sampling;
    bool sampling_bound_set = false;
    int theorem = 0;  // 0: chosen from the model
    std::optional<std::vector<double>> fixed_point;
    double edge_tol = kDefaultEdgeTol;
    std::optional<SweepConfig> sweep;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    Outputs outputs;
};

/// Parses and validates the whole document. Relative graph file paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Grid lo, lo + step, ..., computed as lo + i * step; hi included when it
/// lies on the grid (to 1e-9 step).
std::vector<double> expand_range(double lo, double hi, double step);

SystemMap build_model(const ExperimentConfig& cfg);
/// Sampling spec with its seed derived from the config seed and its bound
/// defaulting to the model's domain box.
SampleSpec sample_spec(const ExperimentConfig& cfg, const SystemMap& f);
std::vector<StateVector> initial_states(const ExperimentConfig& cfg, const SystemMap& f);

std::string to_string(ModelKind k);

}  // namespace mas::cli

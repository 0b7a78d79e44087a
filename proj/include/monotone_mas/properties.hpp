#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monotone_mas/graph.hpp"
#include "monotone_mas/sampling.hpp"
#include "monotone_mas/system.hpp"

namespace mas {

enum class PropertyId {
    Positivity,
    OrderPreserving,
    KamkeTypeK,
    TypeKDirect,
    SubHomogeneity,
    ThompsonNonExpansive,
    ConsensusFixedLine,
    RowStochasticJacobian,
    GloballyReachable,
    Aperiodic,
    PositiveFixedPoint,
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(PropertyId id);
std::string to_string(Verdict v);

/// Evidence behind a Fail: the point(s) involved, component indices
/// (0-based) and named measured values.
struct Witness {
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> indices;
    std::map<std::string, double> values;
};

/// Outcome of one sampled hypothesis check. Pass always means "no
/// counterexample found under the sampling budget".
struct PropertyReport {
    explicit PropertyReport(PropertyId id) : property(id) {}

    PropertyId property;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Witness> witness;
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::string message;

    bool passed() const { return verdict == Verdict::Pass; }
    bool failed() const { return verdict == Verdict::Fail; }
};

inline constexpr double kDirectTol = 1e-9;
inline constexpr double kFiniteDifferenceTol = 1e-6;

/// Sub-homogeneity scalings used when the caller gives none.
std::vector<double> default_alphas();

PropertyReport check_positivity(const SystemMap& f, const SampleSpec& s);

/// x <= y implies f(x) <= f(y) + tol, on comparable pairs built from samples.
PropertyReport check_order_preserving(const SystemMap& f, const SampleSpec& s, double tol = kDirectTol);

/// Jacobian Metzler with strictly positive diagonal: J_ii > tol and
/// J_ij >= -tol. Failed Jacobian evaluations skip the sample; more than 10%
/// skipped makes the verdict Inconclusive.
PropertyReport check_kamke(const SystemMap& f, const SampleSpec& s, double tol);

/// Type-K order preservation on pairs x <= y, x != y:
///   (i)  x_i == y_i  requires f_i(x) <= f_i(y) + tol
///   (ii) x_i <  y_i  requires f_i(x) <  f_i(y)   (no slack)
/// The witness records the failing condition as values["condition"].
PropertyReport check_type_k_direct(const SystemMap& f, const SampleSpec& s, double tol = kDirectTol);

/// alpha f(x) <= f(alpha x) + tol componentwise.
PropertyReport check_subhomogeneity(const SystemMap& f, const SampleSpec& s,
                                    const std::vector<double>& alphas, double tol = kDirectTol);

/// d_T(f(x), f(y)) <= d_T(x, y) + tol for interior pairs. Interior means
/// every coordinate >= interior_margin * bound.
PropertyReport check_nonexpansive_thompson(const SystemMap& f, const SampleSpec& s, double tol = kDirectTol,
                                           double interior_margin = 1e-3);

/// |f(c 1) - c 1|_inf <= tol for each c.
PropertyReport check_consensus_fixed_line(const SystemMap& f, const std::vector<double>& c_values,
                                          double tol = kDirectTol);

/// Row sums of the Jacobian at c 1 within tol of 1. Throws
/// PreconditionError when c 1 is not a fixed point (within kDirectTol).
PropertyReport check_row_stochastic_at_consensus(const SystemMap& f, double c, double tol);
PropertyReport check_row_stochastic_at_consensus(const SystemMap& f, const std::vector<double>& c_values,
                                                 double tol);

PropertyReport check_globally_reachable(const InferenceGraph& g);
PropertyReport check_aperiodic(const InferenceGraph& g);

/// Verifies a positive fixed point: all entries > zero_tol and residual
/// |f(x) - x|_inf <= residual_tol.
PropertyReport check_positive_fixed_point(const SystemMap& f, const std::optional<StateVector>& witness,
                                          double residual_tol, double zero_tol = kDefaultZeroTol);

/// Re-evaluates the map at a Fail witness. True when the violation is
/// reproduced, false when it is not, nullopt when the witness is not a map
/// evaluation (graph properties, missing fixed point) or the report is not a
/// Fail.
std::optional<bool> reverify_witness(const SystemMap& f, const PropertyReport& report);

struct TheoremReport {
    int theorem = 0;  // 8 (convergence to a fixed point) or 9 (consensus)
    std::vector<PropertyReport> conditions;     // decide the overall verdict
    std::vector<PropertyReport> supplementary;  // informational
    Verdict overall = Verdict::Inconclusive;
};

/// Combine verdicts: any Fail -> Fail, else any Inconclusive -> Inconclusive.
Verdict combine(const std::vector<PropertyReport>& reports);

/// Hypotheses of the fixed-point convergence theorem: positivity, Kamke
/// (type-K), sub-homogeneity and a positive fixed point. Without a supplied
/// witness one is searched for by simulation.
TheoremReport theorem8_report(const SystemMap& f, const SampleSpec& s,
                              const std::optional<StateVector>& fixed_point = std::nullopt);

/// Hypotheses of the consensus theorem: positivity, Kamke, sub-homogeneity,
/// consensus fixed line and a globally reachable node of the inference graph
/// (inferred from f when not given). Row-stochastic Jacobian and self-loop
/// aperiodicity are reported as supplementary.
TheoremReport theorem9_report(const SystemMap& f, const std::optional<InferenceGraph>& g, const SampleSpec& s);

nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const TheoremReport& r);

}  // namespace mas

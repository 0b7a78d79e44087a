#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monotone_mas/order.hpp"
#include "monotone_mas/system.hpp"

namespace mas {

struct RunConfig {
    std::size_t max_iters = 100000;
    double fixed_tol = 1e-10;      ///< on |f(x) - x|_inf
    double consensus_tol = 1e-8;   ///< on max_i x_i - min_i x_i
    std::size_t period_window = 64;
    std::size_t stride = 1;
    /// After this many steps stored iterates are thinned logarithmically.
    std::size_t dense_steps = 10000;
    double zero_tol = kDefaultZeroTol;

    void validate() const;
};

enum class Termination {
    FixedPoint,
    /// Converged to c 1 while f also fixes nearby consensus states, so the
    /// limit lies on a line of fixed points. An isolated fixed point with
    /// equal entries stays FixedPoint.
    Consensus,
    PeriodicSuspected,
    BudgetExceeded,
    PositivityViolation,
    NonFinite,
};

std::string to_string(Termination t);

struct TrajectoryPoint {
    std::size_t k = 0;
    StateVector x;
    double residual = 0.0;  ///< |f(x) - x|_inf
    double spread = 0.0;
};

struct Trajectory {
    explicit Trajectory(StateVector x0) : initial(x0), terminal(std::move(x0)) {}

    StateVector initial;
    std::vector<TrajectoryPoint> points;  ///< stored iterates, increasing k
    std::size_t iterations = 0;           ///< index k of the terminal state
    Termination termination = Termination::BudgetExceeded;
    StateVector terminal;  ///< x_bar, consensus point or last state
    double residual = 0.0;                ///< |f(terminal) - terminal|_inf
    double spread = 0.0;
    std::optional<std::size_t> period;    ///< PeriodicSuspected only
    /// PositivityViolation only: component and value of the negative output.
    std::optional<std::size_t> violation_index;
    std::optional<double> violation_value;
    std::string message;

    bool converged() const {
        return termination == Termination::FixedPoint || termination == Termination::Consensus;
    }
    /// Mean of the terminal state, meaningful for Consensus.
    double consensus_value() const;
};

double spread(const StateVector& x);

/// Iterates x(k+1) = f(x(k)) until a terminal classification triggers.
Trajectory run(const SystemMap& f, const StateVector& x0, const RunConfig& cfg = {});

/// Smallest p >= 2 with |x(k) - x(k - p)|_inf <= tol for every k in the
/// window. None when the window is (numerically) constant or aperiodic.
std::optional<std::size_t> detect_period(const std::vector<StateVector>& window, double tol);

/// Terminal state of run() when it is FixedPoint or Consensus.
std::optional<StateVector> find_fixed_point(const SystemMap& f, const StateVector& x0, const RunConfig& cfg = {});

enum class MonotoneDirection { None, Decreasing, Increasing };

struct LemmaAudit {
    /// Steps k where support(x(k)) is not contained in support(x(k+1)).
    std::vector<std::size_t> support_violations;
    /// First stored step from which the support stays constant.
    std::size_t part_stable_from = 0;
    /// Support constant over the last tenth of the stored iterates.
    bool part_stabilized = false;
    MonotoneDirection direction = MonotoneDirection::None;
    /// Steps breaking the monotone direction fixed by x(1) vs x(0).
    std::vector<std::size_t> monotone_violations;

    bool ok() const { return support_violations.empty() && monotone_violations.empty(); }
};

/// Audits the stored iterates against the zero-pattern, part-stabilization
/// and monotone-trajectory lemmas for type-K maps. Consecutive stored
/// iterates are compared, so a thinned trajectory is audited on its stored
/// points only.
LemmaAudit trajectory_lemma_audit(const Trajectory& t, double zero_tol = kDefaultZeroTol,
                                  double monotone_slack = 1e-12);

/// CSV "k,x1,...,xn,residual,spread", one row per stored iterate.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

}  // namespace mas

#include "monotone_mas/simulate.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/metric.hpp"

namespace mas {

void RunConfig::validate() const {
    if (max_iters < 1) throw PreconditionError("max_iters must be >= 1");
    if (!(fixed_tol > 0.0)) throw PreconditionError("fixed_tol must be > 0");
    if (!(consensus_tol > 0.0)) throw PreconditionError("consensus_tol must be > 0");
    if (period_window < 2) throw PreconditionError("period_window must be >= 2");
    if (stride < 1) throw PreconditionError("stride must be >= 1");
    if (!(zero_tol >= 0.0)) throw PreconditionError("zero_tol must be >= 0");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::FixedPoint: return "FixedPoint";
        case Termination::Consensus: return "Consensus";
        case Termination::PeriodicSuspected: return "PeriodicSuspected";
        case Termination::BudgetExceeded: return "BudgetExceeded";
        case Termination::PositivityViolation: return "PositivityViolation";
        case Termination::NonFinite: return "NonFinite";
    }
    return "?";
}

double spread(const StateVector& x) { return x.max() - x.min(); }

double Trajectory::consensus_value() const {
    return std::accumulate(terminal.begin(), terminal.end(), 0.0) / static_cast<double>(terminal.size());
}

namespace {

bool should_store(std::size_t k, const RunConfig& cfg) {
    std::size_t step = cfg.stride;
    if (k >= cfg.dense_steps && cfg.dense_steps > 0) {
        // stride x10 per decade past the dense prefix
        std::size_t bound = cfg.dense_steps;
        while (k >= bound && step < std::numeric_limits<std::size_t>::max() / 10) {
            step *= 10;
            if (bound > std::numeric_limits<std::size_t>::max() / 10) break;
            bound *= 10;
        }
    }
    return k % step == 0;
}

void store(Trajectory& t, std::size_t k, const StateVector& x, double residual, double spr) {
    if (!t.points.empty() && t.points.back().k == k) return;
    t.points.push_back({k, x, residual, spr});
}

// A converged c 1 is a consensus when neighbouring consensus states are
// fixed as well, i.e. it sits on a line of fixed points.
bool on_consensus_line(const SystemMap& f, double c, double tol) {
    const std::size_t n = f.dimension();
    for (double probe : {0.5 * c, c + 0.5 * std::max(1.0, c)}) {
        try {
            const std::vector<double> x(n, probe);
            if (sup_dist(f.evaluate_raw(x), x) > tol * std::max(1.0, probe)) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

}  // namespace

Trajectory run(const SystemMap& f, const StateVector& x0, const RunConfig& cfg) {
    cfg.validate();
    if (x0.size() != f.dimension()) throw DimensionMismatch(f.dimension(), x0.size());

    Trajectory t{x0};
    std::deque<StateVector> window;
    const std::size_t check_every = std::max<std::size_t>(1, cfg.period_window / 4);
    StateVector x = x0;

    for (std::size_t k = 0;; ++k) {
        const double spr = spread(x);
        t.iterations = k;
        t.terminal = x;
        t.spread = spr;

        std::vector<double> raw;
        try {
            raw = f.evaluate_raw(x.entries());
        } catch (const Error& e) {
            t.termination = Termination::NonFinite;
            t.residual = std::numeric_limits<double>::infinity();
            t.message = e.what();
            store(t, k, x, t.residual, spr);
            return t;
        }
        const double residual = sup_dist(raw, x.entries());
        t.residual = residual;

        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] < 0.0) {
                t.termination = Termination::PositivityViolation;
                t.violation_index = i;
                t.violation_value = raw[i];
                t.message = fmt::format("f_{}(x({})) = {} < 0", i + 1, k, raw[i]);
                store(t, k, x, residual, spr);
                return t;
            }
        }

        if (should_store(k, cfg)) store(t, k, x, residual, spr);

        if (residual <= cfg.fixed_tol) {
            const bool consensus =
                spr <= cfg.consensus_tol && on_consensus_line(f, t.consensus_value(), 1e-9);
            t.termination = consensus ? Termination::Consensus : Termination::FixedPoint;
            store(t, k, x, residual, spr);
            return t;
        }
        if (k >= cfg.max_iters) {
            t.termination = Termination::BudgetExceeded;
            store(t, k, x, residual, spr);
            return t;
        }

        window.push_back(x);
        if (window.size() > cfg.period_window) window.pop_front();
        if (window.size() == cfg.period_window && k % check_every == 0) {
            const std::vector<StateVector> snapshot(window.begin(), window.end());
            if (const auto p = detect_period(snapshot, cfg.fixed_tol)) {
                t.termination = Termination::PeriodicSuspected;
                t.period = p;
                t.message = fmt::format("iterates repeat with period {} over the last {} steps", *p, snapshot.size());
                store(t, k, x, residual, spr);
                return t;
            }
        }
        x = StateVector(std::move(raw));
    }
}

std::optional<std::size_t> detect_period(const std::vector<StateVector>& window, double tol) {
    if (window.size() < 2) throw PreconditionError("period window needs at least 2 states");
    auto repeats_with = [&](std::size_t p) {
        for (std::size_t k = p; k < window.size(); ++k)
            if (sup_dist(window[k], window[k - p]) > tol) return false;
        return true;
    };
    if (repeats_with(1)) return std::nullopt;
    for (std::size_t p = 2; 2 * p <= window.size(); ++p)
        if (repeats_with(p)) return p;
    return std::nullopt;
}

std::optional<StateVector> find_fixed_point(const SystemMap& f, const StateVector& x0, const RunConfig& cfg) {
    const Trajectory t = run(f, x0, cfg);
    if (t.converged()) return t.terminal;
    return std::nullopt;
}

LemmaAudit trajectory_lemma_audit(const Trajectory& t, double zero_tol, double monotone_slack) {
    LemmaAudit a;
    const auto& pts = t.points;
    if (pts.empty()) {
        a.part_stabilized = true;
        return a;
    }

    std::size_t last_change = 0;
    for (std::size_t s = 1; s < pts.size(); ++s) {
        const Part before = part_of(pts[s - 1].x, zero_tol);
        const Part after = part_of(pts[s].x, zero_tol);
        if (!part_leq(before, after)) a.support_violations.push_back(pts[s - 1].k);
        if (before != after) last_change = s;
    }
    a.part_stable_from = pts[last_change].k;
    const std::size_t tail = std::max<std::size_t>(1, pts.size() / 10);
    a.part_stabilized = pts.size() - last_change >= tail;

    if (pts.size() >= 2 && pts[0].k == 0 && pts[1].k == 1) {
        const OrderRelation first = compare(pts[1].x, pts[0].x);
        if (first == OrderRelation::Lneq || first == OrderRelation::StrictLt) a.direction = MonotoneDirection::Decreasing;
        if (first == OrderRelation::Gneq || first == OrderRelation::StrictGt) a.direction = MonotoneDirection::Increasing;
    }
    if (a.direction != MonotoneDirection::None) {
        const double sign = a.direction == MonotoneDirection::Decreasing ? 1.0 : -1.0;
        for (std::size_t s = 1; s < pts.size(); ++s) {
            const StateVector& prev = pts[s - 1].x;
            const StateVector& next = pts[s].x;
            for (std::size_t i = 0; i < prev.size(); ++i) {
                // Decreasing: next <= prev; increasing: next >= prev.
                const double excess = sign * (next[i] - prev[i]);
                if (excess > monotone_slack * std::max(1.0, std::abs(prev[i]))) {
                    a.monotone_violations.push_back(pts[s - 1].k);
                    break;
                }
            }
        }
    }
    return a;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    const std::size_t n = t.initial.size();
    out << 'k';
    for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
    out << ",residual,spread\n";
    for (const auto& p : t.points) {
        out << p.k;
        for (double v : p.x) out << ',' << fmt::format("{}", v);
        out << ',' << fmt::format("{}", p.residual) << ',' << fmt::format("{}", p.spread) << '\n';
    }
}

}  // namespace mas

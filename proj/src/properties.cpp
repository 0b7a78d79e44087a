#include "monotone_mas/properties.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/metric.hpp"
#include "monotone_mas/parallel.hpp"
#include "monotone_mas/simulate.hpp"

namespace mas {

std::string to_string(PropertyId id) {
    switch (id) {
        case PropertyId::Positivity: return "Positivity";
        case PropertyId::OrderPreserving: return "OrderPreserving";
        case PropertyId::KamkeTypeK: return "KamkeTypeK";
        case PropertyId::TypeKDirect: return "TypeKDirect";
        case PropertyId::SubHomogeneity: return "SubHomogeneity";
        case PropertyId::ThompsonNonExpansive: return "ThompsonNonExpansive";
        case PropertyId::ConsensusFixedLine: return "ConsensusFixedLine";
        case PropertyId::RowStochasticJacobian: return "RowStochasticJacobian";
        case PropertyId::GloballyReachable: return "GloballyReachable";
        case PropertyId::Aperiodic: return "Aperiodic";
        case PropertyId::PositiveFixedPoint: return "PositiveFixedPoint";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> default_alphas() { return {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}; }

namespace {

struct SampleResult {
    enum class Kind { Ok, Violation, Skipped, Error } kind = Kind::Ok;
    Witness witness;
    std::string reason;

    static SampleResult ok() { return {}; }
    static SampleResult violation(Witness w) { return {Kind::Violation, std::move(w), {}}; }
    static SampleResult skipped(std::string why) { return {Kind::Skipped, {}, std::move(why)}; }
    static SampleResult error(std::string why) { return {Kind::Error, {}, std::move(why)}; }
};

struct CheckSettings {
    PropertyId id;
    double tol;
    std::uint64_t seed;
    bool skips_allowed = false;  // Kamke: skipped samples tolerated up to 10%
};

// Runs `body` for every sample index in parallel and folds the outcomes in
// index order, so the verdict and witness do not depend on scheduling.
template <typename Body>
PropertyReport run_sampled(const CheckSettings& cs, std::size_t total, Body&& body) {
    std::vector<SampleResult> results(total);
    parallel_for(total, [&](std::size_t k) {
        try {
            results[k] = body(k);
        } catch (const Error& e) {
            results[k] = cs.skips_allowed ? SampleResult::skipped(e.what()) : SampleResult::error(e.what());
        }
    });

    PropertyReport r{cs.id};
    r.samples = total;
    r.tolerance = cs.tol;
    r.seed = cs.seed;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < total; ++k) {
        auto& res = results[k];
        switch (res.kind) {
            case SampleResult::Kind::Ok: break;
            case SampleResult::Kind::Skipped: ++skipped; break;
            case SampleResult::Kind::Violation:
                r.verdict = Verdict::Fail;
                r.witness = std::move(res.witness);
                r.message = fmt::format("counterexample at sample {}", k);
                return r;
            case SampleResult::Kind::Error:
                r.verdict = Verdict::Inconclusive;
                r.message = fmt::format("evaluation failed at sample {}: {}", k, res.reason);
                return r;
        }
    }
    if (skipped * 10 > total) {
        r.verdict = Verdict::Inconclusive;
        r.message = fmt::format("{} of {} samples skipped", skipped, total);
        return r;
    }
    r.verdict = Verdict::Pass;
    r.message = skipped > 0 ? fmt::format("no counterexample under sampling budget ({} skipped)", skipped)
                            : "no counterexample under sampling budget";
    return r;
}


// Builds y with x <= y, x != y inside [0, bound]^n by raising a random
// non-empty subset of coordinates. Returns nullopt if no coordinate has room.
std::optional<StateVector> raise_some(CounterRng& rng, const StateVector& x, double bound) {
    const std::size_t n = x.size();
    std::vector<double> y = x.vector();
    const double scale = bound * std::pow(10.0, rng.uniform(-3.0, -0.5));
    std::vector<bool> chosen(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        chosen[i] = rng.coin();
        any = any || chosen[i];
    }
    if (!any) chosen[rng.below(n)] = true;
    bool raised = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) continue;
        const double d = std::min(scale * rng.uniform(0.1, 1.0), bound - x[i]);
        if (d > 0.0) {
            y[i] += d;
            raised = true;
        }
    }
    if (!raised) {
        for (std::size_t i = 0; i < n; ++i) {
            if (bound - x[i] > 0.0) {
                y[i] += std::min(scale, bound - x[i]);
                raised = true;
                break;
            }
        }
    }
    if (!raised) return std::nullopt;
    return StateVector(std::move(y));
}

std::vector<double> ones_scaled(std::size_t n, double c) { return std::vector<double>(n, c); }

}  // namespace

PropertyReport check_positivity(const SystemMap& f, const SampleSpec& s) {
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("positivity");
    return run_sampled({PropertyId::Positivity, 0.0, s.seed}, s.total(), [&](std::size_t k) {
        const StateVector x = draw_sample(s, n, purpose, k);
        const std::vector<double> y = f.evaluate_raw(x.entries());
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] < 0.0) return SampleResult::violation({{x.vector()}, {i}, {{"value", y[i]}}});
        }
        return SampleResult::ok();
    });
}

PropertyReport check_order_preserving(const SystemMap& f, const SampleSpec& s, double tol) {
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("order_preserving");
    return run_sampled({PropertyId::OrderPreserving, tol, s.seed}, s.total(), [&](std::size_t k) {
        const StateVector x = draw_sample(s, n, purpose, k);
        CounterRng rng = CounterRng(s.seed).split(purpose).split("pair").split(static_cast<std::uint64_t>(k));
        const auto y = raise_some(rng, x, s.bound);
        if (!y) return SampleResult::ok();
        const auto fx = f.evaluate_raw(x.entries());
        const auto fy = f.evaluate_raw(y->entries());
        for (std::size_t i = 0; i < n; ++i) {
            if (fx[i] > fy[i] + tol) {
                return SampleResult::violation({{x.vector(), y->vector()}, {i}, {{"fx", fx[i]}, {"fy", fy[i]}}});
            }
        }
        return SampleResult::ok();
    });
}

PropertyReport check_kamke(const SystemMap& f, const SampleSpec& s, double tol) {
    if (tol < 0.0) throw PreconditionError("tol must be >= 0");
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("kamke");
    CheckSettings cs{PropertyId::KamkeTypeK, tol, s.seed, true};
    return run_sampled(cs, s.total(), [&](std::size_t k) {
        const StateVector x = draw_sample(s, n, purpose, k);
        const JacobianMatrix j = jacobian(f, x);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const double v = j(r, c);
                const bool bad = (r == c) ? !(v > tol) : (v < -tol);
                if (bad) return SampleResult::violation({{x.vector()}, {r, c}, {{"value", v}}});
            }
        }
        return SampleResult::ok();
    });
}

PropertyReport check_type_k_direct(const SystemMap& f, const SampleSpec& s, double tol) {
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("type_k_direct");
    return run_sampled({PropertyId::TypeKDirect, tol, s.seed}, s.total(), [&](std::size_t k) {
        const StateVector x = draw_sample(s, n, purpose, k);
        CounterRng rng = CounterRng(s.seed).split(purpose).split("pair").split(static_cast<std::uint64_t>(k));
        const auto y = raise_some(rng, x, s.bound);
        if (!y) return SampleResult::ok();
        const auto fx = f.evaluate_raw(x.entries());
        const auto fy = f.evaluate_raw(y->entries());
        for (std::size_t i = 0; i < n; ++i) {
            const bool equal = x[i] == (*y)[i];
            const bool ok = equal ? fx[i] <= fy[i] + tol : fx[i] < fy[i];
            if (!ok) {
                return SampleResult::violation(
                    {{x.vector(), y->vector()}, {i}, {{"condition", equal ? 1.0 : 2.0}, {"fx", fx[i]}, {"fy", fy[i]}}});
            }
        }
        return SampleResult::ok();
    });
}

PropertyReport check_subhomogeneity(const SystemMap& f, const SampleSpec& s, const std::vector<double>& alphas,
                                    double tol) {
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw PreconditionError(fmt::format("alpha {} outside [0, 1]", a));
    }
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("subhomogeneity");
    PropertyReport r =
        run_sampled({PropertyId::SubHomogeneity, tol, s.seed}, s.total(), [&](std::size_t k) {
            const StateVector x = draw_sample(s, n, purpose, k);
            const auto fx = f.evaluate_raw(x.entries());
            for (double a : alphas) {
                const auto fax = f.evaluate_raw(x.scaled(a).entries());
                for (std::size_t i = 0; i < n; ++i) {
                    if (a * fx[i] > fax[i] + tol) {
                        return SampleResult::violation(
                            {{x.vector()}, {i}, {{"alpha", a}, {"alpha_fx", a * fx[i]}, {"f_alpha_x", fax[i]}}});
                    }
                }
            }
            return SampleResult::ok();
        });
    r.samples *= std::max<std::size_t>(1, alphas.size());
    return r;
}

PropertyReport check_nonexpansive_thompson(const SystemMap& f, const SampleSpec& s, double tol,
                                           double interior_margin) {
    s.validate();
    const std::size_t n = f.dimension();
    const std::uint64_t purpose = hash_label("thompson");
    const double lo = interior_margin * s.bound;
    return run_sampled({PropertyId::ThompsonNonExpansive, tol, s.seed}, s.count, [&](std::size_t k) {
        CounterRng rng = CounterRng(s.seed).split(purpose).split(static_cast<std::uint64_t>(k));
        const StateVector x = draw_box(rng, n, lo, s.bound);
        const StateVector y = draw_box(rng, n, lo, s.bound);
        const auto fx = f.evaluate_raw(x.entries());
        const auto fy = f.evaluate_raw(y.entries());
        const double before = thompson(x, y).to_double();
        for (std::size_t i = 0; i < n; ++i) {
            if (fx[i] < 0.0 || fy[i] < 0.0) {
                return SampleResult::violation({{x.vector(), y.vector()}, {i}, {{"d_before", before}}});
            }
        }
        const ExtendedDistance after = thompson(StateVector(fx), StateVector(fy));
        if (after.is_infinite() || after.value() > before + tol) {
            return SampleResult::violation(
                {{x.vector(), y.vector()}, {}, {{"d_before", before}, {"d_after", after.to_double()}}});
        }
        return SampleResult::ok();
    });
}

PropertyReport check_consensus_fixed_line(const SystemMap& f, const std::vector<double>& c_values, double tol) {
    const std::size_t n = f.dimension();
    PropertyReport r{PropertyId::ConsensusFixedLine};
    r.samples = c_values.size();
    r.tolerance = tol;
    for (double c : c_values) {
        if (!(c >= 0.0)) throw PreconditionError("consensus values must be >= 0");
        const auto point = ones_scaled(n, c);
        std::vector<double> y;
        try {
            y = f.evaluate_raw(point);
        } catch (const Error& e) {
            r.verdict = Verdict::Inconclusive;
            r.message = fmt::format("evaluation at c = {} failed: {}", c, e.what());
            return r;
        }
        const double residual = sup_dist(y, point);
        if (residual > tol) {
            r.verdict = Verdict::Fail;
            r.witness = Witness{{point}, {}, {{"c", c}, {"residual", residual}}};
            r.message = fmt::format("c 1 is not fixed for c = {}", c);
            return r;
        }
    }
    r.verdict = Verdict::Pass;
    r.message = "no counterexample under sampling budget";
    return r;
}

PropertyReport check_row_stochastic_at_consensus(const SystemMap& f, const std::vector<double>& c_values, double tol) {
    const std::size_t n = f.dimension();
    PropertyReport r{PropertyId::RowStochasticJacobian};
    r.samples = c_values.size();
    r.tolerance = tol;
    for (double c : c_values) {
        if (!(c > 0.0)) throw PreconditionError("row-stochastic check needs c > 0");
        const StateVector point = StateVector::constant(n, c);
        const double residual = sup_dist(f.evaluate_raw(point.entries()), point.entries());
        if (residual > kDirectTol) {
            throw PreconditionError(
                fmt::format("{}: c 1 with c = {} is not a fixed point (residual {})", f.name(), c, residual));
        }
        JacobianMatrix j;
        try {
            j = jacobian(f, point);
        } catch (const Error& e) {
            r.verdict = Verdict::Inconclusive;
            r.message = fmt::format("Jacobian at c = {} failed: {}", c, e.what());
            return r;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += j(i, k);
            if (std::abs(sum - 1.0) > tol) {
                r.verdict = Verdict::Fail;
                r.witness = Witness{{point.vector()}, {i}, {{"c", c}, {"row_sum", sum}}};
                r.message = fmt::format("row {} sums to {} at c = {}", i + 1, sum, c);
                return r;
            }
        }
    }
    r.verdict = Verdict::Pass;
    r.message = "no counterexample under sampling budget";
    return r;
}

PropertyReport check_row_stochastic_at_consensus(const SystemMap& f, double c, double tol) {
    return check_row_stochastic_at_consensus(f, std::vector<double>{c}, tol);
}

PropertyReport check_globally_reachable(const InferenceGraph& g) {
    PropertyReport r{PropertyId::GloballyReachable};
    if (const auto node = has_globally_reachable_node(g)) {
        r.verdict = Verdict::Pass;
        r.message = fmt::format("node {} is globally reachable", *node + 1);
        return r;
    }
    const SccDecomposition scc = strongly_connected_components(g);
    std::vector<bool> is_sink(scc.members.size(), true);
    for (const auto& [i, j] : g.edges())
        if (scc.component[i] != scc.component[j]) is_sink[scc.component[i]] = false;
    Witness w;
    for (std::size_t c = 0; c < is_sink.size(); ++c)
        if (is_sink[c]) w.indices.push_back(scc.members[c].front());
    std::sort(w.indices.begin(), w.indices.end());
    w.values["sink_components"] = static_cast<double>(w.indices.size());
    r.verdict = Verdict::Fail;
    r.witness = std::move(w);
    r.message = "condensation has more than one sink component";
    return r;
}

PropertyReport check_aperiodic(const InferenceGraph& g) {
    PropertyReport r{PropertyId::Aperiodic};
    Witness w;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.has_self_loop(i)) w.indices.push_back(i);
    if (w.indices.empty()) {
        r.verdict = Verdict::Pass;
        r.message = "every node has a self-loop";
    } else {
        r.verdict = Verdict::Fail;
        r.witness = std::move(w);
        r.message = "nodes without self-loop";
    }
    return r;
}

PropertyReport check_positive_fixed_point(const SystemMap& f, const std::optional<StateVector>& witness,
                                          double residual_tol, double zero_tol) {
    PropertyReport r{PropertyId::PositiveFixedPoint};
    r.tolerance = residual_tol;
    r.samples = witness ? 1 : 0;
    if (!witness) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{};
        r.message = "no fixed point found";
        return r;
    }
    const double residual = sup_dist(f.evaluate_raw(witness->entries()), witness->entries());
    bool positive = true;
    for (double v : *witness) positive = positive && v > zero_tol;
    if (residual <= residual_tol && positive) {
        r.verdict = Verdict::Pass;
        r.message = "positive fixed point verified";
        r.witness = Witness{{witness->vector()}, {}, {{"residual", residual}}};  // kept for reference
        return r;
    }
    r.verdict = Verdict::Fail;
    r.witness = Witness{{witness->vector()}, {}, {{"residual", residual}}};
    r.message = positive ? "candidate is not a fixed point" : "fixed point is not strictly positive";
    return r;
}

std::optional<bool> reverify_witness(const SystemMap& f, const PropertyReport& r) {
    if (!r.failed() || !r.witness) return std::nullopt;
    const Witness& w = *r.witness;
    auto point = [&](std::size_t k) { return StateVector(w.points.at(k)); };
    switch (r.property) {
        case PropertyId::Positivity: {
            const auto y = f.evaluate_raw(point(0).entries());
            return y.at(w.indices.at(0)) < 0.0;
        }
        case PropertyId::OrderPreserving: {
            const std::size_t i = w.indices.at(0);
            return f.evaluate_raw(point(0).entries()).at(i) > f.evaluate_raw(point(1).entries()).at(i) + r.tolerance;
        }
        case PropertyId::KamkeTypeK: {
            const JacobianMatrix j = jacobian(f, point(0));
            const std::size_t a = w.indices.at(0), b = w.indices.at(1);
            return a == b ? !(j(a, b) > r.tolerance) : j(a, b) < -r.tolerance;
        }
        case PropertyId::TypeKDirect: {
            const std::size_t i = w.indices.at(0);
            const StateVector x = point(0), y = point(1);
            const double fx = f.evaluate_raw(x.entries()).at(i), fy = f.evaluate_raw(y.entries()).at(i);
            if (!implies(compare(x, y), OrderRelation::Lneq)) return false;
            return x[i] == y[i] ? fx > fy + r.tolerance : !(fx < fy);
        }
        case PropertyId::SubHomogeneity: {
            const std::size_t i = w.indices.at(0);
            const double a = w.values.at("alpha");
            const StateVector x = point(0);
            return a * f.evaluate_raw(x.entries()).at(i) > f.evaluate_raw(x.scaled(a).entries()).at(i) + r.tolerance;
        }
        case PropertyId::ThompsonNonExpansive: {
            const StateVector x = point(0), y = point(1);
            const auto fx = f.evaluate_raw(x.entries()), fy = f.evaluate_raw(y.entries());
            for (std::size_t i = 0; i < fx.size(); ++i)
                if (fx[i] < 0.0 || fy[i] < 0.0) return true;
            const ExtendedDistance after = thompson(StateVector(fx), StateVector(fy));
            return after.is_infinite() || after.value() > thompson(x, y).to_double() + r.tolerance;
        }
        case PropertyId::ConsensusFixedLine: {
            const StateVector x = point(0);
            return sup_dist(f.evaluate_raw(x.entries()), x.entries()) > r.tolerance;
        }
        case PropertyId::RowStochasticJacobian: {
            const JacobianMatrix j = jacobian(f, point(0));
            const std::size_t i = w.indices.at(0);
            double sum = 0.0;
            for (std::size_t k = 0; k < j.size(); ++k) sum += j(i, k);
            return std::abs(sum - 1.0) > r.tolerance;
        }
        case PropertyId::GloballyReachable:
        case PropertyId::Aperiodic:
        case PropertyId::PositiveFixedPoint:
            return std::nullopt;
    }
    return std::nullopt;
}

Verdict combine(const std::vector<PropertyReport>& reports) {
    bool inconclusive = false;
    for (const auto& r : reports) {
        if (r.failed()) return Verdict::Fail;
        inconclusive = inconclusive || r.verdict == Verdict::Inconclusive;
    }
    return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

namespace {

double kamke_tol(const SystemMap& f) { return f.has_jacobian() ? kDirectTol : kFiniteDifferenceTol; }

std::optional<StateVector> search_positive_fixed_point(const SystemMap& f, const SampleSpec& s) {
    const std::size_t n = f.dimension();
    std::vector<StateVector> starts{StateVector::constant(n, s.bound), StateVector::constant(n, 0.5 * s.bound)};
    CounterRng rng = CounterRng(s.seed).split("fixed_point_search");
    for (int k = 0; k < 3; ++k) starts.push_back(draw_box(rng, n, 0.1 * s.bound, s.bound));
    std::optional<StateVector> fallback;
    for (const auto& x0 : starts) {
        auto fp = find_fixed_point(f, x0);
        if (!fp) continue;
        if (fp->min() > kDefaultZeroTol) return fp;
        if (!fallback) fallback = fp;
    }
    return fallback;
}

}  // namespace

TheoremReport theorem8_report(const SystemMap& f, const SampleSpec& s, const std::optional<StateVector>& fixed_point) {
    TheoremReport t;
    t.theorem = 8;
    t.conditions.push_back(check_positivity(f, s));
    t.conditions.push_back(check_kamke(f, s, kamke_tol(f)));
    t.conditions.push_back(check_subhomogeneity(f, s, default_alphas()));
    const std::optional<StateVector> fp = fixed_point ? fixed_point : search_positive_fixed_point(f, s);
    t.conditions.push_back(check_positive_fixed_point(f, fp, RunConfig{}.fixed_tol));
    t.supplementary.push_back(check_type_k_direct(f, s));
    t.supplementary.push_back(check_nonexpansive_thompson(f, s));
    t.overall = combine(t.conditions);
    return t;
}

TheoremReport theorem9_report(const SystemMap& f, const std::optional<InferenceGraph>& g, const SampleSpec& s) {
    TheoremReport t;
    t.theorem = 9;
    const double b = s.bound;
    t.conditions.push_back(check_positivity(f, s));
    t.conditions.push_back(check_kamke(f, s, kamke_tol(f)));
    t.conditions.push_back(check_subhomogeneity(f, s, default_alphas()));
    t.conditions.push_back(check_consensus_fixed_line(f, {0.0, 0.05 * b, 0.1 * b, 0.25 * b, 0.5 * b, 0.75 * b, b}));

    std::optional<InferenceGraph> graph = g;
    if (!graph) {
        try {
            graph = infer_graph(f, s);
        } catch (const Error& e) {
            PropertyReport r{PropertyId::GloballyReachable};
            r.message = std::string("graph inference failed: ") + e.what();
            t.conditions.push_back(r);
        }
    }
    if (graph) t.conditions.push_back(check_globally_reachable(*graph));

    if (t.conditions[3].passed()) {
        const double fd = f.has_jacobian() ? kDirectTol : kFiniteDifferenceTol;
        t.supplementary.push_back(check_row_stochastic_at_consensus(f, {0.05 * b, 0.1 * b, 0.3 * b}, fd));
    } else {
        PropertyReport r{PropertyId::RowStochasticJacobian};
        r.message = "skipped: consensus points are not fixed";
        t.supplementary.push_back(r);
    }
    if (graph) t.supplementary.push_back(check_aperiodic(*graph));
    t.supplementary.push_back(check_type_k_direct(f, s));
    t.supplementary.push_back(check_nonexpansive_thompson(f, s));
    t.overall = combine(t.conditions);
    return t;
}

nlohmann::json to_json(const PropertyReport& r) {
    nlohmann::json j;
    j["property"] = to_string(r.property);
    j["verdict"] = to_string(r.verdict);
    if (r.passed()) j["semantics"] = "no counterexample found under the sampling budget";
    j["samples"] = r.samples;
    j["tolerance"] = r.tolerance;
    j["seed"] = r.seed;
    j["message"] = r.message;
    if (r.witness) {
        nlohmann::json w;
        w["points"] = r.witness->points;
        std::vector<std::size_t> one_based;
        for (std::size_t i : r.witness->indices) one_based.push_back(i + 1);
        w["indices"] = one_based;
        w["values"] = r.witness->values;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const TheoremReport& t) {
    nlohmann::json j;
    j["theorem"] = t.theorem;
    j["overall"] = to_string(t.overall);
    j["conditions"] = nlohmann::json::array();
    for (const auto& r : t.conditions) j["conditions"].push_back(to_json(r));
    j["supplementary"] = nlohmann::json::array();
    for (const auto& r : t.supplementary) j["supplementary"].push_back(to_json(r));
    return j;
}

}  // namespace mas

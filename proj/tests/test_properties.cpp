#include <doctest.h>

#include <cmath>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/metric.hpp"
#include "monotone_mas/properties.hpp"
#include "support.hpp"

using namespace mas;

namespace {

SampleSpec spec(std::uint64_t seed, double bound = 1.0, std::size_t count = 1000) {
    SampleSpec s;
    s.seed = seed;
    s.bound = bound;
    s.count = count;
    return s;
}

Digraph chord_cycle() { return Digraph(5, {{0, 4}, {1, 0}, {2, 1}, {3, 2}, {4, 3}, {2, 0}, {4, 1}}); }

SystemMap sis_fig2a() {
    const Digraph g(5, {{1, 0}, {2, 0}, {3, 1}, {4, 2}});
    return make_sis(g, SisParams::uniform(g, 0.5, 0.5, 0.5));
}

SystemMap arctan_fig2b() { return make_arctan(chord_cycle(), std::vector<double>(5, 0.1)); }

const Verdict kPass = Verdict::Pass;
const Verdict kFail = Verdict::Fail;

void require_reverified(const SystemMap& f, const PropertyReport& r) {
    REQUIRE(r.verdict == kFail);
    REQUIRE(r.witness.has_value());
    const auto again = reverify_witness(f, r);
    REQUIRE(again.has_value());
    CHECK(*again);
}

}  // namespace

TEST_CASE("positivity examples") {
    CHECK(check_positivity(sis_fig2a(), spec(1)).verdict == kPass);
    CHECK(check_positivity(arctan_fig2b().with_domain_bound(10), spec(1, 10)).verdict == kPass);
    const SystemMap shift = test::shift_down_map(1);
    const PropertyReport r = check_positivity(shift, spec(1));
    require_reverified(shift, r);
    CHECK(r.witness->indices == std::vector<std::size_t>{0});
    CHECK(r.witness->values.at("value") < 0.0);
    CHECK(r.samples == 1250);
}

TEST_CASE("positivity is inconclusive when evaluation fails") {
    const SystemMap nan_map("nan", 1, [](std::span<const double>) { return std::vector<double>{NAN}; }, 1.0);
    CHECK(check_positivity(nan_map, spec(1)).verdict == Verdict::Inconclusive);
}

TEST_CASE("kamke examples") {
    const Counterexamples c = make_counterexamples();
    const PropertyReport swap = check_kamke(c.swap, spec(2), kFiniteDifferenceTol);
    require_reverified(c.swap, swap);
    CHECK(swap.witness->indices.size() == 2);
    CHECK(swap.witness->indices[0] == swap.witness->indices[1]);

    Eigen::MatrixXd a(3, 3);
    a << 0.2, 0.8, 0.0, 0.5, 0.5, 0.0, 0.1, 0.1, 0.8;
    CHECK(check_kamke(make_linear(a), spec(2), kDirectTol).verdict == kPass);

    const Digraph g(2, {{0, 1}, {1, 0}});
    const SystemMap sis = make_sis(g, SisParams::uniform(g, 1.0, 0.6, 0.5));
    const PropertyReport r = check_kamke(sis, spec(2), kDirectTol);
    require_reverified(sis, r);
    CHECK(r.witness->values.at("value") <= kDirectTol);
    CHECK_THROWS_AS(check_kamke(sis, spec(2), -1.0), PreconditionError);
}

TEST_CASE("kamke with finite differences on the sqrt map") {
    const SystemMap f = make_counterexamples().sqrt_shift;
    const PropertyReport r = check_kamke(f, spec(3, 2.0), kFiniteDifferenceTol);
    CHECK(r.verdict == kPass);
}

TEST_CASE("kamke becomes inconclusive when most jacobians fail") {
    const SystemMap f(
        "broken", 2, [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); }, 1.0,
        [](std::span<const double>) -> Eigen::MatrixXd { throw EvaluationError("no jacobian here"); });
    CHECK(check_kamke(f, spec(3), 0.0).verdict == Verdict::Inconclusive);
}

TEST_CASE("type-K direct examples") {
    const Counterexamples c = make_counterexamples();
    const PropertyReport constant = check_type_k_direct(c.constant, spec(4, 2.0));
    require_reverified(c.constant, constant);
    CHECK(constant.witness->values.at("condition") == 2.0);

    CHECK(check_type_k_direct(c.sqrt_shift, spec(4, 2.0)).verdict == kPass);

    const PropertyReport swap = check_type_k_direct(c.swap, spec(4, 2.0));
    require_reverified(c.swap, swap);

    // The pair x = [0, 0], y = [0, 1] by hand: f(x) = [0, 0], f(y) = [1, 0].
    const StateVector fx = eval(c.swap, {0, 0}), fy = eval(c.swap, {0, 1});
    CHECK(fx[1] == fy[1]);
    CHECK(fx[0] <= fy[0]);
}

TEST_CASE("order-preservation holds for the counterexamples") {
    const Counterexamples c = make_counterexamples();
    CHECK(check_order_preserving(c.constant, spec(5, 2.0)).verdict == kPass);
    CHECK(check_order_preserving(c.swap, spec(5, 2.0)).verdict == kPass);
    CHECK(check_order_preserving(c.sqrt_shift, spec(5, 2.0)).verdict == kPass);
    const PropertyReport r = check_order_preserving(test::pointwise("neg", 1, 1.0, [](double v) { return 1.0 - v; },
                                                                    [](double) { return -1.0; }),
                                                    spec(5));
    CHECK(r.verdict == kFail);
}

TEST_CASE("sub-homogeneity examples") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 3.0, 1.0, 0.5;
    CHECK(check_subhomogeneity(make_linear(a), spec(6), default_alphas()).verdict == kPass);

    const Digraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(check_subhomogeneity(make_sis(g, SisParams::uniform(g, 0.5, 0.6, 0.5)), spec(6), default_alphas()).verdict ==
          kPass);

    const SystemMap sq = test::square_map(1);
    const PropertyReport r = check_subhomogeneity(sq, spec(6, 2.0), {0.5});
    require_reverified(sq, r);
    // alpha = 0.5, x = 1: 0.5 * 1 > 0.25.
    CHECK(0.5 * eval(sq, {1.0})[0] > eval(sq, {0.5})[0]);
    CHECK_THROWS_AS(check_subhomogeneity(sq, spec(6), {1.5}), PreconditionError);
}

TEST_CASE("thompson non-expansiveness examples") {
    const SystemMap arctan = arctan_fig2b();
    const PropertyReport arctan_report = check_nonexpansive_thompson(arctan, spec(7, 10.0));
    // Not sub-homogeneous, and it does expand some pairs.
    CHECK(arctan_report.verdict == kFail);
    require_reverified(arctan, arctan_report);

    CHECK(check_nonexpansive_thompson(test::doubling_map(3), spec(7)).verdict == kPass);

    const SystemMap sq = test::square_map(2);
    const PropertyReport r = check_nonexpansive_thompson(sq, spec(7, 2.0));
    require_reverified(sq, r);
    const double before = r.witness->values.at("d_before");
    CHECK(r.witness->values.at("d_after") == doctest::Approx(2.0 * before).epsilon(1e-9));
}

TEST_CASE("arctan with eps = 0.1 is not sub-homogeneous") {
    // Two nodes, node 1 reads node 2: alpha f(x) > f(alpha x) at x = [1, 0], alpha = 0.5.
    const SystemMap f = make_arctan(Digraph(2, {{0, 1}}), {0.1, 0.1});
    const double lhs = 0.5 * eval(f, {1, 0})[0];
    const double rhs = eval(f, {0.5, 0})[0];
    CHECK(lhs == doctest::Approx(0.5 * (1.0 + 0.1 * std::atan(-1.0))));
    CHECK(lhs > rhs);
    const PropertyReport r = check_subhomogeneity(arctan_fig2b(), spec(8, 10.0), default_alphas());
    require_reverified(arctan_fig2b(), r);
}

TEST_CASE("consensus fixed line examples") {
    CHECK(check_consensus_fixed_line(arctan_fig2b(), {0, 1, 2.5, 7}).verdict == kPass);
    const Digraph g(2, {{0, 1}, {1, 0}});
    const SystemMap sis = make_sis(g, SisParams::uniform(g, 0.5, 0.5, 0.5));
    const PropertyReport r = check_consensus_fixed_line(sis, {0.5});
    require_reverified(sis, r);
    CHECK(r.witness->values.at("c") == 0.5);
    CHECK(check_consensus_fixed_line(test::square_map(2), {0.0}).verdict == kPass);
}

TEST_CASE("row-stochastic jacobian at consensus") {
    const SystemMap arctan = arctan_fig2b();
    const PropertyReport r = check_row_stochastic_at_consensus(arctan, 1.0, kFiniteDifferenceTol);
    CHECK(r.verdict == kPass);
    for (double c : {0.5, 1.0, 3.0}) {
        const JacobianMatrix j = jacobian(arctan, StateVector::constant(5, c));
        for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(j.values.row(static_cast<Eigen::Index>(i)).sum() - 1.0) <= 1e-6);
    }
    Eigen::MatrixXd a(2, 2);
    a << 0.25, 0.75, 0.5, 0.5;
    const PropertyReport lin = check_row_stochastic_at_consensus(make_linear(a), {0.5, 2.0}, 0.0);
    CHECK(lin.verdict == kPass);
    CHECK_THROWS_AS(check_row_stochastic_at_consensus(test::doubling_map(2), 1.0, 1e-6), PreconditionError);
}

TEST_CASE("graph property reports") {
    const PropertyReport ok = check_globally_reachable(InferenceGraph::from_edges(3, {{0, 2}, {1, 2}, {2, 2}}));
    CHECK(ok.verdict == kPass);
    const PropertyReport bad = check_globally_reachable(InferenceGraph::from_edges(2, {{0, 0}, {1, 1}}));
    CHECK(bad.verdict == kFail);
    CHECK(bad.witness.has_value());
    CHECK_FALSE(reverify_witness(test::identity_map(2), bad).has_value());
    CHECK(check_aperiodic(InferenceGraph::from_edges(2, {{0, 1}, {1, 0}})).verdict == kFail);
}

TEST_CASE("positive fixed point report") {
    const SystemMap sis = sis_fig2a();
    CHECK(check_positive_fixed_point(sis, StateVector::constant(5, 1.0), 1e-10).verdict == kPass);
    const PropertyReport zero = check_positive_fixed_point(test::identity_map(2), StateVector{0.0, 1.0}, 1e-10);
    CHECK(zero.verdict == kFail);
    CHECK(check_positive_fixed_point(sis, std::nullopt, 1e-10).verdict == kFail);
    CHECK(check_positive_fixed_point(sis, StateVector::constant(5, 0.5), 1e-10).verdict == kFail);
}

TEST_CASE("theorem 8 and 9 aggregates") {
    const TheoremReport sis = theorem8_report(sis_fig2a(), spec(9), StateVector::constant(5, 1.0));
    CHECK(sis.overall == kPass);
    CHECK(sis.conditions.size() == 4);

    const Counterexamples c = make_counterexamples();
    const TheoremReport swap = theorem8_report(c.swap, spec(9, 2.0));
    CHECK(swap.overall == kFail);
    bool kamke_failed = false;
    for (const auto& r : swap.conditions) kamke_failed |= r.property == PropertyId::KamkeTypeK && r.failed();
    CHECK(kamke_failed);

    // The consensus theorem's sub-homogeneity hypothesis is violated by the
    // arctan rule, so its aggregate is a Fail driven by that condition only.
    const TheoremReport arctan = theorem9_report(arctan_fig2b(), std::nullopt, spec(9, 10.0));
    CHECK(arctan.overall == kFail);
    for (const auto& r : arctan.conditions) {
        INFO(to_string(r.property));
        CHECK(r.passed() == (r.property != PropertyId::SubHomogeneity));
    }
}

TEST_CASE("combine verdicts") {
    PropertyReport p{PropertyId::Positivity}, f{PropertyId::KamkeTypeK}, i{PropertyId::SubHomogeneity};
    p.verdict = kPass;
    f.verdict = kFail;
    i.verdict = Verdict::Inconclusive;
    CHECK(combine({p, p}) == kPass);
    CHECK(combine({p, i}) == Verdict::Inconclusive);
    CHECK(combine({i, f, p}) == kFail);
}

TEST_CASE("kamke implies type-K on the same samples") {
    CounterRng rng(51);
    int kamke_passes = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Digraph g = test::random_digraph(rng, 4, 0.4);
        std::vector<SystemMap> maps;
        maps.push_back(make_sis(g, SisParams::uniform(g, rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1))));
        std::vector<double> eps(4);
        for (auto& e : eps) e = rng.uniform(0.01, 0.5);
        maps.push_back(make_arctan(g, eps).with_domain_bound(rng.uniform(1, 10)));
        Eigen::MatrixXd a(4, 4);
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 4; ++c) a(r, c) = rng.coin() ? rng.uniform(0, 1) : 0.0;
        maps.push_back(make_linear(a));
        for (const SystemMap& f : maps) {
            const SampleSpec s = spec(static_cast<std::uint64_t>(trial), f.domain_bound(), 300);
            if (check_kamke(f, s, kDirectTol).verdict != kPass) continue;
            ++kamke_passes;
            INFO(f.name());
            CHECK(check_type_k_direct(f, s).verdict == kPass);
        }
    }
    CHECK(kamke_passes > 20);
}

TEST_CASE("kamke and sub-homogeneity imply thompson non-expansiveness") {
    CounterRng rng(52);
    int both = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Digraph g = test::random_digraph(rng, 4, 0.4);
        std::vector<SystemMap> maps;
        maps.push_back(make_sis(g, SisParams::uniform(g, rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 0.6))));
        Eigen::MatrixXd a(4, 4);
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 4; ++c) a(r, c) = (r == c || rng.coin()) ? rng.uniform(0.05, 1) : 0.0;
        maps.push_back(make_linear(a));
        for (const SystemMap& f : maps) {
            const SampleSpec s = spec(static_cast<std::uint64_t>(trial), f.domain_bound(), 300);
            if (check_kamke(f, s, kDirectTol).verdict != kPass) continue;
            if (check_subhomogeneity(f, s, default_alphas()).verdict != kPass) continue;
            ++both;
            INFO(f.name());
            CHECK(check_nonexpansive_thompson(f, s).verdict == kPass);
        }
    }
    CHECK(both > 10);
}

TEST_CASE("every fail witness re-verifies") {
    const Counterexamples c = make_counterexamples();
    const SystemMap arctan = arctan_fig2b();
    const SystemMap sq = test::square_map(2);
    const std::vector<std::pair<SystemMap, PropertyReport>> cases = {
        {c.swap, check_kamke(c.swap, spec(10, 2.0), kFiniteDifferenceTol)},
        {c.constant, check_kamke(c.constant, spec(10, 2.0), kFiniteDifferenceTol)},
        {c.swap, check_type_k_direct(c.swap, spec(10, 2.0))},
        {c.constant, check_type_k_direct(c.constant, spec(10, 2.0))},
        {arctan, check_subhomogeneity(arctan, spec(10, 10.0), default_alphas())},
        {arctan, check_nonexpansive_thompson(arctan, spec(10, 10.0))},
        {sq, check_subhomogeneity(sq, spec(10, 2.0), default_alphas())},
        {sq, check_nonexpansive_thompson(sq, spec(10, 2.0))},
        {test::shift_down_map(2), check_positivity(test::shift_down_map(2), spec(10))},
        {test::doubling_map(2), check_consensus_fixed_line(test::doubling_map(2), {1.0})},
    };
    for (const auto& [f, r] : cases) {
        INFO(f.name() << " " << to_string(r.property));
        require_reverified(f, r);
    }
    PropertyReport pass{PropertyId::Positivity};
    pass.verdict = kPass;
    CHECK_FALSE(reverify_witness(sq, pass).has_value());
}

TEST_CASE("tampered witnesses do not re-verify") {
    const SystemMap sq = test::square_map(1);
    PropertyReport r = check_subhomogeneity(sq, spec(11, 2.0), {0.5});
    REQUIRE(r.failed());
    r.witness->points[0] = {0.0};
    const auto again = reverify_witness(sq, r);
    REQUIRE(again.has_value());
    CHECK_FALSE(*again);
}

TEST_CASE("reports are reproducible and seed dependent") {
    const Counterexamples c = make_counterexamples();
    const auto a = to_json(theorem8_report(c.swap, spec(12, 2.0)));
    const auto b = to_json(theorem8_report(c.swap, spec(12, 2.0)));
    CHECK(a.dump() == b.dump());
    const auto other = to_json(check_type_k_direct(c.constant, spec(13, 2.0)));
    const auto same = to_json(check_type_k_direct(c.constant, spec(12, 2.0)));
    CHECK(other.dump() != same.dump());
}

TEST_CASE("report json layout") {
    const SystemMap sq = test::square_map(2);
    const auto j = to_json(check_subhomogeneity(sq, spec(14, 2.0), {0.5}));
    CHECK(j["property"] == "SubHomogeneity");
    CHECK(j["verdict"] == "fail");
    CHECK(j["seed"] == 14);
    CHECK(j["witness"]["indices"][0].get<int>() >= 1);
    const auto pass = to_json(check_positivity(sq, spec(14, 2.0)));
    CHECK(pass["verdict"] == "pass");
    CHECK(pass["witness"].is_null());
    CHECK(pass["semantics"].get<std::string>().find("no counterexample") != std::string::npos);
}

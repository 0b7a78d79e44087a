#include <doctest.h>

#include <cmath>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/properties.hpp"
#include "support.hpp"

using namespace mas;

TEST_CASE("digraph validation") {
    CHECK_THROWS_AS(Digraph(2, {{0, 0}}), PreconditionError);
    CHECK_THROWS_AS(Digraph(2, {{0, 1}, {0, 1}}), PreconditionError);
    CHECK_THROWS_AS(Digraph(2, {{0, 2}}), PreconditionError);
    const Digraph g(3, {{0, 2}, {0, 1}, {2, 1}});
    CHECK(g.neighbors(0) == std::vector<std::size_t>{1, 2});
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK(g.edge_count() == 3);
}

TEST_CASE("sis examples") {
    const Digraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    const SystemMap f = make_sis(g, SisParams::uniform(g, 0.5, 0.5, 0.5));
    CHECK(eval(f, StateVector::constant(3, 1.0)) == StateVector::constant(3, 1.0));
    CHECK(f.domain_bound() == 1.0);

    SisParams p0 = SisParams::uniform(g, 0.0, 0.7, 1.3, 0.4);
    const SystemMap id = make_sis(g, p0);
    const StateVector x{0.2, 0.9, 0.0};
    CHECK(eval(id, x) == x);

    const SystemMap single = make_sis(Digraph(1, {}), SisParams::uniform(Digraph(1, {}), 0.5, 0.5, 0.0));
    CHECK(eval(single, {0.0})[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sis with self infection and heterogeneous rates") {
    const Digraph g(2, {{0, 1}, {1, 0}});
    SisParams p;
    p.h = 0.4;
    p.delta = {0.3, 0.6};
    p.beta = {{0.2}, {0.1}};
    p.beta_self = {0.05, 0.0};
    const SystemMap f = make_sis(g, p);
    const StateVector x{0.3, 0.8};
    // Hand evaluation, self term entering as j = i.
    const double f0 = 0.3 + 0.4 * (0.3 * 0.7 - 0.3 * (0.2 * 0.2 + 0.05 * 0.7));
    const double f1 = 0.8 + 0.4 * (0.6 * 0.2 - 0.8 * (0.1 * 0.7));
    const StateVector y = eval(f, x);
    CHECK(y[0] == doctest::Approx(f0).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(f1).epsilon(1e-14));
    CHECK(p.beta_sum(0) == doctest::Approx(0.2));
}

TEST_CASE("sis rejects negative parameters") {
    const Digraph g(2, {{0, 1}});
    CHECK_THROWS_AS(make_sis(g, SisParams::uniform(g, -0.1, 0.5, 0.5)), PreconditionError);
    CHECK_THROWS_AS(make_sis(g, SisParams::uniform(g, 0.1, -0.5, 0.5)), PreconditionError);
    CHECK_THROWS_AS(make_sis(g, SisParams::uniform(g, 0.1, 0.5, -0.5)), PreconditionError);
    SisParams p = SisParams::uniform(g, 0.1, 0.5, 0.5);
    p.delta.pop_back();
    CHECK_THROWS_AS(make_sis(g, p), DimensionMismatch);
}

TEST_CASE("sis condition examples") {
    const auto a = sis_node_conditions(0.5, 0.5, 0.5, 0.0);
    CHECK(a.c20);
    CHECK(a.all_16_19());
    const auto b = sis_node_conditions(0.0, 1.7, 0.3, 1.9);
    CHECK(b.c16);
    CHECK(b.c17);
    CHECK(b.c18);
    CHECK(b.c20);
    const auto c = sis_node_conditions(1.0, 0.6, 0.5, 0.0);
    CHECK_FALSE(c.c20);
    const auto d = sis_node_conditions(2.0, 1.0, 0.0, 0.0);
    CHECK_FALSE(d.c16);
}

TEST_CASE("sis conditions per node") {
    const Digraph g(3, {{1, 0}, {2, 0}, {2, 1}});
    const SisConditionsReport r = sis_conditions(g, SisParams::uniform(g, 0.5, 0.5, 0.5));
    REQUIRE(r.nodes.size() == 3);
    CHECK(r.nodes[0].c20);  // no in-neighbour
    CHECK(r.nodes[1].c20);
    // beta = 1: h beta = 0.5 and h delta + h beta = 0.75 < 1, yet delta < beta.
    CHECK(r.nodes[2].c20);
    CHECK_FALSE(r.nodes[2].c19);
    CHECK(r.c20);
    CHECK_FALSE(r.all_16_19());
}

TEST_CASE("sis conditions against direct arithmetic") {
    CounterRng rng(31);
    for (int k = 0; k < 5000; ++k) {
        const double h = rng.uniform(0, 2), d = rng.uniform(0, 2), b = rng.uniform(0, 2), s = rng.uniform(0, 0.3);
        const auto c = sis_node_conditions(h, d, b, s);
        CHECK(c.c16 == (h * d <= 1 && h * b <= 1));
        CHECK(c.c18 == (h * s < 1 - h * d - h * b));
        CHECK(c.c19 == (d >= b));
        CHECK(c.c20 == (h * d + h * b < 1 - h * s && h * b <= 0.5));
        if (h * b <= 1) CHECK(c.c17 == (h * s <= std::pow(std::sqrt(1 - h * b) + std::sqrt(h * d), 2)));
    }
}

TEST_CASE("sis keeps the unit box invariant under condition 20") {
    CounterRng rng(32);
    int checked = 0;
    while (checked < 20) {
        const Digraph g = test::random_digraph(rng, 4, 0.4);
        SisParams p;
        p.h = rng.uniform(0, 1);
        for (std::size_t i = 0; i < 4; ++i) {
            p.delta.push_back(rng.uniform(0, 1));
            p.beta.emplace_back();
            for (std::size_t k = 0; k < g.neighbors(i).size(); ++k) p.beta.back().push_back(rng.uniform(0, 0.6));
            p.beta_self.push_back(rng.uniform(0, 0.2));
        }
        if (!sis_conditions(g, p).c20) continue;
        ++checked;
        const SystemMap f = make_sis(g, p);
        for (int k = 0; k < 1000; ++k) {
            const StateVector y = eval(f, test::random_state(rng, 4, 0, 1));
            CHECK(y.min() >= 0.0);
            CHECK(y.max() <= 1.0);
        }
    }
}

TEST_CASE("arctan examples") {
    const Digraph g(2, {{0, 1}});
    const SystemMap f = make_arctan(g, {0.1, 0.1});
    const StateVector y = eval(f, {0.0, 1.0});
    CHECK(y[0] == doctest::Approx(0.1 * std::atan(1.0)).epsilon(1e-15));
    CHECK(y[0] == doctest::Approx(0.0785398).epsilon(1e-6));
    CHECK(y[1] == 1.0);
    CHECK(eval(f, {4.2, 4.2}) == StateVector{4.2, 4.2});
    CHECK(f.domain_bound() == 10.0);
    CHECK_THROWS_AS(make_arctan(g, {0.1, 0.0}), PreconditionError);
    CHECK_THROWS_AS(make_arctan(g, {0.1}), DimensionMismatch);
}

TEST_CASE("arctan with eps = 1/|N_i| passes kamke on interior samples") {
    const Digraph g(4, {{0, 1}, {0, 2}, {0, 3}, {1, 0}, {2, 1}, {3, 2}, {3, 0}});
    std::vector<double> eps;
    for (std::size_t i = 0; i < 4; ++i) eps.push_back(1.0 / static_cast<double>(g.neighbors(i).size()));
    const SystemMap f = make_arctan(g, eps);
    SampleSpec s;
    s.boundary_fraction = 0.0;
    s.seed = 3;
    const PropertyReport r = check_kamke(f, s, 0.0);
    CHECK(r.verdict == Verdict::Pass);
    // Symbolic diagonal 1 - eps_i sum 1 / (1 + d^2), checked against the map.
    const StateVector x{0.5, 2.0, 7.0, 3.0};
    const JacobianMatrix j = jacobian(f, x);
    double diag = 1.0;
    for (std::size_t k : g.neighbors(0)) diag -= eps[0] / (1.0 + std::pow(x[k] - x[0], 2));
    CHECK(j(0, 0) == doctest::Approx(diag).epsilon(1e-14));
    CHECK(j(0, 0) > 0.0);
}

TEST_CASE("linear examples") {
    const SystemMap id = make_linear(Eigen::MatrixXd::Identity(3, 3));
    CHECK(eval(id, {0.1, 0.2, 0.3}) == StateVector{0.1, 0.2, 0.3});
    Eigen::MatrixXd avg(2, 2);
    avg << 0.5, 0.5, 0.5, 0.5;
    CHECK(eval(make_linear(avg), {0, 2}) == StateVector{1, 1});
    Eigen::MatrixXd neg(2, 2);
    neg << 0.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(make_linear(neg), PreconditionError);
    CHECK_THROWS_AS(make_linear(Eigen::MatrixXd::Zero(2, 3)), PreconditionError);
}

TEST_CASE("row-stochastic linear map with positive diagonal passes the theorem 8 checks") {
    Eigen::MatrixXd a(3, 3);
    a << 0.6, 0.4, 0.0, 0.1, 0.8, 0.1, 0.3, 0.0, 0.7;
    const SystemMap f = make_linear(a);
    SampleSpec s;
    s.seed = 4;
    const TheoremReport r = theorem8_report(f, s);
    CHECK(r.overall == Verdict::Pass);
    for (const auto& c : r.conditions) CHECK(c.verdict == Verdict::Pass);
}

TEST_CASE("counterexample maps") {
    const Counterexamples c = make_counterexamples();
    CHECK(eval(c.swap, {1, 2}) == StateVector{2, 1});
    CHECK(eval(c.constant, {0, 0}) == StateVector{1, 1});
    CHECK(eval(c.constant, {1.5, 0.2}) == StateVector{1, 1});
    CHECK(eval(c.sqrt_shift, {4, 1}) == StateVector{3, 1});
    CHECK_FALSE(c.sqrt_shift.has_jacobian());
}

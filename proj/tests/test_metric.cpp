#include <doctest.h>

#include <cmath>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/metric.hpp"
#include "support.hpp"

using namespace mas;

namespace {

// Max-ratio oracle written independently of the library.
double ratio_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == 0.0) continue;
        if (x[i] == 0.0) return INFINITY;
        m = std::max(m, y[i] / x[i]);
    }
    return m;
}

}  // namespace

TEST_CASE("m_ratio examples") {
    CHECK(m_ratio({1, 2}, {2, 1}).value() == doctest::Approx(ratio_oracle({1, 2}, {2, 1})));
    CHECK(m_ratio({1, 2}, {2, 1}).value() == 2.0);
    CHECK(m_ratio({1, 1}, {0, 0}).value() == 0.0);
    CHECK(m_ratio({0, 1}, {1, 1}).is_infinite());
    CHECK_THROWS_AS(m_ratio({1}, {1, 1}), DimensionMismatch);
    CHECK_THROWS(m_ratio({0, 1}, {1, 1}).value());
}

TEST_CASE("thompson examples") {
    CHECK(thompson({3, 0.5}, {3, 0.5}).value() == 0.0);
    CHECK(thompson({1, 2}, {2, 1}).value() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(thompson({1, 1}, {0, 1}).is_infinite());
    CHECK(thompson({0, 0}, {0, 0}).value() == 0.0);
    CHECK(thompson({0, 2}, {0, 1}).value() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("sup_dist examples") {
    CHECK(sup_dist(StateVector{1, 2}, StateVector{1, 2}) == 0.0);
    CHECK(sup_dist(StateVector{0, 3}, StateVector{1, 1}) == 2.0);
    CHECK(sup_dist(StateVector{5}, StateVector{2}) == 3.0);
    CHECK_THROWS_AS(sup_dist(StateVector{5}, StateVector{2, 1}), DimensionMismatch);
}

TEST_CASE("log and exp maps") {
    CHECK(log_map({1, 1}) == std::vector<double>{0, 0});
    const StateVector y = exp_map(std::vector<double>{0.0, std::log(2.0)});
    CHECK(y[0] == 1.0);
    CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(log_map({1, 0}), DomainError);
    CounterRng rng(5);
    for (int k = 0; k < 200; ++k) {
        const StateVector x = test::random_state(rng, 4, 1e-3, 50);
        CHECK(sup_dist(exp_map(log_map(x)), x) <= 1e-12 * x.max());
    }
}

TEST_CASE("extended distance ordering") {
    CHECK(ExtendedDistance(1.0) < ExtendedDistance::infinity());
    CHECK_FALSE(ExtendedDistance::infinity() < ExtendedDistance::infinity());
    CHECK(ExtendedDistance::infinity() <= ExtendedDistance::infinity());
    CHECK(std::isinf(ExtendedDistance::infinity().to_double()));
    CHECK_THROWS_AS(ExtendedDistance(-1.0), DomainError);
}

TEST_CASE("thompson metric axioms on positive triples") {
    CounterRng rng(7);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + rng.below(5);
        const StateVector x = test::random_state(rng, n, 0.01, 10);
        const StateVector y = test::random_state(rng, n, 0.01, 10);
        const StateVector z = test::random_state(rng, n, 0.01, 10);
        const double dxy = thompson(x, y).value(), dyx = thompson(y, x).value();
        CHECK(dxy == dyx);
        CHECK(thompson(x, x).value() <= 1e-12);
        CHECK(dxy > 1e-12);
        CHECK(dxy <= thompson(x, z).value() + thompson(z, y).value() + 1e-9);
    }
}

TEST_CASE("log map is an isometry from thompson to sup-norm") {
    CounterRng rng(8);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + rng.below(6);
        const StateVector x = test::random_state(rng, n, 1e-4, 100);
        const StateVector y = test::random_state(rng, n, 1e-4, 100);
        CHECK(std::abs(thompson(x, y).value() - sup_dist(log_map(x), log_map(y))) <= 1e-9);
    }
}

TEST_CASE("scaling moves thompson distance by log alpha") {
    CounterRng rng(9);
    for (int k = 0; k < 1000; ++k) {
        const StateVector x = test::random_state(rng, 3, 0.1, 10);
        const double alpha = rng.uniform(1.0, 20.0);
        CHECK(std::abs(thompson(x.scaled(alpha), x).value() - std::log(alpha)) <= 1e-12);
    }
}

TEST_CASE("thompson is finite exactly within a part") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::size_t count = std::size_t{1} << n;
        for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b = 0; b < count; ++b) {
                std::vector<double> x(n), y(n);
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] = (a >> i & 1) ? 1.0 + static_cast<double>(i) : 0.0;
                    y[i] = (b >> i & 1) ? 2.0 + 0.5 * static_cast<double>(i) : 0.0;
                }
                const StateVector sx(x), sy(y);
                CHECK(thompson(sx, sy).is_finite() == (part_of(sx, 0) == part_of(sy, 0)));
            }
        }
    }
}

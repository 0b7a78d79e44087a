#pragma once

#include <cmath>
#include <vector>

#include "monotone_mas/models.hpp"
#include "monotone_mas/order.hpp"
#include "monotone_mas/rng.hpp"
#include "monotone_mas/system.hpp"

namespace test {

using namespace mas;

inline StateVector random_state(CounterRng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform(lo, hi);
    return StateVector(v);
}

inline std::vector<std::vector<double>> to_matrix(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
    }
    return out;
}

// Componentwise map x -> g(x_i) with derivative dg.
template <class G, class D>
SystemMap pointwise(const char* name, std::size_t n, double bound, G g, D dg) {
    return SystemMap(
        name, n,
        [g](std::span<const double> x) {
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = g(x[i]);
            return y;
        },
        bound,
        [dg, n](std::span<const double> x) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = dg(x[i]);
            return m;
        });
}

inline SystemMap identity_map(std::size_t n) {
    return pointwise("identity", n, 1.0, [](double v) { return v; }, [](double) { return 1.0; });
}
inline SystemMap doubling_map(std::size_t n) {
    return pointwise("double", n, 1.0, [](double v) { return 2.0 * v; }, [](double) { return 2.0; });
}
inline SystemMap square_map(std::size_t n) {
    return pointwise("square", n, 2.0, [](double v) { return v * v; }, [](double v) { return 2.0 * v; });
}
inline SystemMap shift_down_map(std::size_t n) {
    return pointwise("shift", n, 1.0, [](double v) { return v - 1.0; }, [](double) { return 1.0; });
}

// Random digraph on n nodes without self-loops, each edge with probability p.
inline Digraph random_digraph(CounterRng& rng, std::size_t n, double p) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rng.uniform() < p) edges.emplace_back(i, j);
        }
    }
    return Digraph(n, edges);
}

}  // namespace test

#include "monotone_mas/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"

namespace mas {

Digraph::Digraph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) : neighbors_(n) {
    if (n == 0) throw PreconditionError("graph needs at least one node");
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n) {
            throw PreconditionError(fmt::format("edge ({}, {}) out of range for {} nodes", i + 1, j + 1, n));
        }
        if (i == j) throw PreconditionError(fmt::format("self-loop ({}, {}) not allowed", i + 1, j + 1));
        auto& nb = neighbors_[i];
        if (std::find(nb.begin(), nb.end(), j) != nb.end()) {
            throw PreconditionError(fmt::format("duplicate edge ({}, {})", i + 1, j + 1));
        }
        nb.push_back(j);
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

bool Digraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& nb = neighbors_.at(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> Digraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < neighbors_.size(); ++i)
        for (std::size_t j : neighbors_[i]) out.emplace_back(i, j);
    return out;
}

std::size_t Digraph::edge_count() const {
    std::size_t c = 0;
    for (const auto& nb : neighbors_) c += nb.size();
    return c;
}

SisParams SisParams::uniform(const Digraph& g, double h, double delta, double beta, double beta_self) {
    SisParams p;
    p.h = h;
    p.delta.assign(g.size(), delta);
    p.beta_self.assign(g.size(), beta_self);
    p.beta.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p.beta[i].assign(g.neighbors(i).size(), beta);
    return p;
}

double SisParams::beta_sum(std::size_t i) const {
    double s = 0.0;
    for (double b : beta.at(i)) s += b;
    return s;
}

namespace {

void validate_sis(const Digraph& g, const SisParams& p) {
    const std::size_t n = g.size();
    if (p.delta.size() != n) throw DimensionMismatch(n, p.delta.size());
    if (p.beta_self.size() != n) throw DimensionMismatch(n, p.beta_self.size());
    if (p.beta.size() != n) throw DimensionMismatch(n, p.beta.size());
    auto non_negative = [](double v, const std::string& what) {
        if (!std::isfinite(v) || v < 0.0) throw PreconditionError(fmt::format("{} must be >= 0 (got {})", what, v));
    };
    non_negative(p.h, "h");
    for (std::size_t i = 0; i < n; ++i) {
        non_negative(p.delta[i], fmt::format("delta[{}]", i + 1));
        non_negative(p.beta_self[i], fmt::format("beta[{}][{}]", i + 1, i + 1));
        if (p.beta[i].size() != g.neighbors(i).size()) throw DimensionMismatch(g.neighbors(i).size(), p.beta[i].size());
        for (std::size_t k = 0; k < p.beta[i].size(); ++k) {
            non_negative(p.beta[i][k], fmt::format("beta[{}][{}]", i + 1, g.neighbors(i)[k] + 1));
        }
    }
}

}  // namespace

SystemMap make_sis(const Digraph& g, const SisParams& p) {
    validate_sis(g, p);
    auto graph = std::make_shared<const Digraph>(g);
    auto params = std::make_shared<const SisParams>(p);
    const std::size_t n = g.size();

    auto evaluator = [graph, params, n](std::span<const double> x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& nb = graph->neighbors(i);
            double infection = params->beta_self[i] * (1.0 - x[i]);
            for (std::size_t k = 0; k < nb.size(); ++k) infection += params->beta[i][k] * (1.0 - x[nb[k]]);
            y[i] = x[i] + params->h * (params->delta[i] * (1.0 - x[i]) - x[i] * infection);
        }
        return y;
    };
    auto jac = [graph, params, n](std::span<const double> x) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& nb = graph->neighbors(i);
            const auto r = static_cast<Eigen::Index>(i);
            double d = -params->delta[i] - params->beta_self[i] * (1.0 - 2.0 * x[i]);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                d -= params->beta[i][k] * (1.0 - x[nb[k]]);
                j(r, static_cast<Eigen::Index>(nb[k])) = params->h * params->beta[i][k] * x[i];
            }
            j(r, r) = 1.0 + params->h * d;
        }
        return j;
    };
    return SystemMap("sis", n, evaluator, 1.0, jac);
}

SisNodeConditions sis_node_conditions(double h, double delta, double beta, double beta_self, Inequalities mode) {
    const bool strict = mode == Inequalities::Strict;
    auto leq = [strict](double a, double b) { return strict ? a < b : a <= b; };
    SisNodeConditions c;
    const double hd = h * delta, hb = h * beta, hs = h * beta_self;
    c.c16 = leq(hd, 1.0) && leq(hb, 1.0);
    double slack = std::min({std::abs(1.0 - hd), std::abs(1.0 - hb)});
    if (hb <= 1.0) {
        const double rhs = std::pow(std::sqrt(1.0 - hb) + std::sqrt(hd), 2);
        c.c17 = leq(hs, rhs);
        slack = std::min(slack, std::abs(rhs - hs));
    }
    c.c18 = hs < 1.0 - hd - hb;
    c.c19 = leq(beta, delta);
    c.c20 = hd + hb < 1.0 - hs && leq(hb, 0.5);
    slack = std::min({slack, std::abs(1.0 - hd - hb - hs), std::abs(delta - beta), std::abs(0.5 - hb)});
    c.min_slack = slack;
    return c;
}

SisConditionsReport sis_conditions(const Digraph& g, const SisParams& p) {
    validate_sis(g, p);
    SisConditionsReport r;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SisNodeConditions c = sis_node_conditions(p.h, p.delta[i], p.beta_sum(i), p.beta_self[i]);
        r.c16 = r.c16 && c.c16;
        r.c17 = r.c17 && c.c17;
        r.c18 = r.c18 && c.c18;
        r.c19 = r.c19 && c.c19;
        r.c20 = r.c20 && c.c20;
        r.nodes.push_back(c);
    }
    return r;
}

SystemMap make_arctan(const Digraph& g, const std::vector<double>& eps) {
    const std::size_t n = g.size();
    if (eps.size() != n) throw DimensionMismatch(n, eps.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) {
            throw PreconditionError(fmt::format("eps[{}] must be > 0 (got {})", i + 1, eps[i]));
        }
    }
    auto graph = std::make_shared<const Digraph>(g);
    auto gains = std::make_shared<const std::vector<double>>(eps);

    auto evaluator = [graph, gains, n](std::span<const double> x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j : graph->neighbors(i)) s += std::atan(x[j] - x[i]);
            y[i] = x[i] + (*gains)[i] * s;
        }
        return y;
    };
    auto jac = [graph, gains, n](std::span<const double> x) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            double diag = 1.0;
            for (std::size_t j : graph->neighbors(i)) {
                const double d = x[j] - x[i];
                const double w = (*gains)[i] / (1.0 + d * d);
                m(r, static_cast<Eigen::Index>(j)) = w;
                diag -= w;
            }
            m(r, r) = diag;
        }
        return m;
    };
    return SystemMap("arctan", n, evaluator, 10.0, jac);
}

SystemMap make_linear(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw PreconditionError("linear map needs a square matrix");
    if (a.rows() == 0) throw PreconditionError("linear map needs a non-empty matrix");
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            if (!std::isfinite(a(r, c)) || a(r, c) < 0.0) {
                throw PreconditionError(fmt::format("matrix entry ({}, {}) = {} must be >= 0", r + 1, c + 1, a(r, c)));
            }
        }
    }
    const std::size_t n = static_cast<std::size_t>(a.rows());
    auto evaluator = [a, n](std::span<const double> x) {
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
            y[i] = s;
        }
        return y;
    };
    auto jac = [a](std::span<const double>) { return a; };
    return SystemMap("linear", n, evaluator, 1.0, jac);
}

Counterexamples make_counterexamples() {
    SystemMap constant(
        "constant", 2, [](std::span<const double>) { return std::vector<double>{1.0, 1.0}; }, 2.0,
        [](std::span<const double>) { return Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2)); });
    SystemMap swap(
        "swap", 2, [](std::span<const double> x) { return std::vector<double>{x[1], x[0]}; }, 2.0,
        [](std::span<const double>) {
            Eigen::MatrixXd m(2, 2);
            m << 0.0, 1.0, 1.0, 0.0;
            return m;
        });
    // d/dx sqrt(x) is unbounded at x = 0, so this map relies on finite
    // differences instead of a closed-form Jacobian.
    SystemMap sqrt_shift(
        "sqrt_shift", 2, [](std::span<const double> x) { return std::vector<double>{std::sqrt(x[0]) + x[1], x[1]}; },
        2.0);
    return {std::move(constant), std::move(swap), std::move(sqrt_shift)};
}

}  // namespace mas

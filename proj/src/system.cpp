#include "monotone_mas/system.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"

namespace mas {

SystemMap::SystemMap(std::string name, std::size_t dimension, Evaluator evaluator, double domain_bound,
                     std::optional<JacobianFn> jacobian)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::move(evaluator)),
      domain_bound_(domain_bound),
      jacobian_(std::move(jacobian)) {
    if (dimension_ == 0) throw PreconditionError("system dimension must be >= 1");
    if (!evaluator_) throw PreconditionError("system map needs an evaluator");
    if (!(domain_bound_ > 0.0) || !std::isfinite(domain_bound_)) {
        throw PreconditionError("domain bound must be finite and > 0");
    }
}

SystemMap SystemMap::with_domain_bound(double bound) const {
    return SystemMap(name_, dimension_, evaluator_, bound, jacobian_);
}

std::vector<double> SystemMap::evaluate_raw(std::span<const double> x) const {
    if (x.size() != dimension_) throw DimensionMismatch(dimension_, x.size());
    std::vector<double> y = evaluator_(x);
    if (y.size() != dimension_) {
        throw EvaluationError(fmt::format("{}: evaluator returned {} components, expected {}", name_, y.size(),
                                          dimension_));
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw EvaluationError(fmt::format("{}: component {} is not finite ({})", name_, i + 1, y[i]));
        }
    }
    return y;
}

Eigen::MatrixXd SystemMap::analytic_jacobian(std::span<const double> x) const {
    if (!jacobian_) throw PreconditionError(name_ + ": no analytic Jacobian");
    if (x.size() != dimension_) throw DimensionMismatch(dimension_, x.size());
    Eigen::MatrixXd j = (*jacobian_)(x);
    if (static_cast<std::size_t>(j.rows()) != dimension_ || static_cast<std::size_t>(j.cols()) != dimension_) {
        throw EvaluationError(name_ + ": analytic Jacobian has wrong shape");
    }
    return j;
}

StateVector eval(const SystemMap& f, const StateVector& x) {
    std::vector<double> y = f.evaluate_raw(x.entries());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) throw PositivityViolation(i, y[i]);
    }
    return StateVector(std::move(y));
}

double default_fd_step(const StateVector& x) {
    return 1e-6 * std::max(1.0, x.max());
}

namespace {

void require_finite(const JacobianMatrix& j, const std::string& name) {
    for (Eigen::Index r = 0; r < j.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < j.values.cols(); ++c) {
            if (!std::isfinite(j.values(r, c))) {
                throw EvaluationError(fmt::format("{}: Jacobian entry ({}, {}) is not finite", name, r + 1, c + 1));
            }
        }
    }
}

}  // namespace

JacobianMatrix jacobian_fd(const SystemMap& f, const StateVector& x, double h) {
    if (!(h > 0.0)) throw PreconditionError("finite-difference step must be > 0");
    const std::size_t n = f.dimension();
    if (x.size() != n) throw DimensionMismatch(n, x.size());

    JacobianMatrix out{Eigen::MatrixXd(n, n), x.vector(), h};
    const std::vector<double> base = x.vector();
    std::optional<std::vector<double>> f_base;
    const double bound = f.domain_bound();

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> plus = base, minus = base;
        std::vector<double> hi, lo;
        double width;
        if (base[j] < h) {
            plus[j] += h;
            if (!f_base) f_base = f.evaluate_raw(base);
            hi = f.evaluate_raw(plus);
            lo = *f_base;
            width = h;
        } else if (base[j] + h > bound) {
            minus[j] -= h;
            if (!f_base) f_base = f.evaluate_raw(base);
            hi = *f_base;
            lo = f.evaluate_raw(minus);
            width = h;
        } else {
            plus[j] += h;
            minus[j] -= h;
            hi = f.evaluate_raw(plus);
            lo = f.evaluate_raw(minus);
            width = 2.0 * h;
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (hi[i] - lo[i]) / width;
        }
    }
    require_finite(out, f.name());
    return out;
}

JacobianMatrix jacobian_fd(const SystemMap& f, const StateVector& x) { return jacobian_fd(f, x, default_fd_step(x)); }

JacobianMatrix jacobian(const SystemMap& f, const StateVector& x) {
    if (!f.has_jacobian()) return jacobian_fd(f, x);
    JacobianMatrix out{f.analytic_jacobian(x.entries()), x.vector(), std::nullopt};
    require_finite(out, f.name());
    return out;
}

StateVector iterate(const SystemMap& f, const StateVector& x0, std::size_t k) {
    if (x0.size() != f.dimension()) throw DimensionMismatch(f.dimension(), x0.size());
    StateVector x = x0;
    for (std::size_t step = 1; step <= k; ++step) {
        try {
            x = eval(f, x);
        } catch (const Error& e) {
            throw EvaluationError(e.what(), step);
        }
    }
    return x;
}

}  // namespace mas

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "monotone_mas/order.hpp"

namespace mas {

// SystemMap evaluators must be pure functions of their argument. Checkers
// evaluate the same map from several threads at once.
class SystemMap {
public:
    using Evaluator = std::function<std::vector<double>(std::span<const double>)>;
    using JacobianFn = std::function<Eigen::MatrixXd(std::span<const double>)>;

    SystemMap(std::string name, std::size_t dimension, Evaluator evaluator,
              double domain_bound, std::optional<JacobianFn> jacobian = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return dimension_; }
    /// Upper edge B of the declared sampling box [0, B]^n.
    double domain_bound() const noexcept { return domain_bound_; }
    bool has_jacobian() const noexcept { return jacobian_.has_value(); }

    SystemMap with_domain_bound(double bound) const;

    /// Evaluates the rule on an arbitrary real vector of the right size.
    /// Throws EvaluationError on non-finite output or wrong output size; no
    /// sign check is made here.
    std::vector<double> evaluate_raw(std::span<const double> x) const;

    Eigen::MatrixXd analytic_jacobian(std::span<const double> x) const;

private:
    std::string name_;
    std::size_t dimension_;
    Evaluator evaluator_;
    double domain_bound_;
    std::optional<JacobianFn> jacobian_;
};

struct JacobianMatrix {
    Eigen::MatrixXd values;
    std::vector<double> point;
    std::optional<double> step;  // set for finite-difference estimates

    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

/// f(x); throws PositivityViolation carrying the first negative component.
StateVector eval(const SystemMap& f, const StateVector& x);

/// 1e-6 * max(1, |x|_inf)
double default_fd_step(const StateVector& x);

/// Column-wise finite differences. Central where x_j +- h stays inside
/// [0, B]; forward within h of 0, backward within h of B.
JacobianMatrix jacobian_fd(const SystemMap& f, const StateVector& x, double h);
JacobianMatrix jacobian_fd(const SystemMap& f, const StateVector& x);

/// Analytic Jacobian when the map carries one, otherwise finite differences
/// with the default step. Throws EvaluationError on non-finite entries.
JacobianMatrix jacobian(const SystemMap& f, const StateVector& x);

/// f^k(x0). Failures are rethrown as EvaluationError tagged with the step.
StateVector iterate(const SystemMap& f, const StateVector& x0, std::size_t k);

}  // namespace mas

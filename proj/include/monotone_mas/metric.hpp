#pragma once

#include <span>
#include <vector>

#include "monotone_mas/order.hpp"

namespace mas {

/// Non-negative real or +infinity. Infinity is a flag, never a NaN.
class ExtendedDistance {
public:
    explicit ExtendedDistance(double value);
    static ExtendedDistance infinity() { return ExtendedDistance(); }

    bool is_infinite() const noexcept { return infinite_; }
    bool is_finite() const noexcept { return !infinite_; }
    /// Throws std::logic_error when infinite.
    double value() const;
    /// std::numeric_limits<double>::infinity() for the infinite case.
    double to_double() const noexcept;

    bool operator==(const ExtendedDistance&) const = default;

private:
    ExtendedDistance() : value_(0.0), infinite_(true) {}

    double value_;
    bool infinite_;
};

bool operator<(const ExtendedDistance& a, const ExtendedDistance& b);
bool operator<=(const ExtendedDistance& a, const ExtendedDistance& b);

/// M(x/y) = inf{a >= 0 : y <= a x}, evaluated as max_{y_i > 0} y_i / x_i.
ExtendedDistance m_ratio(const StateVector& x, const StateVector& y);

/// Thompson's metric log(max{M(x/y), M(y/x)}), with d(0,0) = 0.
ExtendedDistance thompson(const StateVector& x, const StateVector& y);

double sup_dist(std::span<const double> x, std::span<const double> y);
double sup_dist(const StateVector& x, const StateVector& y);

/// Coordinate-wise natural log; every entry must be strictly positive.
std::vector<double> log_map(const StateVector& x);
StateVector exp_map(std::span<const double> v);

}  // namespace mas

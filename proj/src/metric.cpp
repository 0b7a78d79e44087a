#include "monotone_mas/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"

namespace mas {

ExtendedDistance::ExtendedDistance(double value) : value_(value), infinite_(false) {
    if (!std::isfinite(value) || value < 0.0) {
        throw DomainError(fmt::format("distance {} is not a finite non-negative value", value));
    }
}

double ExtendedDistance::value() const {
    if (infinite_) throw std::logic_error("value() of an infinite distance");
    return value_;
}

double ExtendedDistance::to_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

bool operator<(const ExtendedDistance& a, const ExtendedDistance& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return a.value() < b.value();
}

bool operator<=(const ExtendedDistance& a, const ExtendedDistance& b) { return !(b < a); }

ExtendedDistance m_ratio(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == 0.0) continue;
        if (x[i] == 0.0) return ExtendedDistance::infinity();
        best = std::max(best, y[i] / x[i]);
    }
    return ExtendedDistance(best);
}

ExtendedDistance thompson(const StateVector& x, const StateVector& y) {
    const ExtendedDistance a = m_ratio(x, y);
    const ExtendedDistance b = m_ratio(y, x);
    if (a.is_infinite() || b.is_infinite()) return ExtendedDistance::infinity();
    const double m = std::max(a.value(), b.value());
    if (m == 0.0) return ExtendedDistance(0.0);  // x = y = 0
    // Within a part max(M(x/y), M(y/x)) >= 1; clamp against rounding.
    return ExtendedDistance(std::max(0.0, std::log(m)));
}

double sup_dist(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

double sup_dist(const StateVector& x, const StateVector& y) { return sup_dist(x.entries(), y.entries()); }

std::vector<double> log_map(const StateVector& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0) throw DomainError(fmt::format("log_map: entry {} = {} is not positive", i + 1, x[i]));
        out[i] = std::log(x[i]);
    }
    return out;
}

StateVector exp_map(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double t) { return std::exp(t); });
    return StateVector(std::move(out));
}

}  // namespace mas

#include "monotone_mas/order.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"

namespace mas {

StateVector::StateVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw DomainError("state vector must have at least one entry");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const double v = entries_[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError(fmt::format("state entry {} = {} is not a finite non-negative value", i + 1, v));
        }
    }
}

StateVector::StateVector(std::initializer_list<double> entries) : StateVector(std::vector<double>(entries)) {}

StateVector StateVector::constant(std::size_t n, double value) { return StateVector(std::vector<double>(n, value)); }

StateVector StateVector::scaled(double alpha) const {
    std::vector<double> out(entries_);
    for (double& v : out) v *= alpha;
    return StateVector(std::move(out));
}

double StateVector::max() const { return *std::max_element(entries_.begin(), entries_.end()); }
double StateVector::min() const { return *std::min_element(entries_.begin(), entries_.end()); }

std::string to_string(OrderRelation r) {
    switch (r) {
        case OrderRelation::Equal: return "Equal";
        case OrderRelation::Leq: return "Leq";
        case OrderRelation::Lneq: return "Lneq";
        case OrderRelation::StrictLt: return "StrictLt";
        case OrderRelation::Geq: return "Geq";
        case OrderRelation::Gneq: return "Gneq";
        case OrderRelation::StrictGt: return "StrictGt";
        case OrderRelation::Incomparable: return "Incomparable";
    }
    return "?";
}

OrderRelation compare(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
    bool all_le = true, all_ge = true, all_lt = true, all_gt = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        all_le = all_le && x[i] <= y[i];
        all_ge = all_ge && x[i] >= y[i];
        all_lt = all_lt && x[i] < y[i];
        all_gt = all_gt && x[i] > y[i];
    }
    if (all_le && all_ge) return OrderRelation::Equal;
    if (all_le) return all_lt ? OrderRelation::StrictLt : OrderRelation::Lneq;
    if (all_ge) return all_gt ? OrderRelation::StrictGt : OrderRelation::Gneq;
    return OrderRelation::Incomparable;
}

bool implies(OrderRelation actual, OrderRelation wanted) {
    using R = OrderRelation;
    if (actual == wanted) return true;
    switch (wanted) {
        case R::Leq: return actual == R::Equal || actual == R::Lneq || actual == R::StrictLt;
        case R::Lneq: return actual == R::StrictLt;
        case R::Geq: return actual == R::Equal || actual == R::Gneq || actual == R::StrictGt;
        case R::Gneq: return actual == R::StrictGt;
        default: return false;
    }
}

Part::Part(std::size_t dimension, std::vector<bool> mask) : mask_(std::move(mask)) {
    if (mask_.size() != dimension) throw DimensionMismatch(dimension, mask_.size());
}

Part Part::from_indices(std::size_t dimension, std::initializer_list<std::size_t> support) {
    std::vector<bool> mask(dimension, false);
    for (std::size_t i : support) mask.at(i) = true;
    return Part(dimension, std::move(mask));
}

std::vector<std::size_t> Part::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i]) out.push_back(i);
    return out;
}

std::size_t Part::cardinality() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

Part part_of(const StateVector& x, double zero_tol) {
    if (zero_tol < 0.0) throw PreconditionError("zero_tol must be >= 0");
    std::vector<bool> mask(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mask[i] = x[i] > zero_tol;
    return Part(x.size(), std::move(mask));
}

bool part_leq(const Part& a, const Part& b) {
    if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i)
        if (a.contains(i) && !b.contains(i)) return false;
    return true;
}

}  // namespace mas

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mas {

/// A point of the non-negative orthant. Entries are finite and >= 0; the
/// dimension is fixed at construction.
class StateVector {
public:
    explicit StateVector(std::vector<double> entries);
    StateVector(std::initializer_list<double> entries);

    static StateVector constant(std::size_t n, double value);
    static StateVector zeros(std::size_t n) { return constant(n, 0.0); }

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const noexcept { return entries_; }
    const std::vector<double>& vector() const noexcept { return entries_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    StateVector scaled(double alpha) const;
    double max() const;
    double min() const;

    bool operator==(const StateVector&) const = default;

private:
    std::vector<double> entries_;
};

enum class OrderRelation {
    Equal,
    Leq,
    Lneq,
    StrictLt,
    Geq,
    Gneq,
    StrictGt,
    Incomparable,
};

std::string to_string(OrderRelation r);

/// Strongest relation between x and y, computed exactly on stored values.
OrderRelation compare(const StateVector& x, const StateVector& y);

/// True when `actual` (a result of compare) implies `wanted`; e.g.
/// implies(StrictLt, Leq) holds.
bool implies(OrderRelation actual, OrderRelation wanted);

/// Part of the cone: the support pattern {i : x_i > 0}.
class Part {
public:
    Part(std::size_t dimension, std::vector<bool> mask);
    static Part from_indices(std::size_t dimension, std::initializer_list<std::size_t> support);

    std::size_t dimension() const noexcept { return mask_.size(); }
    bool contains(std::size_t i) const { return mask_.at(i); }
    const std::vector<bool>& mask() const noexcept { return mask_; }
    std::vector<std::size_t> support() const;
    std::size_t cardinality() const;

    bool operator==(const Part&) const = default;
    auto operator<=>(const Part& other) const { return mask_ <=> other.mask_; }

private:
    std::vector<bool> mask_;
};

inline constexpr double kDefaultZeroTol = 1e-9;

Part part_of(const StateVector& x, double zero_tol = kDefaultZeroTol);

/// P_a precedes P_b iff support(a) is a subset of support(b).
bool part_leq(const Part& a, const Part& b);

}  // namespace mas

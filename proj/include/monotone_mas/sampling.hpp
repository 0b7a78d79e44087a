#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "monotone_mas/order.hpp"
#include "monotone_mas/rng.hpp"

namespace mas {

/// Sampling budget for the numerical checks over the box [0, bound]^n.
///
/// `count` interior samples are drawn uniformly from the box; in addition
/// round(boundary_fraction * count) boundary samples are drawn with a random
/// non-empty subset of coordinates pinned to 0.
struct SampleSpec {
    double bound = 1.0;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    double boundary_fraction = 0.25;

    /// Throws PreconditionError when count == 0, bound <= 0 or the fraction
    /// lies outside [0, 1].
    void validate() const;
    std::size_t boundary_count() const;
    std::size_t total() const { return count + boundary_count(); }

    SampleSpec with_bound(double b) const {
        SampleSpec s = *this;
        s.bound = b;
        return s;
    }
};

/// Deterministic sample k of the spec for a check identified by `purpose`.
/// Indices below `count` are interior, the rest boundary-pinned.
StateVector draw_sample(const SampleSpec& spec, std::size_t n, std::uint64_t purpose, std::size_t k);

/// Uniform point of [lo, hi]^n.
StateVector draw_box(CounterRng& rng, std::size_t n, double lo, double hi);

/// Uniform point of [0, hi]^n with at least one coordinate pinned to 0.
StateVector draw_boundary(CounterRng& rng, std::size_t n, double hi);

std::vector<StateVector> draw_samples(const SampleSpec& spec, std::size_t n, std::uint64_t purpose);

}  // namespace mas

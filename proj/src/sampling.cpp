#include "monotone_mas/sampling.hpp"

#include <cmath>

#include "monotone_mas/errors.hpp"

namespace mas {

void SampleSpec::validate() const {
    if (count == 0) throw PreconditionError("sample count must be >= 1");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw PreconditionError("sample bound must be finite and > 0");
    if (!(boundary_fraction >= 0.0 && boundary_fraction <= 1.0)) {
        throw PreconditionError("boundary fraction must lie in [0, 1]");
    }
}

std::size_t SampleSpec::boundary_count() const {
    return static_cast<std::size_t>(std::llround(boundary_fraction * static_cast<double>(count)));
}

StateVector draw_box(CounterRng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& e : v) e = rng.uniform(lo, hi);
    return StateVector(std::move(v));
}

StateVector draw_boundary(CounterRng& rng, std::size_t n, double hi) {
    std::vector<double> v(n);
    std::vector<bool> pinned(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        pinned[i] = rng.coin();
        any = any || pinned[i];
    }
    if (!any) pinned[rng.below(n)] = true;
    for (std::size_t i = 0; i < n; ++i) v[i] = pinned[i] ? 0.0 : rng.uniform(0.0, hi);
    return StateVector(std::move(v));
}

StateVector draw_sample(const SampleSpec& spec, std::size_t n, std::uint64_t purpose, std::size_t k) {
    CounterRng rng = CounterRng(spec.seed).split(purpose).split(static_cast<std::uint64_t>(k));
    if (k < spec.count) return draw_box(rng, n, 0.0, spec.bound);
    return draw_boundary(rng, n, spec.bound);
}

std::vector<StateVector> draw_samples(const SampleSpec& spec, std::size_t n, std::uint64_t purpose) {
    spec.validate();
    std::vector<StateVector> out;
    out.reserve(spec.total());
    for (std::size_t k = 0; k < spec.total(); ++k) out.push_back(draw_sample(spec, n, purpose, k));
    return out;
}

}  // namespace mas

#pragma once

#include <cstdint>
#include <string_view>

namespace mas {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn stream labels into keys.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Counter-based generator: the i-th draw of a stream is a pure function of
/// (key, i), so a stream can be split into independent substreams and
/// consumed in any order.
///
///   draw(key, i) = splitmix64(key + (i + 1) * 0x9e3779b97f4a7c15)
///
/// Keys are derived with split(); the whole program derives every key from
/// the single config seed.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(splitmix64(key)) {}

    constexpr CounterRng split(std::uint64_t stream) const noexcept {
        return CounterRng(key_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    }
    constexpr CounterRng split(std::string_view label) const noexcept { return split(hash_label(label)); }

    constexpr std::uint64_t key() const noexcept { return key_; }

    constexpr std::uint64_t next_u64() noexcept {
        ++counter_;
        return splitmix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1), 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, bound); bound must be > 0.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift; the bias is below 2^-64 * bound.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    constexpr bool coin() noexcept { return (next_u64() >> 63) != 0; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace mas

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dynrbn {

/// SplitMix64 finalizer. Used for seeding and for hierarchical seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a path of indices.
/// derive_seed(s, {a, b}) == derive_seed(derive_seed(s, {a}), {b}).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = parent;
    for (auto idx : path)
        s = splitmix64(splitmix64(s) ^ (idx * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return s;
}

/// xoshiro256** generator (Blackman & Vigna), state seeded by SplitMix64.
///
/// All randomness in the library flows through this type; the bounded and
/// real-valued helpers below are implemented here rather than with
/// <random> distributions so that output is identical across standard
/// library implementations.
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept
    {
        std::uint64_t x = seed;
        for (auto &w : state_)
        {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        // Lemire's nearly-divisionless method with rejection.
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound)
        {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold)
            {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    /// Independent generator for a sub-task; advances this generator once.
    Rng split() noexcept { return Rng(splitmix64((*this)())); }

    bool operator==(const Rng &) const = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace dynrbn

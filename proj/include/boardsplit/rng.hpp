#pragma once

#include <cstdint>

namespace boardsplit {

// Seed derivation: every derived stream is splitmix64 applied to a mix of the
// parent seed and a tag. Board cells are drawn from std::mt19937_64, whose
// output sequence is fixed by the C++ standard, seeded with splitmix64(seed).

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag)
{
    return splitmix64(parent ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

/// Maps the top 53 bits of a 64-bit draw onto [0, 1).
constexpr double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Sequential splitmix64 generator; cheap to seed, used for Monte Carlo trials.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t operator()()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr double uniform() { return to_unit((*this)()); }
    constexpr bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, n) by multiply-shift (n small).
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64); }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

private:
    std::uint64_t state_;
};

}  // namespace boardsplit

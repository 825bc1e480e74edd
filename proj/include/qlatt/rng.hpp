#pragma once

#include <cstdint>
#include <random>

namespace qlatt {

/// Seedable uniform generator with a platform-independent mapping to
/// doubles. std::mt19937_64 output is specified by the standard, and the
/// 53-bit mapping below avoids the implementation-defined behavior of
/// std::uniform_real_distribution, so identical seeds give bit-identical
/// draws everywhere.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b].
    double next_in(double a, double b) { return a + (b - a) * next_unit(); }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace qlatt

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace iscat {

// Seeded random stream with a fully pinned draw sequence. std::mt19937_64
// output is specified by the standard; the value mappings below avoid the
// implementation-defined std::*_distribution adaptors so that equal seeds
// give equal results on any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1): top 53 bits of one engine draw.
    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform index in [0, n): Lemire multiply-shift, no modulo bias.
    std::size_t index(std::size_t n) {
        const unsigned __int128 wide = static_cast<unsigned __int128>(bits()) * n;
        return static_cast<std::size_t>(wide >> 64);
    }

    // One Box-Muller pair of independent standard normals (two draws).
    std::pair<double, double> normal_pair() {
        const double u1 = static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace iscat

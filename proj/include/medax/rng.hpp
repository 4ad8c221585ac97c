#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "medax/point.hpp"

namespace medax {

/// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic substream seed from a root seed and stream labels.
/// derive_seed(s, a, b) != derive_seed(s, b, a) in general, which is what
/// keeps per-ball / per-slice streams independent of evaluation order.
template <typename... Ids>
inline std::uint64_t derive_seed(std::uint64_t root, Ids... ids) {
    std::uint64_t h = mix64(root);
    ((h = mix64(h ^ static_cast<std::uint64_t>(ids))), ...);
    return h;
}

/// Seeded generator with hand-rolled distribution transforms. The mt19937_64
/// bit stream is pinned by the standard and the transforms below avoid
/// std::*_distribution, so identical seeds give identical samples on any
/// conforming implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). Lemire multiply-shift; bias < 2^-64.
    std::uint64_t uniform_index(std::uint64_t n) {
        const unsigned __int128 m =
            static_cast<unsigned __int128>(engine_()) * static_cast<unsigned __int128>(n);
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (pair cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

    /// Uniform direction on the unit sphere in R^k.
    Point on_unit_sphere(std::size_t k) {
        std::vector<double> v(k);
        while (true) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                v[i] = gaussian();
                s += v[i] * v[i];
            }
            const double n = std::sqrt(s);
            if (n > 1e-12) {
                for (std::size_t i = 0; i < k; ++i) v[i] /= n;
                return Point(std::move(v));
            }
        }
    }

    /// Uniform point in the closed unit ball of R^k (polar sampling).
    Point in_unit_ball(std::size_t k) {
        Point dir = on_unit_sphere(k);
        const double radius = std::pow(uniform01(), 1.0 / static_cast<double>(k));
        return dir * radius;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace medax

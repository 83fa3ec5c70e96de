#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "krein/matrix.hpp"

namespace krein {

/// Deterministic random source.  Normal variates use an explicit Box-Muller
/// transform on top of mt19937_64 so that a given seed produces the same
/// stream on every platform, which the reproducibility contract of the CLI
/// and the family generators relies on.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// splitmix64-style mixing to derive independent per-item seeds.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t item) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (item + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im) / std::sqrt(2.0);
    }

    Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols) {
        Matrix M(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = complex_normal();
        return M;
    }

    Vector unit_vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
        const double norm = v.norm();
        return norm > 0 ? Vector(v / norm) : unit_vector(n);
    }

    RealVector real_unit_vector(Eigen::Index n) {
        RealVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
        const double norm = v.norm();
        return norm > 0 ? RealVector(v / norm) : real_unit_vector(n);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace krein

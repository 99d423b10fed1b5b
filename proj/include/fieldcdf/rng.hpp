#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fieldcdf {

// Bit-mixing step of the splitmix64 generator.  Used to derive independent
// sub-stream seeds from a root seed; the mixing constants come from the
// reference implementation and give full avalanche on the 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a sub-seed from a root seed and up to three coordinates (e.g.
// sweep cell, repetition, trial).  Feeding each coordinate through the
// mixer keeps distinct coordinate tuples on effectively disjoint streams,
// so reordering or parallelising the work cannot change any draw.
inline std::uint64_t seed_chain(std::uint64_t root,
                                std::uint64_t a = 0,
                                std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    std::uint64_t s = root;
    std::uint64_t z = splitmix64(s);
    s ^= a;
    z ^= splitmix64(s);
    s ^= b;
    z ^= splitmix64(s);
    s ^= c;
    z ^= splitmix64(s);
    return z;
}

// Deterministic random source.  mt19937_64 is fully specified by the
// standard (identical output on every platform), and all variate
// transformations are implemented here rather than with the std::
// distributions, whose algorithms are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1): top 53 bits scaled by 2^-53.
    double u01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1): the half-ulp offset excludes both endpoints,
    // which keeps log() and inverse-CDF transforms finite.
    double u01_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia's polar method.  The spare variate is
    // discarded so that each call consumes a self-contained run of engine
    // output and the stream stays reproducible call-by-call.
    double normal() {
        for (;;) {
            double u = 2.0 * u01_open() - 1.0;
            double v = 2.0 * u01_open() - 1.0;
            double r2 = u * u + v * v;
            if (r2 > 0.0 && r2 < 1.0)
                return u * std::sqrt(-2.0 * std::log(r2) / r2);
        }
    }

    // Gamma(shape, 1) via Marsaglia-Tsang squeeze for shape >= 1, with the
    // standard power-of-uniform boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = u01_open();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = u01_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    // Beta(a, b) as Ga/(Ga+Gb).
    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace fieldcdf

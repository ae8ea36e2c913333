#ifndef ROFSIM_RNG_HPP
#define ROFSIM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace rofsim {

/// Deterministic random source. Gaussian variates use an explicit
/// Box-Muller transform rather than std::normal_distribution, whose
/// algorithm is implementation-defined; results are therefore stable
/// across standard libraries for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t bit() { return engine_() >> 63; }

    /// Standard normal via Box-Muller (one value per pair consumed).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Circular complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_gaussian() {
        const double s = 0.7071067811865476;
        const double re = gaussian();
        const double im = gaussian();
        return {re * s, im * s};
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable derivation of per-task seeds from a base seed and a label,
/// so independent pipeline stages never share a stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 over the combined value
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace rofsim

#endif

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gqito/common.hpp"

namespace gqito {

/// Seeded random stream with an explicit Box-Muller normal sampler.
/// std::normal_distribution's algorithm is implementation-defined; owning the
/// transform keeps simulated panels byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on the open interval (0, 1); never returns 0 or 1 exactly.
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Substream tags: one Rng per independent noise source so that switching a
/// source off (e.g. jump intensity 0) leaves the other streams untouched.
enum class Stream : std::uint64_t {
    diffusion = 1,
    jumps = 2,
    micro_noise = 3,
};

inline Rng make_stream(std::uint64_t master, Stream s) {
    return Rng(derive_seed(master, static_cast<std::uint64_t>(s)));
}

}  // namespace gqito

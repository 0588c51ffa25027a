#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqito {

inline constexpr const char* kVersion = "0.1.0";

/// Hard floor applied to every conditional/spot variance the library produces.
inline constexpr double kGMin = 1e-12;

/// Hard floor applied to realized-variance estimates (TSRV/MSRV can go negative).
inline constexpr double kRvFloor = 1e-12;

/// Largest supported intraday horizon (windows per day).
inline constexpr int kMaxHorizon = 6;

/// Invalid numeric state discovered while computing (bad parameters, singular
/// matrices, inconsistent panel dimensions). CLI maps it to exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unusable user input (flags, config files, malformed CSV). CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// splitmix64 finalizer; the library's one-way mixer for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic substream seed: same (master, index) always yields the same
/// seed regardless of thread count or call order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

/// FNV-1a 64-bit content hash, used by run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Median of a copy; empty input is a caller bug.
double median(std::vector<double> v);

double mean(const std::vector<double>& v);

/// Unbiased sample variance (n-1 denominator); needs at least 2 points.
double sample_var(const std::vector<double>& v);

}  // namespace gqito

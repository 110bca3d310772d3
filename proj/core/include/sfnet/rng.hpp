#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sfnet {

/// Deterministic random stream. mt19937_64 output is pinned by the standard,
/// but the std distributions are not, so the few distributions used here are
/// spelled out explicitly to keep datasets and initializers reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    /// Uniform in [0,1).
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0,n). n must be positive.
    std::uint64_t index(std::uint64_t n) { return bits() % n; }

    /// Uniform integer in [lo,hi] inclusive.
    int range(int lo, int hi) { return lo + int(index(std::uint64_t(hi - lo + 1))); }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

/// FNV-1a, used to derive per-parameter seeds from (model seed, name) so that
/// parameters shared by two model variants initialize identically regardless
/// of what else either model contains.
inline std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = hash_name(name);
    h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace sfnet

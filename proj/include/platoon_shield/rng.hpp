#ifndef PLATOON_SHIELD_RNG_HPP
#define PLATOON_SHIELD_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace platoon_shield {

/// Deterministic random stream. The generator core is mt19937_64; the
/// samplers are implemented here (canonical mapping, Box-Muller) instead of
/// <random>'s distributions, whose output is implementation-defined. Integer
/// and uniform draws are bit-exact everywhere; normal draws additionally
/// depend on libm's log/cos rounding.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller; consumes exactly two draws per call, no cached spare.
    double normal(double mean, double stddev);

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi);

private:
    std::mt19937_64 gen_;
};

/// Stable per-entity seed derivation: hashes (master, domain, index) so that
/// e.g. adding a vehicle never perturbs another link's draws.
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view domain, std::uint64_t index);

}  // namespace platoon_shield

#endif

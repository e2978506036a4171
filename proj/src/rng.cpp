#include "platoon_shield/rng.hpp"

#include <cmath>
#include <numbers>

#include "platoon_shield/errors.hpp"

namespace platoon_shield {

double Rng::normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw DomainError("Rng::uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(gen_() % span);
}

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view domain, std::uint64_t index) {
    std::uint64_t h = mix(master);
    for (unsigned char byte : domain) h = mix(h ^ byte);
    return mix(h ^ index);
}

}  // namespace platoon_shield

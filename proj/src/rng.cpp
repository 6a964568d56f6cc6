#include "frislab/rng.hpp"

#include <cmath>

namespace frislab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

RandomStream RandomStream::for_frame(std::uint64_t master_seed, std::uint64_t point_index,
                                     std::uint64_t frame_index) {
    std::uint64_t s = master_seed;
    std::uint64_t key = splitmix64(s);
    s = key ^ (0xA0761D6478BD642FULL * (point_index + 1));
    key = splitmix64(s);
    s = key ^ (0xE7037ED1A0B428DBULL * (frame_index + 1));
    return RandomStream(splitmix64(s));
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_gaussian_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

std::complex<double> RandomStream::complex_gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));  // variance 1/2 per component
    const double angle = 2.0 * M_PI * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
}

std::uint64_t RandomStream::bits(int n) { return next_u64() >> (64 - n); }

}  // namespace frislab

#pragma once

#include <complex>
#include <cstdint>

namespace frislab {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
/// Streams are cheap to construct, which lets Monte Carlo loops derive one
/// stream per frame from (seed, snr index, frame index) and stay
/// reproducible under any parallel schedule.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    /// Stream for a (sweep point, frame) pair derived from the master seed.
    static RandomStream for_frame(std::uint64_t master_seed, std::uint64_t point_index,
                                  std::uint64_t frame_index);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (second value cached).
    double gaussian();

    /// Circularly symmetric complex Gaussian, unit variance.
    std::complex<double> complex_gaussian();

    /// n i.i.d. fair bits packed into the low bits of the result, n <= 63.
    std::uint64_t bits(int n);

  private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace frislab

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slidefft/fft_core.hpp"

namespace slidefft {

// Uniform complex samples in [0,1) x [0,1). std::mt19937_64 seeded with
// `seed`; each component takes the top 53 bits of one draw scaled by
// 2^-53, so the sequence is identical on every conforming platform.
std::vector<Complex> random_samples(std::size_t n, std::uint64_t seed);

inline SampleVector random_vector(std::size_t n, std::uint64_t seed) {
  return SampleVector(random_samples(n, seed));
}

}  // namespace slidefft

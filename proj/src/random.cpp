#include "slidefft/random.hpp"

#include <random>

namespace slidefft {

std::vector<Complex> random_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  std::vector<Complex> out(n);
  for (auto& v : out) {
    const double re = static_cast<double>(engine() >> 11) * kScale;
    const double im = static_cast<double>(engine() >> 11) * kScale;
    v = Complex(re, im);
  }
  return out;
}

}  // namespace slidefft

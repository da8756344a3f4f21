#pragma once

// Serial radix-2 FFT building blocks: index permutation, twiddle tables,
// the even/odd crossing, a level-loop FFT over permuted data, and a
// brute-force DFT used as the correctness oracle. Nothing in here knows
// about the mesh.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slidefft {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept;

// log2 of a power of two. Throws std::invalid_argument otherwise.
int log2_exact(std::size_t n);

// Complex samples whose length is a power of two and whose entries are
// all finite.
class SampleVector {
 public:
  explicit SampleVector(std::vector<Complex> values);

  static SampleVector impulse(std::size_t n);
  static SampleVector constant(std::size_t n, Complex value);

  std::size_t size() const noexcept { return values_.size(); }
  int level_count() const noexcept { return level_count_; }

  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const SampleVector&, const SampleVector&) = default;

 private:
  std::vector<Complex> values_;
  int level_count_ = 0;
};

// Row p (0-based here, level p+1) of `rows` is the index layout after p
// even/odd partitioning passes. Row 0 is the identity; the last row is
// the bit-reversal permutation. `lookup` is the inverse of each row:
// lookup[p][rows[p][i]] == i.
struct PermutationTable {
  int m = 0;
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::vector<std::size_t>> lookup;

  std::size_t size() const noexcept { return std::size_t{1} << m; }
  std::span<const std::size_t> final_row() const& { return rows.back(); }
  std::span<const std::size_t> final_row() const&& = delete;
};

PermutationTable build_permutation(int m);

// Reverses the low m bits of i.
std::size_t bit_reverse_index(std::size_t i, int m);

// factors[k] = exp(-2*pi*i*k/N) for k in [0, N/2).
struct TwiddleTable {
  std::size_t N = 0;
  std::vector<Complex> factors;
};

TwiddleTable twiddle_table(std::size_t N);

struct CrossingBuffers {
  std::vector<Complex> even;
  std::vector<Complex> odd;
};

struct CrossingOutput {
  std::vector<Complex> left;
  std::vector<Complex> right;
};

// O' = U .* O, L = E + O', R = E - O'. Each element pair costs one complex
// multiply (6 FLOPs) and two complex adds (4 FLOPs).
inline constexpr std::uint64_t kFlopsPerCrossingPair = 10;

// Crossing over a contiguous chunk of a segment pair. `twiddles` is the
// matching slice of the level's table. `left` may alias `even` and
// `right` may alias `odd`. Returns the FLOPs performed.
std::uint64_t crossing_into(std::span<const Complex> even,
                            std::span<const Complex> odd,
                            std::span<const Complex> twiddles,
                            std::span<Complex> left, std::span<Complex> right);

CrossingOutput crossing(const CrossingBuffers& buffers,
                        const TwiddleTable& twiddles,
                        std::uint64_t* flops = nullptr);

enum class Precision { kDouble, kSingle };

struct FftStats {
  std::uint64_t flops = 0;
};

// Unnormalized forward DFT by permutation followed by m levels of
// crossings. kSingle rounds the input and the twiddles to float and
// carries the arithmetic in float.
SampleVector fft_serial(const SampleVector& x, FftStats* stats = nullptr);
SampleVector fft_serial(const SampleVector& x, Precision precision,
                        FftStats* stats = nullptr);

// conj(fft(conj(X))) / n
SampleVector ifft_serial(const SampleVector& X, FftStats* stats = nullptr);

// O(n^2) direct summation; any length n >= 1.
std::vector<Complex> dft_oracle(std::span<const Complex> x);

// max_j |actual_j - expected_j| / max_j |expected_j|; falls back to the
// absolute deviation when expected is identically zero.
double max_relative_error(std::span<const Complex> actual,
                          std::span<const Complex> expected);

}  // namespace slidefft

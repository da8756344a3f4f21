#include "slidefft/fft_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace slidefft {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("length " + std::to_string(n) + " is not a power of two");
  }
  int m = 0;
  while ((std::size_t{1} << m) < n) ++m;
  return m;
}

SampleVector::SampleVector(std::vector<Complex> values) : values_(std::move(values)) {
  level_count_ = log2_exact(values_.size());
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("sample vector contains a non-finite value");
    }
  }
}

SampleVector SampleVector::impulse(std::size_t n) {
  std::vector<Complex> v(n);
  if (n > 0) v[0] = 1.0;
  return SampleVector(std::move(v));
}

SampleVector SampleVector::constant(std::size_t n, Complex value) {
  return SampleVector(std::vector<Complex>(n, value));
}

PermutationTable build_permutation(int m) {
  if (m < 1) throw std::invalid_argument("build_permutation needs m >= 1");
  if (m >= 31) throw std::invalid_argument("build_permutation: m too large");

  PermutationTable table;
  table.m = m;
  const std::size_t n = std::size_t{1} << m;

  std::vector<std::size_t> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = i;
  table.rows.push_back(row);

  // Each pass splits every segment of the previous row into its
  // even-position entries followed by its odd-position entries; the
  // segment size halves from n down to 4.
  for (std::size_t segment = n; segment > 2; segment /= 2) {
    const auto& prev = table.rows.back();
    std::vector<std::size_t> next(n);
    const std::size_t half = segment / 2;
    for (std::size_t base = 0; base < n; base += segment) {
      for (std::size_t j = 0; j < half; ++j) {
        next[base + j] = prev[base + 2 * j];
        next[base + half + j] = prev[base + 2 * j + 1];
      }
    }
    table.rows.push_back(std::move(next));
  }

  table.lookup.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[r[i]] = i;
    table.lookup.push_back(std::move(inv));
  }
  return table;
}

std::size_t bit_reverse_index(std::size_t i, int m) {
  if (m < 0 || m >= 63 || i >= (std::size_t{1} << m)) {
    throw std::invalid_argument("bit_reverse_index: index out of range");
  }
  std::size_t r = 0;
  for (int b = 0; b < m; ++b) {
    r = (r << 1) | ((i >> b) & 1U);
  }
  return r;
}

TwiddleTable twiddle_table(std::size_t N) {
  if (N < 2 || !is_power_of_two(N)) {
    throw std::invalid_argument("twiddle_table needs a power of two N >= 2, got " + std::to_string(N));
  }
  TwiddleTable t;
  t.N = N;
  t.factors.resize(N / 2);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(N);
  for (std::size_t k = 0; k < N / 2; ++k) {
    t.factors[k] = std::polar(1.0, step * static_cast<double>(k));
  }
  return t;
}

namespace {

template <typename T>
std::uint64_t cross(std::span<const std::complex<T>> even, std::span<const std::complex<T>> odd,
                    std::span<const std::complex<T>> twiddles, std::span<std::complex<T>> left,
                    std::span<std::complex<T>> right) {
  const std::size_t len = even.size();
  if (odd.size() != len || twiddles.size() != len || left.size() != len || right.size() != len) {
    throw std::invalid_argument("crossing: segment lengths do not match");
  }
  for (std::size_t j = 0; j < len; ++j) {
    const std::complex<T> e = even[j];
    const std::complex<T> rotated = twiddles[j] * odd[j];
    left[j] = e + rotated;
    right[j] = e - rotated;
  }
  return kFlopsPerCrossingPair * len;
}

template <typename T>
std::vector<Complex> fft_levels(const SampleVector& x, FftStats* stats) {
  using C = std::complex<T>;
  const std::size_t n = x.size();
  const int m = x.level_count();

  std::vector<C> y(n);
  if (m == 0) {
    y[0] = C(x[0]);
  } else {
    const auto perm = build_permutation(m);
    const auto order = perm.final_row();
    for (std::size_t i = 0; i < n; ++i) y[i] = C(x[order[i]]);
  }

  std::uint64_t flops = 0;
  std::vector<C> tw;
  for (std::size_t N = 2; N <= n; N *= 2) {
    const auto table = twiddle_table(N);
    tw.assign(table.factors.begin(), table.factors.end());
    const std::size_t half = N / 2;
    for (std::size_t base = 0; base < n; base += N) {
      std::span<C> e(y.data() + base, half);
      std::span<C> o(y.data() + base + half, half);
      flops += cross<T>(e, o, tw, e, o);
    }
  }
  if (stats) stats->flops += flops;

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Complex(y[i]);
  return out;
}

}  // namespace

std::uint64_t crossing_into(std::span<const Complex> even, std::span<const Complex> odd,
                            std::span<const Complex> twiddles, std::span<Complex> left,
                            std::span<Complex> right) {
  return cross<double>(even, odd, twiddles, left, right);
}

CrossingOutput crossing(const CrossingBuffers& buffers, const TwiddleTable& twiddles,
                        std::uint64_t* flops) {
  const std::size_t half = twiddles.factors.size();
  if (buffers.even.size() != half || buffers.odd.size() != half) {
    throw std::invalid_argument("crossing: segments must hold N/2 = " + std::to_string(half) +
                                " elements");
  }
  CrossingOutput out{std::vector<Complex>(half), std::vector<Complex>(half)};
  const auto f = crossing_into(buffers.even, buffers.odd, twiddles.factors, out.left, out.right);
  if (flops) *flops += f;
  return out;
}

SampleVector fft_serial(const SampleVector& x, FftStats* stats) {
  return fft_serial(x, Precision::kDouble, stats);
}

SampleVector fft_serial(const SampleVector& x, Precision precision, FftStats* stats) {
  if (precision == Precision::kSingle) return SampleVector(fft_levels<float>(x, stats));
  return SampleVector(fft_levels<double>(x, stats));
}

SampleVector ifft_serial(const SampleVector& X, FftStats* stats) {
  std::vector<Complex> conj_in(X.begin(), X.end());
  for (auto& v : conj_in) v = std::conj(v);
  const auto forward = fft_serial(SampleVector(std::move(conj_in)), stats);
  const double scale = 1.0 / static_cast<double>(X.size());
  std::vector<Complex> out(forward.begin(), forward.end());
  for (auto& v : out) v = std::conj(v) * scale;
  return SampleVector(std::move(out));
}

std::vector<Complex> dft_oracle(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("dft_oracle needs at least one sample");
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("dft_oracle: non-finite input");
    }
  }
  // exp(-2*pi*i*t/n) for every residue t = j*k mod n.
  std::vector<Complex> roots(n);
  for (std::size_t t = 0; t < n; ++t) {
    roots[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
  }
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += x[k] * roots[t];
      t += j;
      if (t >= n) t -= n;
    }
    out[j] = acc;
  }
  return out;
}

double max_relative_error(std::span<const Complex> actual, std::span<const Complex> expected) {
  if (actual.size() != expected.size()) {
    throw std::invalid_argument("max_relative_error: length mismatch");
  }
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    worst = std::max(worst, std::abs(actual[i] - expected[i]));
    scale = std::max(scale, std::abs(expected[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace slidefft

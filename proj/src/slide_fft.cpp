#include "slidefft/slide_fft.hpp"

#include <stdexcept>
#include <string>

#include "slidefft/errors.hpp"

namespace slidefft {
namespace {

const std::string kIncoming = "incoming";
const std::string kOutgoing = "outgoing";
const std::string kStageEven = "stage_even";
const std::string kStageOdd = "stage_odd";

std::vector<Complex> load(const Mesh& mesh, PeCoord pe, const std::string& name) {
  return mesh.load_values<Complex>(pe, name);
}

void overwrite(Mesh& mesh, PeCoord pe, const std::string& name, std::span<const Complex> values) {
  auto& a = mesh.array_mut(pe, name);
  std::memcpy(a.payload.data(), values.data(), values.size_bytes());
}

void run_local_level(Mesh& mesh, const WaveLayout& layout, const LevelDescriptor& level,
                     const TwiddleTable& twiddles) {
  const std::size_t e = layout.elements_per_pe;
  const std::size_t half = level.N / 2;
  std::vector<PeFlops> work;
  work.reserve(layout.pe_count());
  for (std::size_t j = 0; j < layout.pe_count(); ++j) {
    const PeCoord pe = layout.pe(j);
    auto data = load(mesh, pe, layout.name);
    std::uint64_t flops = 0;
    for (std::size_t base = 0; base < e; base += level.N) {
      std::span<Complex> even(data.data() + base, half);
      std::span<Complex> odd(data.data() + base + half, half);
      flops += crossing_into(even, odd, twiddles.factors, even, odd);
    }
    overwrite(mesh, pe, layout.name, data);
    work.push_back({pe, flops});
  }
  mesh.book_compute(work);
}

std::span<const Complex> twiddle_slice(const TwiddleTable& t, std::size_t chunk, std::size_t e) {
  return std::span<const Complex>(t.factors).subspan(chunk * e, e);
}

void run_overlay_level(Mesh& mesh, const WaveLayout& layout, const LevelDescriptor& level,
                       const TwiddleTable& twiddles) {
  const std::size_t e = layout.elements_per_pe;
  const std::size_t d = level.hops;
  const int shift = static_cast<int>(d);

  std::vector<PeCoord> even_pes;
  std::vector<PeCoord> odd_pes;
  for (std::size_t block = 0; block < level.crossings; ++block) {
    for (std::size_t i = 0; i < d; ++i) {
      even_pes.push_back(layout.pe(block * 2 * d + i));
      odd_pes.push_back(layout.pe(block * 2 * d + d + i));
    }
  }

  mesh.slide({odd_pes, layout.name, {0, -shift}, kIncoming});

  std::vector<PeFlops> work;
  work.reserve(even_pes.size());
  std::vector<Complex> right(e);
  for (std::size_t idx = 0; idx < even_pes.size(); ++idx) {
    const PeCoord pe = even_pes[idx];
    auto even = load(mesh, pe, layout.name);
    const auto odd = load(mesh, pe, kIncoming);
    const auto flops = crossing_into(even, odd, twiddle_slice(twiddles, idx % d, e), even, right);
    overwrite(mesh, pe, layout.name, even);
    mesh.store_values<Complex>(pe, kOutgoing, right, layout.element_bits);
    mesh.release(pe, kIncoming);
    work.push_back({pe, flops});
  }
  mesh.book_compute(work);

  mesh.slide({even_pes, kOutgoing, {0, shift}, layout.name});
}

void run_midpoint_level(Mesh& mesh, const WaveLayout& layout, const LevelDescriptor& level,
                        const TwiddleTable& twiddles) {
  const std::size_t d = level.hops;
  const int half_shift = static_cast<int>(d / 2);

  std::vector<PeCoord> even_pes;
  std::vector<PeCoord> odd_pes;
  std::vector<PeCoord> shared_pes;
  for (std::size_t block = 0; block < level.crossings; ++block) {
    for (std::size_t i = 0; i < d; ++i) {
      even_pes.push_back(layout.pe(block * 2 * d + i));
      odd_pes.push_back(layout.pe(block * 2 * d + d + i));
      shared_pes.push_back(layout.pe(block * 2 * d + d / 2 + i));
    }
  }

  const SlideDescriptor forward[] = {
      {even_pes, layout.name, {0, half_shift}, kStageEven},
      {odd_pes, layout.name, {0, -half_shift}, kStageOdd},
  };
  mesh.slide_concurrent(forward);

  std::vector<PeFlops> work;
  work.reserve(shared_pes.size());
  for (std::size_t idx = 0; idx < shared_pes.size(); ++idx) {
    const PeCoord pe = shared_pes[idx];
    auto even = load(mesh, pe, kStageEven);
    auto odd = load(mesh, pe, kStageOdd);
    const auto flops = crossing_into(even, odd, twiddle_slice(twiddles, idx % d, layout.elements_per_pe),
                                     even, odd);
    overwrite(mesh, pe, kStageEven, even);
    overwrite(mesh, pe, kStageOdd, odd);
    work.push_back({pe, flops});
  }
  mesh.book_compute(work);

  const SlideDescriptor backward[] = {
      {shared_pes, kStageEven, {0, -half_shift}, layout.name},
      {shared_pes, kStageOdd, {0, half_shift}, layout.name},
  };
  mesh.slide_concurrent(backward);
}

}  // namespace

std::vector<LevelDescriptor> level_schedule(const WaveLayout& layout) {
  std::vector<LevelDescriptor> levels;
  const std::size_t e = layout.elements_per_pe;
  int p = layout.m;
  for (std::size_t N = 2; N <= layout.n; N *= 2, --p) {
    LevelDescriptor level;
    level.p = p;
    level.N = N;
    level.crossings = layout.n / N;
    level.local = N <= e;
    level.hops = level.local ? 0 : (N / 2) / e;
    levels.push_back(level);
  }
  return levels;
}

int minimal_feasible_k(std::size_t n, std::uint32_t element_bits, std::size_t local_memory_bytes) {
  const int m = log2_exact(n);
  for (int k = 0; k <= m; ++k) {
    const std::size_t per_pe = (n >> k) * element_bits / 8 * kBufferFactor;
    if (per_pe <= local_memory_bytes) return k;
  }
  return -1;
}

WaveLayout plan_wave(std::size_t n, int k, std::uint32_t element_bits, const Mesh& mesh,
                     PeCoord origin) {
  const int m = log2_exact(n);
  if (k < 0 || k > m) {
    throw std::invalid_argument("wave length k=" + std::to_string(k) + " must lie in [0, " +
                                std::to_string(m) + "]");
  }
  if (element_bits == 0 || element_bits % 8 != 0) {
    throw std::invalid_argument("element width must be a positive multiple of 8 bits");
  }

  WaveLayout layout;
  layout.k = k;
  layout.origin = origin;
  layout.n = n;
  layout.m = m;
  layout.elements_per_pe = n >> k;
  layout.element_bits = element_bits;

  const std::size_t capacity = mesh.config().local_memory_bytes;
  if (layout.bytes_per_pe() > capacity) {
    const int min_k = minimal_feasible_k(n, element_bits, capacity);
    throw CapacityExceeded("wave k=" + std::to_string(k) + " needs " +
                               std::to_string(layout.bytes_per_pe()) + " B per PE, have " +
                               std::to_string(capacity) + "; minimal feasible k is " +
                               std::to_string(min_k),
                           layout.bytes_per_pe(), capacity,
                           min_k >= 0 ? std::optional<int>(min_k) : std::nullopt);
  }
  const PeCoord last = layout.pe(layout.pe_count() - 1);
  if (!mesh.on_grid(origin) || !mesh.on_grid(last)) {
    throw OffGridError("wave of " + std::to_string(layout.pe_count()) +
                       " PEs does not fit the grid row from column " + std::to_string(origin.col));
  }
  return layout;
}

void distribute(const SampleVector& x, const WaveLayout& layout, Mesh& mesh) {
  if (x.size() != layout.n) {
    throw std::invalid_argument("distribute: input has " + std::to_string(x.size()) +
                                " samples, wave expects " + std::to_string(layout.n));
  }
  std::vector<Complex> permuted(x.begin(), x.end());
  if (layout.m >= 1) {
    const auto table = build_permutation(layout.m);
    const auto order = table.final_row();
    for (std::size_t i = 0; i < layout.n; ++i) permuted[i] = x[order[i]];
  }
  const std::size_t e = layout.elements_per_pe;
  for (std::size_t j = 0; j < layout.pe_count(); ++j) {
    mesh.store_values<Complex>(layout.pe(j), layout.name,
                               std::span<const Complex>(permuted).subspan(j * e, e),
                               layout.element_bits);
  }
}

SampleVector gather(const Mesh& mesh, const WaveLayout& layout) {
  std::vector<Complex> out;
  out.reserve(layout.n);
  for (std::size_t j = 0; j < layout.pe_count(); ++j) {
    const auto chunk = load(mesh, layout.pe(j), layout.name);
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  return SampleVector(std::move(out));
}

SampleVector slide_fft(Mesh& mesh, const WaveLayout& layout, AlignmentStrategy strategy) {
  for (const auto& level : level_schedule(layout)) {
    const auto twiddles = twiddle_table(level.N);
    if (level.local) {
      run_local_level(mesh, layout, level, twiddles);
    } else if (strategy == AlignmentStrategy::kMidpoint && level.hops >= 2) {
      run_midpoint_level(mesh, layout, level, twiddles);
    } else {
      // A one-hop pair has no PE half way between, so midpoint falls back here.
      run_overlay_level(mesh, layout, level, twiddles);
    }
  }
  return gather(mesh, layout);
}

TransferBudget transfer_budget(const WaveLayout& layout, AlignmentStrategy strategy) {
  TransferBudget budget;
  for (const auto& level : level_schedule(layout)) {
    if (level.local) continue;
    const std::uint64_t half = layout.n / 2;
    const bool both_halves = strategy == AlignmentStrategy::kMidpoint && level.hops >= 2;
    budget.forward_elements += both_halves ? 2 * half : half;
    budget.backward_elements += both_halves ? 2 * half : half;
  }
  budget.implementation_elements = budget.forward_elements + budget.backward_elements;
  budget.geometric_estimate = layout.n > 0 ? 2 * (layout.n - 1) : 0;
  return budget;
}

MeasuredEfficiency measure_efficiency(const CycleLedger& ledger) {
  const auto total = ledger.total_cycles();
  if (total == 0) throw std::invalid_argument("measure_efficiency: ledger is empty");
  MeasuredEfficiency r;
  r.eta_exact = Rational(static_cast<std::int64_t>(ledger.compute_cycles),
                         static_cast<std::int64_t>(total));
  r.eta = to_double(r.eta_exact);
  return r;
}

}  // namespace slidefft

#pragma once

// FFT over a wave of 2^k PEs in one mesh row. Data are laid out in
// permuted order, 2^(m-k) elements per PE. Levels whose segment pairs fit
// inside one PE compute locally; the rest align the odd half with the even
// half by a forward slide, cross, and slide the right output back.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "slidefft/fft_core.hpp"
#include "slidefft/mesh_sim.hpp"
#include "slidefft/rational.hpp"

namespace slidefft {

enum class AlignmentStrategy {
  kOverlay,   // O slides onto E's PEs; R slides back.
  kMidpoint,  // E and O each slide half way and meet in between.
};

// Resident, incoming and output staging per PE.
inline constexpr std::size_t kBufferFactor = 3;

struct WaveLayout {
  int k = 0;
  PeCoord origin;
  std::size_t n = 0;
  int m = 0;
  std::size_t elements_per_pe = 0;
  std::uint32_t element_bits = 64;
  std::string name = "wave";

  std::size_t pe_count() const noexcept { return std::size_t{1} << k; }
  PeCoord pe(std::size_t j) const noexcept { return {origin.row, origin.col + static_cast<int>(j)}; }
  std::size_t bytes_per_pe() const noexcept {
    return elements_per_pe * element_bits / 8 * kBufferFactor;
  }
};

struct LevelDescriptor {
  int p = 0;              // m down to 1
  std::size_t N = 0;      // segment pair size, 2^(m-p+1)
  std::size_t crossings = 0;
  bool local = false;     // the pair lives on a single PE
  std::size_t hops = 0;   // PE distance between E and O; 0 when local
};

std::vector<LevelDescriptor> level_schedule(const WaveLayout& layout);

// Smallest k whose per-PE share (times the staging factor) fits in
// local_memory_bytes, or -1 if none does.
int minimal_feasible_k(std::size_t n, std::uint32_t element_bits, std::size_t local_memory_bytes);

WaveLayout plan_wave(std::size_t n, int k, std::uint32_t element_bits, const Mesh& mesh,
                     PeCoord origin = {});

// Unbooked host write of x in permuted order, block by block.
void distribute(const SampleVector& x, const WaveLayout& layout, Mesh& mesh);

// Unbooked host read of the wave in PE order.
SampleVector gather(const Mesh& mesh, const WaveLayout& layout);

SampleVector slide_fft(Mesh& mesh, const WaveLayout& layout,
                       AlignmentStrategy strategy = AlignmentStrategy::kOverlay);

struct TransferBudget {
  std::uint64_t forward_elements = 0;
  std::uint64_t backward_elements = 0;
  // What slide_fft books under the chosen strategy.
  std::uint64_t implementation_elements = 0;
  // 2 * (n/2 + n/4 + ... + 1): the geometric-series reading.
  std::uint64_t geometric_estimate = 0;
};

TransferBudget transfer_budget(const WaveLayout& layout,
                               AlignmentStrategy strategy = AlignmentStrategy::kOverlay);

struct MeasuredEfficiency {
  Rational eta_exact;
  double eta = 0.0;
};

// compute / (compute + transfer + ramp)
MeasuredEfficiency measure_efficiency(const CycleLedger& ledger);

}  // namespace slidefft

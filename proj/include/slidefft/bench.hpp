#pragma once

// Benchmark sweeps and verification suites behind the command-line tool.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slidefft/mesh_sim.hpp"
#include "slidefft/perf_model.hpp"
#include "slidefft/slide_fft.hpp"

namespace slidefft {

enum class CostPreset { kCs2Calibrated, kPurePacket };

std::optional<CostPreset> parse_preset(std::string_view name);
std::string_view preset_name(CostPreset preset);
MeshConfig preset_config(CostPreset preset, int rows = 1, int cols = 1);

// total_cycles is aggregate PE-cycles for slide sweeps and wall-clock
// cycles for FFT sweeps; cycles_per_element is always
// total_cycles / total_elements.
struct BenchRecord {
  std::size_t pe_count = 0;
  std::size_t elements_per_pe = 0;
  std::size_t total_elements = 0;
  std::uint64_t total_cycles = 0;
  std::uint64_t transfer_cycles = 0;
  std::uint64_t compute_cycles = 0;
  std::uint64_t flops = 0;
  double eta_measured = 0.0;
  double eta_predicted = 0.0;
  std::string status = "ok";

  double cycles_per_element() const;
};

inline constexpr std::string_view kCsvHeader =
    "pe_count,elements_per_pe,total_elements,total_cycles,cycles_per_element,"
    "transfer_cycles,compute_cycles,flops,eta_measured,eta_predicted,status";

std::string to_csv_row(const BenchRecord& record);
void write_csv(std::ostream& os, std::span<const BenchRecord> records);

struct SlideBenchConfig {
  std::vector<std::size_t> pe_counts{8, 16, 32};
  std::size_t elements_min = 1;
  std::size_t elements_max = 500;
  std::uint32_t element_bits = 32;
  MeshConfig mesh = MeshConfig::cs2_calibrated(1, 1);  // rows/cols are replaced per point
};

// One single-hop slide per (pe_count, elements_per_pe), sorted by
// pe_count then elements_per_pe.
std::vector<BenchRecord> bench_slide(const SlideBenchConfig& config);

struct FftBenchConfig {
  std::size_t n = 1024;
  int k_min = 0;
  int k_max = 10;
  std::uint32_t element_bits = 64;
  MeshConfig mesh = MeshConfig::cs2_calibrated(1, 1);  // cycles_per_flop follows model.b
  CostModel model;
  AlignmentStrategy strategy = AlignmentStrategy::kOverlay;
  std::uint64_t seed = 0;
};

struct FftBenchRow {
  int k = 0;
  BenchRecord record;
  CycleLedger ledger;
  TransferBudget budget;
  double deviation = 0.0;
  std::optional<int> minimal_k;  // set on infeasible rows
};

std::vector<FftBenchRow> bench_fft(const FftBenchConfig& config);

struct VerifyConfig {
  std::size_t max_n = 1024;
  std::uint64_t seed = 0;
  int trials = 10;
  std::uint32_t element_bits = 64;
  double tolerance = 1e-9;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Permutation, oracle equivalence, Parseval, round trip, FLOP count and
// k-consistency over n = 2 .. max_n.
std::vector<SuiteResult> run_verify(const VerifyConfig& config);

}  // namespace slidefft

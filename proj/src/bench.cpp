#include "slidefft/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slidefft/errors.hpp"
#include "slidefft/fft_core.hpp"
#include "slidefft/random.hpp"

namespace slidefft {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_error(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::optional<CostPreset> parse_preset(std::string_view name) {
  if (name == "cs2-calibrated") return CostPreset::kCs2Calibrated;
  if (name == "pure-packet") return CostPreset::kPurePacket;
  return std::nullopt;
}

std::string_view preset_name(CostPreset preset) {
  return preset == CostPreset::kPurePacket ? "pure-packet" : "cs2-calibrated";
}

MeshConfig preset_config(CostPreset preset, int rows, int cols) {
  return preset == CostPreset::kPurePacket ? MeshConfig::pure_packet(rows, cols)
                                           : MeshConfig::cs2_calibrated(rows, cols);
}

double BenchRecord::cycles_per_element() const {
  if (total_elements == 0) return 0.0;
  return static_cast<double>(total_cycles) / static_cast<double>(total_elements);
}

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os << r.pe_count << ',' << r.elements_per_pe << ',' << r.total_elements << ','
     << r.total_cycles << ',' << fixed6(r.cycles_per_element()) << ',' << r.transfer_cycles << ','
     << r.compute_cycles << ',' << r.flops << ',' << fixed6(r.eta_measured) << ','
     << fixed6(r.eta_predicted) << ',' << r.status;
  return os.str();
}

void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) os << to_csv_row(r) << '\n';
}

std::vector<BenchRecord> bench_slide(const SlideBenchConfig& config) {
  if (config.elements_min < 1 || config.elements_max < config.elements_min) {
    throw std::invalid_argument("element range must satisfy 1 <= min <= max");
  }
  if (config.element_bits == 0 || config.element_bits % 8 != 0) {
    throw std::invalid_argument("element width must be a positive multiple of 8 bits");
  }
  auto pe_counts = config.pe_counts;
  std::sort(pe_counts.begin(), pe_counts.end());

  std::vector<BenchRecord> records;
  for (const auto pes : pe_counts) {
    if (pes == 0) throw std::invalid_argument("PE count must be positive");
    for (std::size_t e = config.elements_min; e <= config.elements_max; ++e) {
      MeshConfig mc = config.mesh;
      mc.rows = 1;
      mc.cols = static_cast<int>(pes) + 1;
      Mesh mesh(mc);

      BenchRecord r;
      r.pe_count = pes;
      r.elements_per_pe = e;
      r.total_elements = pes * e;
      try {
        const auto sources = row_span({0, 0}, pes);
        const std::size_t bytes = e * config.element_bits / 8;
        for (std::size_t j = 0; j < pes; ++j) {
          std::vector<std::byte> data(bytes);
          for (std::size_t b = 0; b < bytes; ++b) data[b] = static_cast<std::byte>((j + b) & 0xFF);
          mesh.store(sources[j], "A", std::move(data), config.element_bits);
        }
        mesh.slide({sources, "A", {0, 1}, "B"});
        const auto& l = mesh.ledger();
        r.total_cycles = l.total_cycles();
        r.transfer_cycles = l.transfer_cycles;
        r.compute_cycles = l.compute_cycles;
        r.flops = l.flops;
      } catch (const CapacityExceeded&) {
        r.status = "capacity_exceeded";
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::vector<FftBenchRow> bench_fft(const FftBenchConfig& config) {
  const int m = log2_exact(config.n);
  if (m < 1) throw std::invalid_argument("bench-fft needs n >= 2");
  if (config.k_min < 0 || config.k_max > m || config.k_min > config.k_max) {
    throw std::invalid_argument("k range must lie within [0, log2 n]");
  }
  config.model.validate();
  const auto predicted = predict_efficiency(config.model, config.n, m);
  const SampleVector input = random_vector(config.n, config.seed);

  std::vector<FftBenchRow> rows;
  for (int k = config.k_min; k <= config.k_max; ++k) {
    FftBenchRow row;
    row.k = k;
    auto& r = row.record;
    r.pe_count = std::size_t{1} << k;
    r.elements_per_pe = config.n >> k;
    r.total_elements = config.n;
    r.eta_predicted = predicted.eta;

    MeshConfig mc = config.mesh;
    mc.rows = 1;
    mc.cols = static_cast<int>(r.pe_count);
    mc.cycles_per_flop = config.model.b;
    Mesh mesh(mc);
    try {
      const auto layout = plan_wave(config.n, k, config.element_bits, mesh);
      distribute(input, layout, mesh);
      slide_fft(mesh, layout, config.strategy);
      row.ledger = mesh.ledger();
      row.budget = transfer_budget(layout, config.strategy);
      r.total_cycles = row.ledger.wall_cycles;
      r.transfer_cycles = row.ledger.transfer_cycles;
      r.compute_cycles = row.ledger.compute_cycles;
      r.flops = row.ledger.flops;
      r.eta_measured = measure_efficiency(row.ledger).eta;
      row.deviation = reconcile(predicted, r.eta_measured);
    } catch (const CapacityExceeded& e) {
      row.minimal_k = e.minimal_k();
      r.status = "capacity_exceeded:min_k=" + (e.minimal_k() ? std::to_string(*e.minimal_k()) : "none");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SuiteResult> run_verify(const VerifyConfig& config) {
  const int max_m = log2_exact(config.max_n);
  if (max_m < 1) throw std::invalid_argument("verify needs n >= 2");
  if (config.trials < 1) throw std::invalid_argument("verify needs at least one trial");

  std::vector<SuiteResult> results;

  {
    SuiteResult s{"permutation", true, ""};
    for (int m = 1; m <= max_m && s.pass; ++m) {
      const auto table = build_permutation(m);
      const auto n = table.size();
      for (const auto& row : table.rows) {
        std::vector<std::size_t> sorted(row.begin(), row.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) s.pass = s.pass && sorted[i] == i;
      }
      const auto last = table.final_row();
      for (std::size_t i = 0; i < n; ++i) {
        s.pass = s.pass && last[i] == bit_reverse_index(i, m) && last[last[i]] == i;
      }
      if (!s.pass) s.detail = "mismatch at m=" + std::to_string(m);
    }
    if (s.pass) s.detail = "m=1.." + std::to_string(max_m);
    results.push_back(s);
  }

  SuiteResult serial{"oracle_serial", true, ""};
  SuiteResult mesh_suite{"oracle_slide_fft", true, ""};
  SuiteResult consistency{"k_consistency", true, ""};
  SuiteResult flops{"flop_count", true, ""};
  SuiteResult parseval{"parseval", true, ""};
  SuiteResult round_trip{"round_trip", true, ""};
  double worst_serial = 0.0;
  double worst_mesh = 0.0;
  double worst_parseval = 0.0;
  double worst_round_trip = 0.0;

  for (int m = 1; m <= max_m; ++m) {
    const std::size_t n = std::size_t{1} << m;
    for (int t = 0; t < config.trials; ++t) {
      const auto x = random_vector(n, config.seed + static_cast<std::uint64_t>(t));
      const auto expected = dft_oracle(x.values());

      FftStats stats;
      const auto spectrum = fft_serial(x, &stats);
      worst_serial = std::max(worst_serial, max_relative_error(spectrum.values(), expected));
      if (stats.flops != flops_per_transform(n)) {
        flops.pass = false;
        flops.detail = "fft_serial n=" + std::to_string(n);
      }

      double energy_in = 0.0;
      double energy_out = 0.0;
      for (const auto& v : x) energy_in += std::norm(v);
      for (const auto& v : spectrum) energy_out += std::norm(v);
      worst_parseval = std::max(worst_parseval,
                                std::abs(energy_out - n * energy_in) / (n * energy_in));

      const auto back = ifft_serial(spectrum);
      worst_round_trip = std::max(worst_round_trip, max_relative_error(back.values(), x.values()));

      const int min_k = minimal_feasible_k(n, config.element_bits, MeshConfig{}.local_memory_bytes);
      for (int k = std::max(0, min_k); k <= m; ++k) {
        Mesh mesh(MeshConfig::cs2_calibrated(1, 1 << k));
        const auto layout = plan_wave(n, k, config.element_bits, mesh);
        distribute(x, layout, mesh);
        const auto out = slide_fft(mesh, layout);
        worst_mesh = std::max(worst_mesh, max_relative_error(out.values(), expected));
        if (out != spectrum) {
          consistency.pass = false;
          consistency.detail = "n=" + std::to_string(n) + " k=" + std::to_string(k);
        }
        if (mesh.ledger().flops != flops_per_transform(n)) {
          flops.pass = false;
          flops.detail = "slide_fft n=" + std::to_string(n) + " k=" + std::to_string(k);
        }
      }
    }
  }

  serial.pass = worst_serial < config.tolerance;
  serial.detail = "max rel err " + fmt_error(worst_serial);
  mesh_suite.pass = worst_mesh < config.tolerance;
  mesh_suite.detail = "max rel err " + fmt_error(worst_mesh);
  parseval.pass = worst_parseval < config.tolerance;
  parseval.detail = "max rel err " + fmt_error(worst_parseval);
  round_trip.pass = worst_round_trip < config.tolerance;
  round_trip.detail = "max rel err " + fmt_error(worst_round_trip);
  if (consistency.pass) consistency.detail = "bit-identical to fft_serial for every feasible k";
  if (flops.pass) flops.detail = "5 n log2 n for every run";

  results.push_back(serial);
  results.push_back(mesh_suite);
  results.push_back(consistency);
  results.push_back(flops);
  results.push_back(parseval);
  results.push_back(round_trip);
  return results;
}

}  // namespace slidefft

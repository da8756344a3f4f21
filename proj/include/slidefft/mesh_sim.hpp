#pragma once

// Cycle-accounting model of a homogeneous 2D grid of processing elements.
//
// Each PE owns a bounded local memory holding named arrays. Data moves only
// by Slide: a synchronous translation of arrays on a set of PEs by a fixed
// displacement. Compute is booked per phase. The ledger keeps aggregate
// PE-cycles (summed over PEs) alongside the wall-clock critical path
// (per phase, the slowest PE).

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "slidefft/errors.hpp"
#include "slidefft/rational.hpp"

namespace slidefft {

struct PeCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const PeCoord&, const PeCoord&) = default;
};

struct Displacement {
  int rows = 0;
  int cols = 0;
  int hops() const noexcept { return (rows < 0 ? -rows : rows) + (cols < 0 ? -cols : cols); }
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

inline PeCoord operator+(PeCoord pe, Displacement d) { return {pe.row + d.rows, pe.col + d.cols}; }

struct MeshConfig {
  int rows = 1;
  int cols = 1;
  std::size_t local_memory_bytes = 48 * 1024;
  std::uint32_t packet_bits = 32;
  Rational cycles_per_packet_per_hop{1};
  std::uint32_t ramp_cycles = 3;
  Rational per_element_overhead_cycles{3, 10};
  Rational cycles_per_flop{3};

  // Overheads calibrated so a 32-bit element costs about 1.3 cycles.
  static MeshConfig cs2_calibrated(int rows, int cols);
  // No ramp latency and no per-element overhead: a 32-bit element costs
  // exactly one packet cycle per hop, a 64-bit datum two.
  static MeshConfig pure_packet(int rows, int cols);

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;

  // Asymptotic link cycles per element of the given width.
  Rational cycles_per_element(std::uint32_t element_bits) const;
};

struct CycleLedger {
  std::uint64_t compute_cycles = 0;
  std::uint64_t transfer_cycles = 0;
  std::uint64_t ramp_cycles = 0;
  std::uint64_t flops = 0;
  std::uint64_t element_hops = 0;
  std::uint64_t elements_moved = 0;
  std::uint64_t wall_cycles = 0;

  std::uint64_t total_cycles() const noexcept {
    return compute_cycles + transfer_cycles + ramp_cycles;
  }
  friend bool operator==(const CycleLedger&, const CycleLedger&) = default;
};

// One `name=value` line per field.
std::string to_key_value(const CycleLedger& ledger);

// An array resident on one PE. `payload` is the simulator's copy of the
// values and may be wider than the declared datum (double-precision shadow
// of a single-precision datum); capacity and link costs use the declared
// element_bits only.
struct ResidentArray {
  std::string name;
  std::vector<std::byte> payload;
  std::size_t element_count = 0;
  std::uint32_t element_bits = 8;

  std::size_t footprint_bytes() const noexcept { return (element_count * element_bits + 7) / 8; }
};

struct SlideDescriptor {
  std::vector<PeCoord> source_pes;
  std::string source_name;
  Displacement displacement;
  std::string destination_name;  // empty keeps source_name
};

struct SlideRegion {
  std::vector<PeCoord> pes;
  std::string name;
};

struct PeFlops {
  PeCoord pe;
  std::uint64_t flops = 0;
};

// Contiguous run of `count` PEs along a row starting at `first`.
std::vector<PeCoord> row_span(PeCoord first, std::size_t count);

class Mesh {
 public:
  explicit Mesh(MeshConfig config);

  const MeshConfig& config() const noexcept { return config_; }
  std::size_t pe_count() const noexcept { return memories_.size(); }
  bool on_grid(PeCoord pe) const noexcept;

  // Raw bytes, one element per element_bits/8 bytes of data.
  void store(PeCoord pe, const std::string& name, std::vector<std::byte> data,
             std::uint32_t element_bits = 8);

  // Payload of `element_count` values charged at element_bits each.
  void store_shadowed(PeCoord pe, const std::string& name, std::vector<std::byte> payload,
                      std::size_t element_count, std::uint32_t element_bits);

  template <typename T>
  void store_values(PeCoord pe, const std::string& name, std::span<const T> values,
                    std::uint32_t element_bits) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::vector<std::byte> bytes(values.size_bytes());
    if (!values.empty()) std::memcpy(bytes.data(), values.data(), bytes.size());
    store_shadowed(pe, name, std::move(bytes), values.size(), element_bits);
  }

  template <typename T>
  std::vector<T> load_values(PeCoord pe, const std::string& name) const {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto& a = array(pe, name);
    std::vector<T> out(a.payload.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), a.payload.data(), out.size() * sizeof(T));
    return out;
  }

  // Mutable payload access for in-place compute.
  ResidentArray& array_mut(PeCoord pe, const std::string& name);
  const ResidentArray& array(PeCoord pe, const std::string& name) const;
  bool has_array(PeCoord pe, const std::string& name) const;
  void release(PeCoord pe, const std::string& name);

  std::size_t used_bytes(PeCoord pe) const;
  std::size_t free_bytes(PeCoord pe) const { return config_.local_memory_bytes - used_bytes(pe); }

  // Moves the named array on every source PE by the displacement.
  // All-or-nothing: on error the mesh and ledger are untouched.
  SlideRegion slide(const SlideDescriptor& desc);

  // Several slides issued in the same synchronous phase (for instance in
  // opposite directions). Wall-clock is the slowest PE across all of them.
  std::vector<SlideRegion> slide_concurrent(std::span<const SlideDescriptor> descs);

  // One compute phase: every listed PE works in parallel.
  void book_compute(std::span<const PeFlops> work);

  const CycleLedger& ledger() const noexcept { return ledger_; }
  CycleLedger ledger_report() const { return ledger_; }

 private:
  std::size_t index(PeCoord pe) const;
  std::vector<ResidentArray>& slot(PeCoord pe);
  const std::vector<ResidentArray>& slot(PeCoord pe) const;
  void insert(PeCoord pe, ResidentArray array);

  MeshConfig config_;
  std::vector<std::vector<ResidentArray>> memories_;
  CycleLedger ledger_;
};

// Per-PE cost of sliding `elements` values of width `element_bits` over
// `hops` hops: ramp + ceil(a_eff * E + hops - 1), zero when hops == 0.
struct SlideCost {
  std::uint64_t ramp = 0;
  std::uint64_t transfer = 0;
  std::uint64_t total() const noexcept { return ramp + transfer; }
};
SlideCost slide_cost(const MeshConfig& config, std::size_t elements, std::uint32_t element_bits,
                     int hops);

}  // namespace slidefft

#include "slidefft/mesh_sim.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace slidefft {
namespace {

std::string describe(PeCoord pe) {
  return "(" + std::to_string(pe.row) + "," + std::to_string(pe.col) + ")";
}

}  // namespace

MeshConfig MeshConfig::cs2_calibrated(int rows, int cols) {
  MeshConfig c;
  c.rows = rows;
  c.cols = cols;
  return c;
}

MeshConfig MeshConfig::pure_packet(int rows, int cols) {
  MeshConfig c;
  c.rows = rows;
  c.cols = cols;
  c.ramp_cycles = 0;
  c.per_element_overhead_cycles = 0;
  return c;
}

void MeshConfig::validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("mesh needs at least one row and one column");
  }
  if (local_memory_bytes == 0) throw std::invalid_argument("local memory must be positive");
  if (packet_bits == 0) throw std::invalid_argument("packet width must be positive");
  if (cycles_per_packet_per_hop < 0 || per_element_overhead_cycles < 0 || cycles_per_flop < 0) {
    throw std::invalid_argument("cycle costs must be non-negative");
  }
}

Rational MeshConfig::cycles_per_element(std::uint32_t element_bits) const {
  return Rational(element_bits, packet_bits) * cycles_per_packet_per_hop +
         per_element_overhead_cycles;
}

SlideCost slide_cost(const MeshConfig& config, std::size_t elements, std::uint32_t element_bits,
                     int hops) {
  if (hops == 0) return {};
  const Rational busy = config.cycles_per_element(element_bits) *
                            static_cast<std::int64_t>(elements) +
                        Rational(hops - 1);
  return {config.ramp_cycles, static_cast<std::uint64_t>(ceil_rational(busy))};
}

std::string to_key_value(const CycleLedger& l) {
  std::ostringstream os;
  os << "compute_cycles=" << l.compute_cycles << '\n'
     << "transfer_cycles=" << l.transfer_cycles << '\n'
     << "ramp_cycles=" << l.ramp_cycles << '\n'
     << "flops=" << l.flops << '\n'
     << "element_hops=" << l.element_hops << '\n'
     << "elements_moved=" << l.elements_moved << '\n'
     << "wall_cycles=" << l.wall_cycles << '\n';
  return os.str();
}

std::vector<PeCoord> row_span(PeCoord first, std::size_t count) {
  std::vector<PeCoord> pes;
  pes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pes.push_back({first.row, first.col + static_cast<int>(i)});
  return pes;
}

Mesh::Mesh(MeshConfig config) : config_(std::move(config)) {
  config_.validate();
  memories_.resize(static_cast<std::size_t>(config_.rows) * static_cast<std::size_t>(config_.cols));
}

bool Mesh::on_grid(PeCoord pe) const noexcept {
  return pe.row >= 0 && pe.col >= 0 && pe.row < config_.rows && pe.col < config_.cols;
}

std::size_t Mesh::index(PeCoord pe) const {
  if (!on_grid(pe)) throw OffGridError("PE " + describe(pe) + " is off the grid");
  return static_cast<std::size_t>(pe.row) * static_cast<std::size_t>(config_.cols) +
         static_cast<std::size_t>(pe.col);
}

std::vector<ResidentArray>& Mesh::slot(PeCoord pe) { return memories_[index(pe)]; }
const std::vector<ResidentArray>& Mesh::slot(PeCoord pe) const { return memories_[index(pe)]; }

std::size_t Mesh::used_bytes(PeCoord pe) const {
  std::size_t used = 0;
  for (const auto& a : slot(pe)) used += a.footprint_bytes();
  return used;
}

bool Mesh::has_array(PeCoord pe, const std::string& name) const {
  const auto& s = slot(pe);
  return std::any_of(s.begin(), s.end(), [&](const ResidentArray& a) { return a.name == name; });
}

const ResidentArray& Mesh::array(PeCoord pe, const std::string& name) const {
  for (const auto& a : slot(pe)) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no array '" + name + "' on PE " + describe(pe));
}

ResidentArray& Mesh::array_mut(PeCoord pe, const std::string& name) {
  for (auto& a : slot(pe)) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no array '" + name + "' on PE " + describe(pe));
}

void Mesh::release(PeCoord pe, const std::string& name) {
  auto& s = slot(pe);
  auto it = std::find_if(s.begin(), s.end(), [&](const ResidentArray& a) { return a.name == name; });
  if (it == s.end()) throw std::out_of_range("no array '" + name + "' on PE " + describe(pe));
  s.erase(it);
}

void Mesh::insert(PeCoord pe, ResidentArray array) {
  if (has_array(pe, array.name)) {
    throw std::invalid_argument("array '" + array.name + "' already resident on PE " + describe(pe));
  }
  const std::size_t used = used_bytes(pe);
  const std::size_t need = array.footprint_bytes();
  if (used + need > config_.local_memory_bytes) {
    throw CapacityExceeded("storing '" + array.name + "' (" + std::to_string(need) +
                               " B) on PE " + describe(pe) + " exceeds local memory (" +
                               std::to_string(config_.local_memory_bytes - used) + " B free)",
                           need, config_.local_memory_bytes - used);
  }
  slot(pe).push_back(std::move(array));
}

void Mesh::store(PeCoord pe, const std::string& name, std::vector<std::byte> data,
                 std::uint32_t element_bits) {
  if (element_bits == 0 || element_bits % 8 != 0) {
    throw std::invalid_argument("element width must be a positive multiple of 8 bits");
  }
  if (data.size() % (element_bits / 8) != 0) {
    throw std::invalid_argument("byte count is not a whole number of elements");
  }
  const std::size_t count = data.size() / (element_bits / 8);
  insert(pe, ResidentArray{name, std::move(data), count, element_bits});
}

void Mesh::store_shadowed(PeCoord pe, const std::string& name, std::vector<std::byte> payload,
                          std::size_t element_count, std::uint32_t element_bits) {
  if (element_bits == 0) throw std::invalid_argument("element width must be positive");
  insert(pe, ResidentArray{name, std::move(payload), element_count, element_bits});
}

SlideRegion Mesh::slide(const SlideDescriptor& desc) {
  return slide_concurrent(std::span<const SlideDescriptor>(&desc, 1)).front();
}

std::vector<SlideRegion> Mesh::slide_concurrent(std::span<const SlideDescriptor> descs) {
  struct Move {
    PeCoord from;
    PeCoord to;
    const std::string* from_name;
    const std::string* to_name;
    int hops;
  };
  std::vector<Move> moves;
  std::vector<SlideRegion> regions;

  for (const auto& d : descs) {
    const std::string& to_name = d.destination_name.empty() ? d.source_name : d.destination_name;
    SlideRegion region{{}, to_name};
    for (const auto& pe : d.source_pes) {
      if (!on_grid(pe)) throw OffGridError("slide source " + describe(pe) + " is off the grid");
      const PeCoord to = pe + d.displacement;
      if (!on_grid(to)) {
        throw OffGridError("slide from " + describe(pe) + " lands off the grid at " + describe(to));
      }
      if (!has_array(pe, d.source_name)) {
        throw std::out_of_range("no array '" + d.source_name + "' on PE " + describe(pe));
      }
      moves.push_back({pe, to, &d.source_name, &to_name, d.displacement.hops()});
      region.pes.push_back(to);
    }
    regions.push_back(std::move(region));
  }

  // Net footprint change per PE once every source is lifted and every
  // destination written; sources and destinations may overlap.
  std::map<std::size_t, std::int64_t> delta;
  std::map<std::pair<std::size_t, std::string>, int> leaving;
  std::map<std::pair<std::size_t, std::string>, int> arriving;
  for (const auto& mv : moves) {
    const auto fp = static_cast<std::int64_t>(array(mv.from, *mv.from_name).footprint_bytes());
    delta[index(mv.from)] -= fp;
    delta[index(mv.to)] += fp;
    if (++leaving[{index(mv.from), *mv.from_name}] > 1) {
      throw std::invalid_argument("array '" + *mv.from_name + "' on PE " + describe(mv.from) +
                                  " is slid twice in one phase");
    }
    if (++arriving[{index(mv.to), *mv.to_name}] > 1) {
      throw std::invalid_argument("two arrays named '" + *mv.to_name + "' arrive at PE " +
                                  describe(mv.to));
    }
  }
  for (const auto& mv : moves) {
    if (has_array(mv.to, *mv.to_name) && !leaving.count({index(mv.to), *mv.to_name})) {
      throw std::invalid_argument("array '" + *mv.to_name + "' already resident on PE " +
                                  describe(mv.to));
    }
  }
  for (const auto& [idx, change] : delta) {
    const PeCoord pe{static_cast<int>(idx / config_.cols), static_cast<int>(idx % config_.cols)};
    const auto used = static_cast<std::int64_t>(used_bytes(pe));
    const auto cap = static_cast<std::int64_t>(config_.local_memory_bytes);
    if (used + change > cap) {
      throw CapacityExceeded("slide into PE " + describe(pe) + " needs " +
                                 std::to_string(used + change) + " B of " + std::to_string(cap),
                             static_cast<std::size_t>(used + change),
                             config_.local_memory_bytes);
    }
  }

  std::vector<ResidentArray> in_flight;
  in_flight.reserve(moves.size());
  for (const auto& mv : moves) {
    auto& s = slot(mv.from);
    auto it = std::find_if(s.begin(), s.end(),
                           [&](const ResidentArray& a) { return a.name == *mv.from_name; });
    in_flight.push_back(std::move(*it));
    s.erase(it);
  }

  std::uint64_t slowest = 0;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    auto& a = in_flight[i];
    const auto& mv = moves[i];
    const auto cost = slide_cost(config_, a.element_count, a.element_bits, mv.hops);
    ledger_.ramp_cycles += cost.ramp;
    ledger_.transfer_cycles += cost.transfer;
    slowest = std::max(slowest, cost.total());
    if (mv.hops > 0) {
      ledger_.element_hops += a.element_count * static_cast<std::uint64_t>(mv.hops);
      ledger_.elements_moved += a.element_count;
    }
    a.name = *mv.to_name;
    slot(mv.to).push_back(std::move(a));
  }
  ledger_.wall_cycles += slowest;
  return regions;
}

void Mesh::book_compute(std::span<const PeFlops> work) {
  std::uint64_t slowest = 0;
  for (const auto& w : work) {
    (void)index(w.pe);
    const auto cycles = static_cast<std::uint64_t>(
        ceil_rational(config_.cycles_per_flop * static_cast<std::int64_t>(w.flops)));
    ledger_.compute_cycles += cycles;
    ledger_.flops += w.flops;
    slowest = std::max(slowest, cycles);
  }
  ledger_.wall_cycles += slowest;
}

}  // namespace slidefft

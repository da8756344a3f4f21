#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace slidefft {

// Raised when a store or slide would push a PE past its local memory.
// When raised while planning a wave, minimal_k names the smallest wave
// length exponent whose per-PE share fits.
class CapacityExceeded : public std::runtime_error {
 public:
  CapacityExceeded(const std::string& what, std::size_t requested_bytes,
                   std::size_t available_bytes,
                   std::optional<int> minimal_k = std::nullopt)
      : std::runtime_error(what),
        requested_bytes_(requested_bytes),
        available_bytes_(available_bytes),
        minimal_k_(minimal_k) {}

  std::size_t requested_bytes() const noexcept { return requested_bytes_; }
  std::size_t available_bytes() const noexcept { return available_bytes_; }
  std::optional<int> minimal_k() const noexcept { return minimal_k_; }

 private:
  std::size_t requested_bytes_;
  std::size_t available_bytes_;
  std::optional<int> minimal_k_;
};

// A PE position or displacement that falls outside the grid.
class OffGridError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace slidefft

#pragma once

// Closed-form efficiency of the mesh FFT: with a cycles per transferred
// datum and b cycles per FLOP, eta = 5bmn / (an + 5bmn).

#include <cstddef>
#include <cstdint>

#include "slidefft/rational.hpp"

namespace slidefft {

struct CostModel {
  Rational a{2};
  Rational b{3};
  // Charge the write-back slides too, i.e. 2a per datum.
  bool doubled_transfer = false;

  void validate() const;
  Rational transfer_cost() const { return doubled_transfer ? a * 2 : a; }
};

struct EfficiencyReport {
  Rational eta_exact;
  double eta = 0.0;
  double eta_first_order = 0.0;
  Rational alpha;
  int m = 0;
  std::uint64_t flops = 0;
};

Rational alpha(const CostModel& model);

EfficiencyReport predict_efficiency(const CostModel& model, std::size_t n, int m);

struct MarginCheck {
  Rational margin;
  bool pass = false;
};

inline constexpr double kDefaultMarginThreshold = 0.05;

// alpha / (5m) against a threshold; uses the effective transfer cost, so
// doubled_transfer doubles the margin.
MarginCheck check_margin(const CostModel& model, int m,
                         double threshold = kDefaultMarginThreshold);

std::uint64_t flops_per_transform(std::size_t n);

double reconcile(const EfficiencyReport& predicted, double eta_measured);

}  // namespace slidefft

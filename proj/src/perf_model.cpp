#include "slidefft/perf_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slidefft/fft_core.hpp"

namespace slidefft {

void CostModel::validate() const {
  if (a < 0) throw std::invalid_argument("transfer cost a must be non-negative");
  if (b <= 0) throw std::invalid_argument("FLOP cost b must be positive");
}

Rational alpha(const CostModel& model) {
  if (model.b.numerator() == 0) throw std::invalid_argument("alpha is undefined for b = 0");
  return model.a / model.b;
}

EfficiencyReport predict_efficiency(const CostModel& model, std::size_t n, int m) {
  model.validate();
  if (m < 1 || m > 40 || n != (std::size_t{1} << m)) {
    throw std::invalid_argument("predict_efficiency needs n = 2^m with m >= 1 (got n=" +
                                std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
  const auto n_r = static_cast<std::int64_t>(n);
  const Rational compute = model.b * 5 * m * n_r;
  const Rational transfer = model.transfer_cost() * n_r;

  EfficiencyReport r;
  r.eta_exact = compute / (transfer + compute);
  r.eta = to_double(r.eta_exact);
  r.alpha = alpha(model);
  const Rational margin = model.transfer_cost() / model.b / (5 * m);
  r.eta_first_order = 1.0 - to_double(margin);
  r.m = m;
  r.flops = flops_per_transform(n);
  return r;
}

MarginCheck check_margin(const CostModel& model, int m, double threshold) {
  if (m < 1) throw std::invalid_argument("check_margin needs m >= 1");
  model.validate();
  MarginCheck c;
  c.margin = model.transfer_cost() / model.b / (5 * m);
  c.pass = to_double(c.margin) < threshold;
  return c;
}

std::uint64_t flops_per_transform(std::size_t n) {
  const int m = log2_exact(n);
  return 5ULL * n * static_cast<std::uint64_t>(m);
}

double reconcile(const EfficiencyReport& predicted, double eta_measured) {
  return std::abs(eta_measured - predicted.eta) / predicted.eta;
}

}  // namespace slidefft

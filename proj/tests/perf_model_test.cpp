#include "slidefft/perf_model.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace slidefft {
namespace {

CostModel model(Rational a, Rational b, bool doubled = false) { return {a, b, doubled}; }

TEST(AlphaTest, Examples) {
  EXPECT_EQ(alpha(model(2, 3)), Rational(2, 3));
  EXPECT_EQ(alpha(model(0, 3)), Rational(0));
  EXPECT_EQ(alpha(model(5, 5)), Rational(1));
  EXPECT_THROW(alpha(model(2, 0)), std::invalid_argument);
}

TEST(PredictEfficiencyTest, ReferenceParameters) {
  const std::size_t n = std::size_t{1} << 17;
  const auto r = predict_efficiency(model(2, 3), n, 17);
  // 5*3*17*n / (2n + 5*3*17*n) = 255 / 257
  EXPECT_EQ(r.eta_exact, Rational(255, 257));
  EXPECT_NEAR(r.eta, 0.992218, 5e-7);
  EXPECT_EQ(r.alpha, Rational(2, 3));
  EXPECT_EQ(r.m, 17);
  EXPECT_EQ(r.flops, 11141120u);
  const double x = 2.0 / 3.0 / 85.0;
  EXPECT_DOUBLE_EQ(r.eta_first_order, 1.0 - x);
  EXPECT_LT(std::abs(r.eta - r.eta_first_order), x * x);
}

TEST(PredictEfficiencyTest, FreeTransfersAreFullyEfficient) {
  const auto r = predict_efficiency(model(0, 3), 1024, 10);
  EXPECT_EQ(r.eta_exact, Rational(1));
  EXPECT_EQ(r.eta_first_order, 1.0);
}

TEST(PredictEfficiencyTest, DoubledTransferChargesTwice) {
  const auto r = predict_efficiency(model(2, 3, true), std::size_t{1} << 17, 17);
  EXPECT_EQ(r.eta_exact, Rational(255, 259));
}

TEST(PredictEfficiencyTest, RejectsBadSizes) {
  EXPECT_THROW(predict_efficiency(model(2, 3), 1000, 10), std::invalid_argument);
  EXPECT_THROW(predict_efficiency(model(2, 3), 1024, 9), std::invalid_argument);
  EXPECT_THROW(predict_efficiency(model(2, 3), 1, 0), std::invalid_argument);
  EXPECT_THROW(predict_efficiency(model(2, 0), 4, 2), std::invalid_argument);
  EXPECT_THROW(predict_efficiency(model(-1, 3), 4, 2), std::invalid_argument);
}

TEST(CheckMarginTest, Examples) {
  const auto ref = check_margin(model(2, 3), 17);
  EXPECT_EQ(ref.margin, Rational(2, 255));
  EXPECT_TRUE(ref.pass);
  EXPECT_NEAR(to_double(ref.margin), 0.007843, 5e-7);

  const auto free = check_margin(model(0, 3), 4);
  EXPECT_EQ(free.margin, Rational(0));
  EXPECT_TRUE(free.pass);

  const auto bad = check_margin(model(5, 1), 1);
  EXPECT_EQ(bad.margin, Rational(1));
  EXPECT_FALSE(bad.pass);
  EXPECT_THROW(check_margin(model(2, 3), 0), std::invalid_argument);
}

TEST(FlopsTest, Examples) {
  EXPECT_EQ(flops_per_transform(8), 120u);
  EXPECT_EQ(flops_per_transform(1), 0u);
  EXPECT_EQ(flops_per_transform(std::size_t{1} << 17), 11141120u);
  EXPECT_THROW(flops_per_transform(12), std::invalid_argument);
}

TEST(ReconcileTest, Examples) {
  const auto r = predict_efficiency(model(2, 3), 1024, 10);
  EXPECT_EQ(reconcile(r, r.eta), 0.0);
  const auto free = predict_efficiency(model(0, 3), 1024, 10);
  EXPECT_EQ(reconcile(free, 1.0), 0.0);
  EXPECT_NEAR(reconcile(free, 0.9), 0.1, 1e-15);
}

TEST(PerfModelPropertyTest, MonotoneInTransferCostAndLevels) {
  for (int m = 1; m <= 30; ++m) {
    const std::size_t n = std::size_t{1} << m;
    Rational prev(2);
    for (int a_tenths = 0; a_tenths <= 100; ++a_tenths) {
      const auto eta = predict_efficiency(model(Rational(a_tenths, 10), 3), n, m).eta_exact;
      EXPECT_LT(eta, prev);
      prev = eta;
    }
  }
  for (int a = 0; a <= 6; ++a) {
    Rational prev(-1);
    for (int m = 1; m <= 30; ++m) {
      const auto eta = predict_efficiency(model(a, 3), std::size_t{1} << m, m).eta_exact;
      if (a == 0) {
        EXPECT_EQ(eta, Rational(1));
      } else {
        EXPECT_GT(eta, prev);
      }
      prev = eta;
    }
  }
}

TEST(PerfModelPropertyTest, ApproachesOneAndObeysSeriesBound) {
  for (bool doubled : {false, true}) {
    for (int m = 1; m <= 40; ++m) {
      const auto mdl = model(Rational(2), Rational(3), doubled);
      const auto r = predict_efficiency(mdl, std::size_t{1} << m, m);
      const double x = to_double(mdl.transfer_cost() / mdl.b / (5 * m));
      ASSERT_LT(x, 1.0);
      EXPECT_LE(std::abs(r.eta - (1.0 - x)), x * x + 1e-15) << "m=" << m;
    }
  }
  EXPECT_GT(predict_efficiency(model(2, 3), std::size_t{1} << 40, 40).eta, 0.9966);
}

TEST(PerfModelPropertyTest, DependsOnSizeOnlyThroughLevels) {
  for (int m = 1; m <= 40; ++m) {
    // n cancels: 5bm / (a + 5bm)
    const Rational closed = Rational(15 * m) / (2 + 15 * m);
    EXPECT_EQ(predict_efficiency(model(2, 3), std::size_t{1} << m, m).eta_exact, closed);
  }
}

}  // namespace
}  // namespace slidefft

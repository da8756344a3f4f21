#pragma once

#include <gtest/gtest.h>

#include <complex>
#include <span>
#include <vector>

#include "slidefft/fft_core.hpp"

namespace slidefft::testing {

inline void expect_close(std::span<const Complex> actual, std::span<const Complex> expected,
                         double tol) {
  ASSERT_EQ(actual.size(), expected.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    EXPECT_NEAR(actual[i].real(), expected[i].real(), tol) << "index " << i;
    EXPECT_NEAR(actual[i].imag(), expected[i].imag(), tol) << "index " << i;
  }
}

}  // namespace slidefft::testing

#include "slidefft/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

namespace slidefft {
namespace {

TEST(RationalTest, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
  EXPECT_EQ(parse_rational("-4/6"), Rational(-2, 3));
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
}

TEST(RationalTest, RejectsGarbage) {
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.2.3"), std::invalid_argument);
}

TEST(RationalTest, CeilRoundsTowardPositiveInfinity) {
  EXPECT_EQ(ceil_rational(Rational(13, 10) * 100), 130);
  EXPECT_EQ(ceil_rational(Rational(13, 10) * 7), 10);  // 9.1
  EXPECT_EQ(ceil_rational(Rational(-1, 2)), 0);
  EXPECT_EQ(ceil_rational(Rational(-3, 2)), -1);
  EXPECT_EQ(ceil_rational(Rational(4)), 4);
}

TEST(RationalTest, ToString) {
  EXPECT_EQ(to_string(Rational(255, 257)), "255/257");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

}  // namespace
}  // namespace slidefft

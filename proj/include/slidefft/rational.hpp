#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace slidefft {

using Rational = boost::rational<std::int64_t>;

// Accepts "3", "-2/3" and finite decimals such as "0.3" or "1.25".
Rational parse_rational(std::string_view text);

// Smallest integer not less than r.
std::int64_t ceil_rational(const Rational& r);

double to_double(const Rational& r);

// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& r);

}  // namespace slidefft

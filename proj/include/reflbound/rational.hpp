#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace reflbound {

using Rational = boost::rational<std::int64_t>;

/// Parses "3.1", "-40", "87808", "31/10" exactly.  Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Shortest exact decimal when the denominator is 2^i 5^j, otherwise "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

}  // namespace reflbound

#include "reflbound/rational.hpp"

#include <charconv>
#include <stdexcept>

#include "reflbound/errors.hpp"

namespace reflbound {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw DomainError("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(s.substr(0, slash), text);
    std::int64_t den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string digits(s.substr(0, dot));
  std::int64_t den = 1;
  if (dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    if (frac.size() > 15) throw DomainError("too many decimals in '" + std::string(text) + "'");
    digits += frac;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  }
  if (digits.empty()) throw DomainError("not a rational number: '" + std::string(text) + "'");
  std::int64_t num = parse_int(digits, text);
  return Rational(negative ? -num : num, den);
}

std::string to_string(const Rational& r) {
  std::int64_t den = r.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());

  int places = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  std::int64_t scaled = r.numerator() * (scale / r.denominator());
  if (places == 0) return std::to_string(scaled);
  std::string sign = scaled < 0 ? "-" : "";
  std::int64_t mag = scaled < 0 ? -scaled : scaled;
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  return sign + std::to_string(mag / scale) + "." + frac;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace reflbound

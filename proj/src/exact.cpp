#include "reflbound/exact.hpp"

#include <gmpxx.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reflbound {

namespace {

mpz_class power(std::uint64_t base, std::uint64_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

mpz_class power(std::int64_t base, std::uint64_t e) {
  mpz_class b(static_cast<long>(base));
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace

double half_log_margin(const Rational& T, const std::vector<LogRatioTerm>& terms) {
  double m = 0.5 * (std::log(static_cast<double>(T.numerator())) -
                    std::log(static_cast<double>(T.denominator())));
  for (const auto& t : terms) {
    if (t.g > 1) m -= std::log(static_cast<double>(t.g)) / static_cast<double>(t.phi);
  }
  return m;
}

int exact_half_log_sign(const Rational& T, const std::vector<LogRatioTerm>& terms) {
  if (T <= 0) throw std::invalid_argument("exact_half_log_sign: T must be positive");

  // E·ln T  vs  Σ 2(E/φ_i)·ln g_i  with E = lcm of the φ_i that matter.
  std::uint64_t E = 1;
  for (const auto& t : terms) {
    if (t.g > 1) E = std::lcm(E, t.phi);
  }
  std::uint64_t common = E;
  std::vector<std::uint64_t> exps;
  for (const auto& t : terms) {
    std::uint64_t e = t.g > 1 ? 2 * (E / t.phi) : 0;
    exps.push_back(e);
    if (e) common = std::gcd(common, e);
  }
  std::uint64_t eT = E / common;

  mpz_class lhs = power(T.numerator(), eT);
  mpz_class rhs = power(T.denominator(), eT);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (exps[i]) rhs *= power(terms[i].g, exps[i] / common);
  }
  int c = cmp(lhs, rhs);
  return (c > 0) - (c < 0);
}

int hybrid_half_log_sign(const Rational& T, const std::vector<LogRatioTerm>& terms) {
  double m = half_log_margin(T, terms);
  if (std::abs(m) >= 1e-9) return m > 0 ? 1 : -1;
  return exact_half_log_sign(T, terms);
}

}  // namespace reflbound

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "reflbound/bigfloat.hpp"
#include "reflbound/exact.hpp"
#include "reflbound/numeric_policy.hpp"
#include "reflbound/numthy.hpp"
#include "reflbound/rational.hpp"

using namespace reflbound;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3.1") == Rational(31, 10));
  CHECK(parse_rational("87808") == Rational(87808));
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(to_string(Rational(31, 10)) == "3.1");
  CHECK(to_string(Rational(1, 3)) == "1/3");
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
}

TEST_CASE("exact ties are zero") {
  // ½ln(16/8) = ln2/2 = ln γ(4)/φ(4).
  CHECK(exact_half_log_sign(Rational(2), {{2, 2}}) == 0);
  CHECK(hybrid_half_log_sign(Rational(2), {{2, 2}}) == 0);
  // ½ln(4/1) = ln 2 = ln γ(4)·2/φ(4)... with two terms.
  CHECK(exact_half_log_sign(Rational(4), {{2, 2}, {2, 2}}) == 0);
  CHECK(exact_half_log_sign(Rational(9), {{3, 2}}) > 0);
  CHECK(exact_half_log_sign(Rational(9, 4), {{3, 2}}) < 0);
  CHECK(exact_half_log_sign(Rational(1, 2), {}) < 0);
  CHECK(exact_half_log_sign(Rational(1), {{1, 7}}) == 0);
}

TEST_CASE("exact and float comparators agree away from ties") {
  std::mt19937_64 rng(0xA11CE);
  std::uniform_int_distribution<std::int64_t> ld(3, 5000);
  std::uniform_int_distribution<std::int64_t> num(1, 400), den(1, 100);
  int compared = 0;
  for (int i = 0; i < 10000; ++i) {
    std::int64_t l = ld(rng);
    Rational T(num(rng), den(rng));
    LogRatioTerm t{numthy::gamma(l), numthy::euler_phi(static_cast<std::uint64_t>(l))};
    double m = half_log_margin(T, {t});
    double ref = static_cast<double>(std::log(static_cast<long double>(to_double(T))) / 2 -
                                     oracle::ln_gamma_over_phi(l));
    CHECK(m == doctest::Approx(ref).epsilon(1e-9));
    if (std::abs(m) <= 1e-9) continue;
    ++compared;
    int s = exact_half_log_sign(T, {t});
    CHECK(s == (m > 0 ? 1 : -1));
  }
  CHECK(compared > 9000);
}

TEST_CASE("bigfloat basics") {
  BigFloat a(2.0, 200);
  BigFloat r = sqrt(a);
  CHECK(to_double(r * r) == doctest::Approx(2.0));
  BigArith ar(200);
  CHECK(to_double(ar.pi()) == doctest::Approx(3.141592653589793));
  CHECK(to_double(ar.ln(Rational(1, 2))) == doctest::Approx(-std::log(2.0)));
  CHECK(ar.bits() == 200);
}

TEST_CASE("policy escalates close calls and aborts on ties") {
  NumericPolicy p;
  auto close = [](auto& j) {
    const auto& ar = j.ar();
    return j.positive(ar.ln(Rational(1'000'000'000'001, 1'000'000'000'000)), "close");
  };
  CHECK(p.run(close));
  CHECK(p.escalations() == 1);

  auto far = [](auto& j) { return j.positive(j.ar().ln(Rational(3)), "far"); };
  CHECK(p.run(far));
  CHECK(p.escalations() == 1);

  auto tie = [](auto& j) {
    const auto& ar = j.ar();
    return j.ge(ar.ln(Rational(4)), ar.integer(2) * ar.ln(Rational(2)), "tie");
  };
  CHECK_THROWS_AS(p.run(tie), PrecisionFailure);

  NumericPolicy hi(200);
  CHECK(hi.high_precision());
  CHECK(hi.run(close));
  CHECK(hi.escalations() == 0);
  CHECK(NumericPolicy(10).bits() == 53);
  CHECK(NumericPolicy(4096).bits() == kMaxPrecisionBits);
}

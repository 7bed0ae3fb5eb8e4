#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reflbound/numthy.hpp"

using namespace reflbound;
using namespace reflbound::numthy;

TEST_CASE("euler_phi matches a naive count") {
  for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(euler_phi(n) == oracle::phi(n));
  CHECK(euler_phi(4249) == 3636);
  CHECK(euler_phi(1) == 1);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> big(kSieveLimit, 50'000'000);
  for (int i = 0; i < 20; ++i) {
    std::uint64_t n = big(rng);
    CHECK(reconstruct(factorize(n)) == n);
  }
}

TEST_CASE("factorize and merge_lcm") {
  auto f = factorize(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == PrimePower{2, 3});
  CHECK(f[1] == PrimePower{3, 2});
  CHECK(f[2] == PrimePower{5, 1});
  auto m = merge_lcm(factorize(12), factorize(18));
  CHECK(reconstruct(m) == 36);
  CHECK(reconstruct(merge_lcm(factorize(607), factorize(7))) == 4249);
  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("prime power predicates") {
  for (std::int64_t n = 1; n <= 3000; ++n) {
    CHECK(is_prime(n) == oracle::is_prime(n));
    CHECK(is_prime_power(n) == oracle::prime_of_power(n).has_value());
  }
}

TEST_CASE("gamma and gamma_tilde agree with the norm of 4 sin^2") {
  for (std::int64_t l = 3; l <= 200; ++l) {
    CAPTURE(l);
    CHECK(static_cast<std::int64_t>(numthy::gamma(l)) == oracle::gamma(l));
    CHECK(static_cast<std::int64_t>(gamma_tilde(l)) == oracle::gamma_tilde(l));
  }
  CHECK(numthy::gamma(8) == 2);
  CHECK(numthy::gamma(9) == 3);
  CHECK(numthy::gamma(12) == 1);
  CHECK(gamma_tilde(4) == 4);
  CHECK(gamma_tilde(10) == 5);
  CHECK_THROWS_AS(numthy::gamma(2), DomainError);
}

TEST_CASE("rho and degree of F_{k,s}") {
  CHECK(rho(7, 7) == 1);
  CHECK(rho(607, 7) == 2);
  CHECK(rho(12, 10) == 2);
  CHECK(rho(12, 8) == 1);
  CHECK(degree_Fks(607, 7) == 909);
  CHECK(degree_Fks(12, 10) == 4);
  CHECK(degree_Fks(7, 7) == 3);
  // F_{k,s} with gcd(k,s) ∤ 2 is F_lcm.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> d(3, 400);
  for (int i = 0; i < 300; ++i) {
    std::int64_t k = d(rng), s = d(rng);
    if (k < s) std::swap(k, s);
    std::int64_t g = std::gcd(k, s), lcm = k / g * s;
    std::uint64_t expect = oracle::phi(lcm) / (2 % g == 0 ? 4 : 2);
    CHECK(degree_Fks(k, s) == expect);
  }
}

TEST_CASE("log discriminants against root-of-unity products") {
  for (std::int64_t l = 3; l <= 120; ++l) {
    CAPTURE(l);
    CHECK(ln_disc_cyclotomic(l).value == doctest::Approx(static_cast<double>(oracle::ln_disc_cyclotomic(l))).epsilon(1e-9));
    CHECK(ln_disc_Fl(l).value == doctest::Approx(static_cast<double>(oracle::ln_disc_Fl(l))).epsilon(1e-9));
  }
}

TEST_CASE("small discriminants") {
  auto disc = [](double v) { return std::llround(std::exp(v)); };
  CHECK(disc(ln_disc_Fl(5).value) == 5);
  CHECK(disc(ln_disc_Fl(12).value) == 12);
  CHECK(disc(ln_disc_Fl(7).value) == 49);
  CHECK(disc(ln_disc_Fl(15).value) == 1125);
  CHECK(disc(ln_disc_Fl(20).value) == 2000);
  CHECK(disc(ln_disc_Fl(24).value) == 2304);
  CHECK(disc(ln_disc_Fl(16).value) == 2048);
  CHECK(disc(ln_disc_Fl(3).value) == 1);
  CHECK(disc_cyclotomic_exact(5) == 125);
  CHECK(disc_cyclotomic_exact(12) == 144);
  // Q(√5) = F_{10,6} = F_{5,4}; Q(√3, √5) = F_{12,10}; F_{12,8} = F_24.
  CHECK(disc(ln_disc_Fks(10, 6).value) == 5);
  CHECK(disc(ln_disc_Fks(12, 10).value) == 3600);
  CHECK(disc(ln_disc_Fks(12, 8).value) == 2304);
  CHECK(disc(ln_disc_Fks(5, 4).value) == 5);
}

TEST_CASE("F_l discriminant is an exact square quotient up to 300") {
  for (std::int64_t l = 3; l <= 300; ++l) {
    CAPTURE(l);
    CHECK(disc_Fl_is_square(l));
  }
}

TEST_CASE("high-precision templates agree with doubles") {
  BigArith ar(200);
  for (std::int64_t l : {3, 7, 64, 607, 911, 4249}) {
    auto f = factorize(static_cast<std::uint64_t>(l));
    CHECK(to_double(ln_disc_Fl_t(ar, f)) == doctest::Approx(ln_disc_Fl(l).value).epsilon(1e-12));
  }
  CHECK(to_double(ln_disc_Fks_t(ar, 607, 7)) == doctest::Approx(ln_disc_Fks(607, 7).value).epsilon(1e-12));
}

TEST_CASE("field index helpers") {
  CHECK(to_string(make_single(5)) == "l=5");
  CHECK(to_string(make_pair(607, 7)) == "(607,7)");
  CHECK_THROWS_AS(make_pair(7, 607), DomainError);
  CHECK_THROWS_AS(make_single(2), DomainError);
}

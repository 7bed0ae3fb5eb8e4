#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "reflbound/bounds.hpp"
#include "reflbound/report.hpp"

using namespace reflbound;
using namespace reflbound::bounds;
using oracle::Real;

namespace {

const CaseParams kFallback{Rational(0), Rational(4), Rational(4), Rational(196), 3};
const CaseParams kGamma46{Rational(31, 10), Rational(31, 10), Rational(32), Rational(537824), 3};
const CaseParams kGamma15{Rational(8), Rational(2), Rational(40), Rational(87808), 6};
const CaseParams kGamma64{Rational(0), Rational(4), Rational(12), Rational(784), 3};

Real t_of(std::int64_t l) { return oracle::ln_gamma_over_phi(l); }

std::int64_t pair_degree(std::int64_t k, std::int64_t s) {
  std::int64_t g = std::gcd(k, s);
  return oracle::phi(k / g * s) / (2 % g == 0 ? 4 : 2);
}

std::optional<std::int64_t> pair_methodB(std::int64_t k, std::int64_t s, Real a, Real b) {
  std::int64_t M = pair_degree(k, s);
  Real X = std::log(16 / a) / 2 - t_of(k) - t_of(s);
  Real Y = std::log(b / a) / 2 - std::log(std::sin(oracle::kPi / k)) - std::log(std::sin(oracle::kPi / s));
  if (X <= 0 || M * X > Y) return std::nullopt;
  return static_cast<std::int64_t>(std::floor(Y / (M * X))) * M;
}

std::string dump(const CandidateVerdict& v) { return report::to_json(v).dump(); }

}  // namespace

TEST_CASE("fallback Method A integers") {
  auto v3 = case1_methodA(3, kFallback);
  auto v4 = case1_methodA(4, kFallback);
  auto v5 = case1_methodA(5, kFallback);
  CHECK(v3.final_N == 76);
  CHECK(v4.final_N == 31);
  CHECK(v5.final_N == 24);
  CHECK(v5.n0_A == 12);
  CHECK(v5.base_degree == 2);
  for (std::int64_t l : {3, 4, 5}) {
    auto f = oracle::case1_fekete(l, 0, 4, 4, 196);
    CHECK(case1_methodA(l, kFallback).n0_A == oracle::fekete_scan(f));
  }
}

TEST_CASE("Method A under the pentagon parameters matches a linear scan") {
  for (std::int64_t l = 4; l <= 40; ++l) {
    CAPTURE(l);
    auto v = case1_methodA(l, kGamma46);
    auto f = oracle::case1_fekete(l, 3.1L, 3.1L, 32, 537824);
    if (f.lnInvR <= 0) {
      CHECK_FALSE(v.methodA_applicable.value());
      continue;
    }
    REQUIRE(v.methodA_applicable.value());
    CHECK(v.n0_A == oracle::fekete_scan(f));
  }
  CHECK(case1_methodA(4, kGamma46).N_A == 153);
  CHECK(case1_methodA(5, kGamma46).N_A == 172);
  CHECK_FALSE(case1_methodA(3, kGamma46).methodA_applicable.value());
}

TEST_CASE("Method A for the pair (7,7) by brute force") {
  // F_{7,7} = F_7: cubic of discriminant 49.
  Real a1 = 8, a2 = 2;
  oracle::Fekete f;
  f.M = 3;
  f.lnInvR = 3 * (std::log(64 / (a1 + a2)) / 2 - 2 * t_of(7));
  f.lnB = std::log(Real(2)) + std::log(Real(49)) / 2;
  f.lnS = std::log(2 * std::exp(Real(1)) * oracle::max6(8, 2, 40, 87808) / (a1 + a2)) -
          4 * std::log(std::sin(oracle::kPi / 7));
  auto v = case2_methodA(7, 7, kGamma15);
  REQUIRE(v.methodA_applicable.value());
  CHECK(v.n0_A == oracle::fekete_scan(f));
  CHECK(v.N_A == 3 * oracle::fekete_scan(f));
  auto in = case2_fekete_inputs(7, 7, kGamma15);
  CHECK(in.lnB.value == doctest::Approx(static_cast<double>(f.lnB)));
  CHECK(in.lnS == doctest::Approx(static_cast<double>(f.lnS)));
  CHECK(in.lnInvR == doctest::Approx(static_cast<double>(f.lnInvR)));
}

TEST_CASE("Method B against the closed-form oracle") {
  auto v = case2_methodB(607, 7, kGamma15);
  CHECK(v.base_degree == 909);
  CHECK(v.final_N == 909);
  CHECK(pair_methodB(607, 7, 8, 87808) == 909);

  for (std::int64_t l = 3; l <= 2500; ++l) {
    CAPTURE(l);
    auto w = case1_methodB(l, kGamma46);
    auto ref = oracle::case1_methodB(l, 3.1L, 537824);
    CHECK(w.exceptional == case1_is_exceptional(l, kGamma46.a()));
    if (w.exceptional) continue;
    CHECK(w.N_B == ref);
  }

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> sd(6, 60), kd(6, 1500);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t s = sd(rng), k = std::max(s, kd(rng));
    if (case2_is_exceptional_l(k, kGamma15.a()) || case2_is_exceptional_l(s, kGamma15.a())) continue;
    if (case2_is_exceptional_pair(k, s, kGamma15.a())) continue;
    CAPTURE(k);
    CAPTURE(s);
    CHECK(case2_methodB(k, s, kGamma15).N_B == pair_methodB(k, s, 8, 87808));
  }
}

TEST_CASE("exceptional predicates") {
  std::vector<std::int64_t> exc46;
  for (std::int64_t l = 3; l < 3000; ++l) {
    bool ref = std::log(4 / 3.1L) / 2 - t_of(l) <= 0;
    CHECK(case1_is_exceptional(l, kGamma46.a()) == ref);
    if (ref) exc46.push_back(l);
  }
  CHECK(exc46 == std::vector<std::int64_t>{3, 4, 5, 7, 8, 9, 11, 13, 17, 19, 23});
  // ½ln(16/8) = ln√2 = ln γ(4)/φ(4): a tie counts as exceptional.
  CHECK(case2_is_exceptional_l(4, Rational(8)));
  CHECK(case2_is_exceptional_l(3, Rational(8)));
  CHECK_FALSE(case2_is_exceptional_l(7, Rational(8)));
  CHECK(case2_is_exceptional_pair(241, 7, Rational(8)));
  CHECK_FALSE(case2_is_exceptional_pair(251, 7, Rational(8)));
}

TEST_CASE("Fekete minimality and monotonicity") {
  std::mt19937_64 rng(0xFE4E7E);
  std::uniform_int_distribution<std::int64_t> Md(1, 400);
  std::uniform_real_distribution<double> R(0.002, 2.0), B(0.0, 2000.0), S(-5.0, 60.0), bump(0.01, 5.0);
  for (int i = 0; i < 1000; ++i) {
    FeketeInputs in{Md(rng), {B(rng), 53}, R(rng), S(rng)};
    std::int64_t n0 = fekete_min_n0(in);
    CHECK(fekete_gap(in, n0) >= 0);
    if (n0 > 1) CHECK(fekete_gap(in, n0 - 1) < 0);
    if (n0 < 200000) {
      oracle::Fekete f{in.M, in.lnB.value, in.lnInvR, in.lnS};
      CHECK(oracle::fekete_scan(f) == n0);
    }
    FeketeInputs s = in, b = in, r = in;
    s.lnS += bump(rng);
    b.lnB.value += bump(rng);
    r.lnInvR += bump(rng);
    CHECK(fekete_min_n0(s) >= n0);
    CHECK(fekete_min_n0(b) >= n0);
    CHECK(fekete_min_n0(r) <= n0);
  }
  CHECK_THROWS_AS(fekete_min_n0(FeketeInputs{3, {1.0, 53}, -0.5, 1.0}), InapplicableError);
}

TEST_CASE("stage constants, single index") {
  auto c = case1_stage_constants(kGamma46);
  CHECK(c.C == doctest::Approx(0.194399).epsilon(1e-5));
  CHECK(c.C >= 0.194399 - 1e-6);
  CHECK(c.threshold_start <= 2053);
  CHECK(stage_inequality_holds(CaseKind::Single, 2053, c.start_slope, kGamma46));
  auto X = c.threshold_start;
  bool prev_all = stage_inequality_holds(CaseKind::Single, X - 1, c.start_slope, kGamma46) &&
                  stage_inequality_holds(CaseKind::Single, 2 * (X - 1), c.start_slope, kGamma46) &&
                  stage_inequality_holds(CaseKind::Single, 10 * (X - 1), c.start_slope, kGamma46);
  CHECK_FALSE(prev_all);

  // Δ by brute force over the first 10⁴ prime powers ≥ L0.
  Real best = -1;
  int seen = 0;
  for (std::int64_t n = X; seen < 10000; ++n) {
    if (!oracle::prime_of_power(n)) continue;
    ++seen;
    std::int64_t q = *oracle::prime_of_power(n);
    best = std::max(best, std::log(Real(q)) / Real(n - n / q));
  }
  Real delta = std::log(4 / 3.1L) / 2 - best;
  CHECK(c.delta == doctest::Approx(static_cast<double>(delta)).epsilon(1e-12));
  CHECK(c.delta >= 0.1237);
  CHECK(c.threshold_end <= 2125);
  CHECK(stage_inequality_holds(CaseKind::Single, 2125, c.delta_slope, kGamma46));
}

TEST_CASE("stage constants, pairs") {
  auto c = case2_stage_constants(kGamma15);
  CHECK(c.threshold_start <= 911);
  CHECK(stage_inequality_holds(CaseKind::Pair, 911, c.start_slope, kGamma15));
  double ref = std::log(std::sqrt(2.0)) - std::log(7.0) / 6 - std::log(911.0) / 910;
  CHECK(c.delta == doctest::Approx(ref).epsilon(1e-9));
  CHECK(std::abs(c.delta - ref) < 1e-6);
  CHECK(c.delta >= 0.0147667 - 1e-7);
  CHECK(c.threshold_end <= 38563);
  CHECK(stage_inequality_holds(CaseKind::Pair, 38563, c.delta_slope, kGamma15));
  CHECK(std::get<numthy::Pair>(c.delta_at) == numthy::Pair{911, 7});
}

TEST_CASE("enumeration completeness beyond the end thresholds") {
  std::mt19937_64 rng(4242);
  auto c1 = case1_stage_constants(kGamma46);
  std::uniform_int_distribution<std::int64_t> ld(c1.threshold_end + 1, 10 * c1.threshold_end);
  for (int found = 0; found < 100;) {
    std::int64_t l = ld(rng);
    if (!oracle::prime_of_power(l)) continue;
    ++found;
    CHECK_FALSE(case1_methodB(l, kGamma46).methodB_holds.value());
  }
  auto c2 = case2_stage_constants(kGamma15);
  std::uniform_int_distribution<std::int64_t> kd(c2.threshold_end + 1, 10 * c2.threshold_end);
  for (int found = 0; found < 100;) {
    std::int64_t k = kd(rng);
    if (!oracle::prime_of_power(k)) continue;
    std::uniform_int_distribution<std::int64_t> sd(6, k);
    std::int64_t s = sd(rng);
    if (case2_is_exceptional_l(s, kGamma15.a())) continue;
    ++found;
    CAPTURE(k);
    CAPTURE(s);
    CHECK_FALSE(case2_methodB(k, s, kGamma15).methodB_holds.value());
  }
}

TEST_CASE("case 1 enumeration") {
  auto r = enumerate_case1(kGamma46, {99, 1, NumericPolicy{}});
  CHECK(r.exceptional_l == std::vector<std::int64_t>{3, 4, 5, 7, 8, 9, 11, 13, 17, 19, 23});
  std::int64_t mx = 0;
  for (const auto& v : r.verdicts) {
    auto l = std::get<numthy::Single>(v.index).l;
    if (l >= r.constants.threshold_start) CHECK(oracle::prime_of_power(l).has_value());
    CHECK(l < r.constants.threshold_end);
    if (v.N_B) CHECK(*v.N_B % v.base_degree == 0);
    if (v.N_A) CHECK(*v.N_A % v.base_degree == 0);
    if (v.final_N) mx = std::max(mx, *v.final_N);
  }
  REQUIRE(r.grand_bound.has_value());
  CHECK(*r.grand_bound == mx);
  CHECK(*r.grand_bound >= 99);
}

TEST_CASE("case 2 enumeration is deterministic across worker counts") {
  auto base = enumerate_case2(kGamma64, {56, 1, NumericPolicy{}});
  CHECK(base.grand_bound == 56);
  for (int w : {4, 8}) {
    auto r = enumerate_case2(kGamma64, {56, w, NumericPolicy{}});
    REQUIRE(r.verdicts.size() == base.verdicts.size());
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) CHECK(dump(r.verdicts[i]) == dump(base.verdicts[i]));
    CHECK(r.exceptional_pairs == base.exceptional_pairs);
    CHECK(r.examined == base.examined);
    CHECK(r.grand_bound == base.grand_bound);
  }
  for (const auto& v : base.verdicts) {
    if (v.N_B) CHECK(*v.N_B % v.base_degree == 0);
    if (v.N_A) CHECK(*v.N_A % v.base_degree == 0);
  }
}

TEST_CASE("verdicts are unchanged at 200 bits") {
  for (const auto* p : {&kGamma46}) {
    auto lo = enumerate_case1(*p, {99, 1, NumericPolicy{}});
    auto hi = enumerate_case1(*p, {99, 1, NumericPolicy{200}});
    REQUIRE(lo.verdicts.size() == hi.verdicts.size());
    for (std::size_t i = 0; i < lo.verdicts.size(); ++i) CHECK(dump(lo.verdicts[i]) == dump(hi.verdicts[i]));
    CHECK(lo.constants.threshold_start == hi.constants.threshold_start);
    CHECK(lo.constants.threshold_end == hi.constants.threshold_end);
  }
  auto lo = enumerate_case2(kGamma64, {56, 1, NumericPolicy{}});
  auto hi = enumerate_case2(kGamma64, {56, 1, NumericPolicy{200}});
  REQUIRE(lo.verdicts.size() == hi.verdicts.size());
  for (std::size_t i = 0; i < lo.verdicts.size(); ++i) CHECK(dump(lo.verdicts[i]) == dump(hi.verdicts[i]));
  CHECK(lo.examined == hi.examined);

  std::mt19937_64 rng(2000);
  std::uniform_int_distribution<std::int64_t> sd(6, 400), kd(6, 6000);
  for (int i = 0; i < 300; ++i) {
    std::int64_t s = sd(rng), k = std::max(s, kd(rng));
    auto a = case2_methodB(k, s, kGamma15);
    auto b = case2_methodB(k, s, kGamma15, NumericPolicy{200});
    if (a.exceptional || a.N_B.value_or(0) > 909) {
      apply_methodA(a, kGamma15, NumericPolicy{});
      apply_methodA(b, kGamma15, NumericPolicy{200});
    }
    CHECK(dump(a) == dump(b));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CaseParams({Rational(-1), Rational(2), Rational(1), Rational(5), 3}).validate(), DomainError);
  CHECK_THROWS_AS(CaseParams({Rational(1), Rational(2), Rational(5), Rational(1), 3}).validate(), DomainError);
  CHECK_THROWS_AS(CaseParams({Rational(0), Rational(0), Rational(1), Rational(5), 3}).validate(), DomainError);
  CHECK_THROWS_AS(case1_methodB(2, kGamma46), DomainError);
  CHECK_THROWS_AS(case2_methodB(7, 607, kGamma15), DomainError);
}

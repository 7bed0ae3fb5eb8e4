#include "reflbound/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace reflbound::bounds {

namespace {

using numthy::Pair;
using numthy::Single;

template <class Arith>
typename Arith::Real half_log(const Arith& ar, const Slope& sl) {
  auto r = ar.ln(sl.T) / std::int64_t{2};
  for (const auto& t : sl.terms) {
    if (t.g > 1) r -= ar.ln(static_cast<std::int64_t>(t.g)) / static_cast<std::int64_t>(t.phi);
  }
  return r;
}

template <class Arith>
typename Arith::Real ln_sin_pi_over(const Arith& ar, std::int64_t l) {
  using std::log;
  using std::sin;
  return log(sin(ar.pi() / l));
}

LogRatioTerm term_of(std::int64_t l) {
  auto u = static_cast<std::uint64_t>(l);
  auto f = numthy::factorize(u);
  return {f.size() == 1 ? f[0].prime : 1, numthy::euler_phi(f)};
}

Rational max6(const CaseParams& p) {
  Rational m = p.a2;
  for (const Rational& c : {p.b2, p.a2 - p.b1, p.a1, -p.b1, p.b2 + p.a1}) m = std::max(m, c);
  return m;
}

template <class J>
bool stage_holds_t(J& j, CaseKind kind, std::int64_t X, const Slope& slope, const CaseParams& p) {
  using std::log;
  const auto& ar = j.ar();
  auto d = half_log(ar, slope);
  auto C = log(log(ar.integer(6))) / std::int64_t{3};
  auto x = ar.integer(X);
  auto lnx = log(x);
  auto lhs = C / std::int64_t{2} * d * x;
  auto half_ln_ba = ar.ln(p.b() / p.a()) / std::int64_t{2};
  auto lnpi = log(ar.pi());
  auto inner = kind == CaseKind::Single ? lnx + half_ln_ba - lnpi
                                        : std::int64_t{2} * lnx + half_ln_ba - std::int64_t{2} * lnpi;
  return j.ge(lhs, inner * log(lnx), "stage inequality");
}

// Least n ≥ 1 with n·M·lnInvR − M·ln(n+1) − lnB ≥ lnS.  The left side is
// convex in n, so the failing set is an interval starting at 1.
template <class J, class Real>
std::int64_t fekete_t(J& j, std::int64_t M, const Real& lnB, const Real& lnInvR, const Real& lnS) {
  using std::log;
  const auto& ar = j.ar();
  constexpr std::int64_t kCap = 1'000'000'000'000'000;
  if (!(to_double(lnInvR) > 0)) throw InapplicableError("Fekete inequality needs R < 1");
  auto ok = [&](std::int64_t n) {
    auto lhs = ar.integer(n) * ar.integer(M) * lnInvR - ar.integer(M) * log(ar.integer(n + 1)) - lnB;
    return j.ge(lhs, lnS, "Fekete inequality");
  };
  if (ok(1)) return 1;
  std::int64_t lo = 1;
  double hint = std::floor(1.0 / to_double(lnInvR));
  std::int64_t hi = std::max<std::int64_t>(2, hint < 1e15 ? static_cast<std::int64_t>(hint) : 2);
  while (!ok(hi)) {
    lo = hi;
    if (hi > kCap / (2 * M)) throw InfeasibleError("Fekete search exceeded its cap");
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi > 1 && ok(hi - 1)) throw std::logic_error("Fekete minimality check failed");
  return hi;
}

template <class Real>
struct FeketeReal {
  std::int64_t M;
  Real lnB;
  Real lnInvR;
  Real lnS;
};

template <class Arith>
FeketeReal<typename Arith::Real> case1_fekete_t(const Arith& ar, std::int64_t l, const CaseParams& p) {
  using std::exp;
  using std::log;
  auto f = numthy::factorize(static_cast<std::uint64_t>(l));
  auto phi = static_cast<std::int64_t>(numthy::euler_phi(f));
  std::int64_t M = phi / 2;
  Rational sum = p.a1 + p.a2;
  Slope sl{Rational(16) / sum, {term_of(l)}};
  auto lnInvR = ar.integer(M) * half_log(ar, sl);
  auto lnB = ar.ln(2) + numthy::ln_disc_Fl_t(ar, f) / std::int64_t{2};
  auto lnS = log(ar.integer(2) * exp(ar.integer(1))) + ar.ln(max6(p) / sum) -
             std::int64_t{2} * ln_sin_pi_over(ar, l);
  return {M, lnB, lnInvR, lnS};
}

template <class Arith>
FeketeReal<typename Arith::Real> case2_fekete_t(const Arith& ar, std::int64_t k, std::int64_t s,
                                                const CaseParams& p) {
  using std::exp;
  using std::log;
  auto M = static_cast<std::int64_t>(numthy::degree_Fks(k, s));
  Rational sum = p.a1 + p.a2;
  Slope sl{Rational(64) / sum, {term_of(k), term_of(s)}};
  auto lnInvR = ar.integer(M) * half_log(ar, sl);
  auto lnB = ar.ln(2) + numthy::ln_disc_Fks_t(ar, k, s) / std::int64_t{2};
  auto lnS = log(ar.integer(2) * exp(ar.integer(1))) + ar.ln(max6(p) / sum) -
             std::int64_t{2} * ln_sin_pi_over(ar, s) - std::int64_t{2} * ln_sin_pi_over(ar, k);
  return {M, lnB, lnInvR, lnS};
}

void require_methodA_data(const CaseParams& p) {
  if (p.a1 + p.a2 <= 0) throw InapplicableError("Method A needs a1 + a2 > 0");
  if (max6(p) <= 0) throw InapplicableError("Method A needs a positive S");
}

// Prime powers ≥ thr with the largest ln γ / φ come from two places: all
// prime powers in [thr, 2 thr], and for each prime p < thr its smallest
// power ≥ thr.  Anything else is dominated by one of these.
std::int64_t best_prime_power_at_least(std::int64_t thr) {
  std::vector<std::int64_t> cands;
  for (std::int64_t n = thr; n <= 2 * thr; ++n) {
    if (numthy::is_prime_power(static_cast<std::uint64_t>(n))) cands.push_back(n);
  }
  for (std::int64_t p = 2; p < thr; ++p) {
    if (!numthy::is_prime(static_cast<std::uint64_t>(p))) continue;
    std::int64_t q = p;
    while (q < thr) q *= p;
    cands.push_back(q);
  }
  std::int64_t best = 0;
  double best_t = -1;
  for (std::int64_t c : cands) {
    auto t = term_of(c);
    double v = std::log(static_cast<double>(t.g)) / static_cast<double>(t.phi);
    if (v > best_t || (v == best_t && c < best)) {
      best_t = v;
      best = c;
    }
  }
  return best;
}

void fill_methodA(CandidateVerdict& v, bool applicable, std::int64_t n0) {
  v.methodA_attempted = true;
  v.methodA_applicable = applicable;
  if (applicable) {
    v.n0_A = n0;
    v.N_A = n0 * v.base_degree;
  }
}

}  // namespace

void CaseParams::validate() const {
  if (a1 < 0 || a2 < 0) throw DomainError("CaseParams: a1 and a2 must be nonnegative");
  if (a() <= 0) throw DomainError("CaseParams: a = max(a1,a2) must be positive");
  if (!(b1 < b2)) throw DomainError("CaseParams: b1 < b2 required");
  if (a() > b()) throw DomainError("CaseParams: a <= b required");
  if (s0 < 3) throw DomainError("CaseParams: s0 >= 3 required");
}

std::vector<std::string> CaseParams::flags() const {
  std::vector<std::string> out;
  if (a() >= 4) out.emplace_back("case1: a >= 4, every l is exceptional for Method B");
  if (a() >= 16) out.emplace_back("case2: a >= 16, every pair is exceptional for Method B");
  return out;
}

void CandidateVerdict::settle() {
  final_N.reset();
  if (methodB_holds.value_or(false) && N_B) final_N = *N_B;
  if (N_A) final_N = final_N ? std::min(*final_N, *N_A) : *N_A;
}

double stage_C() { return std::log(std::log(6.0)) / 3.0; }

bool stage_inequality_holds(CaseKind kind, std::int64_t X, const Slope& slope, const CaseParams& params,
                            const NumericPolicy& policy) {
  if (X <= 3) throw DomainError("stage inequality needs X > 3");
  return policy.run([&](auto& j) { return stage_holds_t(j, kind, X, slope, params); });
}

std::int64_t minimal_stage_threshold(CaseKind kind, const Slope& slope, const CaseParams& params,
                                     std::int64_t from, const NumericPolicy& policy) {
  if (!(slope.value() > 0)) throw InapplicableError("stage threshold needs a positive slope");
  for (std::int64_t X = std::max<std::int64_t>(from, 4); X < 1'000'000'000; ++X) {
    if (stage_inequality_holds(kind, X, slope, params, policy) &&
        stage_inequality_holds(kind, 2 * X, slope, params, policy) &&
        stage_inequality_holds(kind, 10 * X, slope, params, policy)) {
      return X;
    }
  }
  throw InfeasibleError("no stage threshold below 1e9");
}

double fekete_gap(const FeketeInputs& in, std::int64_t n) {
  auto M = static_cast<double>(in.M);
  return static_cast<double>(n) * M * in.lnInvR - M * std::log(static_cast<double>(n + 1)) - in.lnB.value -
         in.lnS;
}

std::int64_t fekete_min_n0(const FeketeInputs& in, const NumericPolicy& policy) {
  if (in.M < 1) throw DomainError("Fekete inputs need M >= 1");
  if (!(in.lnInvR > 0)) throw InapplicableError("Fekete inequality needs R < 1");
  return policy.run([&](auto& j) {
    const auto& ar = j.ar();
    return fekete_t(j, in.M, ar.from_double(in.lnB.value), ar.from_double(in.lnInvR), ar.from_double(in.lnS));
  });
}

bool case1_is_exceptional(std::int64_t l, const Rational& a) {
  numthy::detail::require_index(l, "case1_is_exceptional");
  if (a <= 0) throw DomainError("case1_is_exceptional: a must be positive");
  return hybrid_half_log_sign(Rational(4) / a, {term_of(l)}) <= 0;
}

bool case2_is_exceptional_l(std::int64_t l, const Rational& a) {
  numthy::detail::require_index(l, "case2_is_exceptional_l");
  if (a <= 0) throw DomainError("case2_is_exceptional_l: a must be positive");
  return hybrid_half_log_sign(Rational(16) / a, {term_of(l)}) <= 0;
}

bool case2_is_exceptional_pair(std::int64_t k, std::int64_t s, const Rational& a) {
  numthy::detail::require_index(s, "case2_is_exceptional_pair");
  if (k < s) throw DomainError("case2_is_exceptional_pair: k >= s required");
  if (case2_is_exceptional_l(k, a) || case2_is_exceptional_l(s, a)) {
    throw DomainError("case2_is_exceptional_pair: k and s must be non-exceptional");
  }
  return hybrid_half_log_sign(Rational(16) / a, {term_of(k), term_of(s)}) <= 0;
}

CandidateVerdict case1_methodB(std::int64_t l, const CaseParams& params, const NumericPolicy& policy) {
  numthy::detail::require_index(l, "case1_methodB");
  params.validate();
  CandidateVerdict v;
  v.index = Single{l};
  auto term = term_of(l);
  v.base_degree = static_cast<std::int64_t>(term.phi / 2);
  v.exceptional = case1_is_exceptional(l, params.a());
  if (v.exceptional) return v;

  Slope sl{Rational(4) / params.a(), {term}};
  std::int64_t M = v.base_degree;
  auto [holds, n0] = policy.run([&](auto& j) {
    const auto& ar = j.ar();
    auto MX = ar.integer(M) * half_log(ar, sl);
    auto Y = ar.ln(params.b() / params.a()) / std::int64_t{2} - ln_sin_pi_over(ar, l);
    bool h = j.lt(MX, Y, "Method B inequality");
    std::int64_t n = h ? j.floor_div(Y, MX, "Method B quotient") : 0;
    return std::pair<bool, std::int64_t>{h, n};
  });
  v.methodB_holds = holds;
  if (holds) {
    v.n0_B = n0;
    v.N_B = n0 * M;
  }
  v.settle();
  return v;
}

CandidateVerdict case2_methodB(std::int64_t k, std::int64_t s, const CaseParams& params,
                               const NumericPolicy& policy) {
  numthy::detail::require_index(s, "case2_methodB");
  if (k < s) throw DomainError("case2_methodB: k >= s required");
  params.validate();
  if (s < params.s0) throw DomainError("case2_methodB: s >= s0 required");
  CandidateVerdict v;
  v.index = Pair{k, s};
  v.base_degree = static_cast<std::int64_t>(numthy::degree_Fks(k, s));
  Rational a = params.a();
  if (case2_is_exceptional_l(k, a) || case2_is_exceptional_l(s, a)) {
    v.exceptional = true;
    return v;
  }
  v.exceptional = case2_is_exceptional_pair(k, s, a);
  if (v.exceptional) return v;

  Slope sl{Rational(16) / a, {term_of(k), term_of(s)}};
  std::int64_t M = v.base_degree;
  auto [holds, n0] = policy.run([&](auto& j) {
    const auto& ar = j.ar();
    auto MX = ar.integer(M) * half_log(ar, sl);
    auto Y = ar.ln(params.b() / a) / std::int64_t{2} - ln_sin_pi_over(ar, k) - ln_sin_pi_over(ar, s);
    bool h = j.lt(MX, Y, "Method B inequality");
    std::int64_t n = h ? j.floor_div(Y, MX, "Method B quotient") : 0;
    return std::pair<bool, std::int64_t>{h, n};
  });
  v.methodB_holds = holds;
  if (holds) {
    v.n0_B = n0;
    v.N_B = n0 * M;
  }
  v.settle();
  return v;
}

FeketeInputs case1_fekete_inputs(std::int64_t l, const CaseParams& params) {
  numthy::detail::require_index(l, "case1_fekete_inputs");
  require_methodA_data(params);
  auto r = case1_fekete_t(DoubleArith{}, l, params);
  if (hybrid_half_log_sign(Rational(16) / (params.a1 + params.a2), {term_of(l)}) <= 0) {
    throw InapplicableError("Method A: R >= 1 for l=" + std::to_string(l));
  }
  return {r.M, {r.lnB, 53}, r.lnInvR, r.lnS};
}

FeketeInputs case2_fekete_inputs(std::int64_t k, std::int64_t s, const CaseParams& params) {
  numthy::detail::require_index(s, "case2_fekete_inputs");
  if (k < s) throw DomainError("case2_fekete_inputs: k >= s required");
  require_methodA_data(params);
  auto r = case2_fekete_t(DoubleArith{}, k, s, params);
  if (hybrid_half_log_sign(Rational(64) / (params.a1 + params.a2), {term_of(k), term_of(s)}) <= 0) {
    throw InapplicableError("Method A: R >= 1 for (" + std::to_string(k) + "," + std::to_string(s) + ")");
  }
  return {r.M, {r.lnB, 53}, r.lnInvR, r.lnS};
}

void apply_methodA(CandidateVerdict& v, const CaseParams& params, const NumericPolicy& policy) {
  bool applicable = params.a1 + params.a2 > 0 && max6(params) > 0;
  Rational sum = params.a1 + params.a2;
  if (const auto* one = std::get_if<Single>(&v.index)) {
    std::int64_t l = one->l;
    applicable = applicable && hybrid_half_log_sign(Rational(16) / sum, {term_of(l)}) > 0;
    std::int64_t n0 = 0;
    if (applicable) {
      n0 = policy.run([&](auto& j) {
        auto r = case1_fekete_t(j.ar(), l, params);
        return fekete_t(j, r.M, r.lnB, r.lnInvR, r.lnS);
      });
    }
    fill_methodA(v, applicable, n0);
  } else {
    auto [k, s] = std::get<Pair>(v.index);
    applicable = applicable && hybrid_half_log_sign(Rational(64) / sum, {term_of(k), term_of(s)}) > 0;
    std::int64_t n0 = 0;
    if (applicable) {
      n0 = policy.run([&](auto& j) {
        auto r = case2_fekete_t(j.ar(), k, s, params);
        return fekete_t(j, r.M, r.lnB, r.lnInvR, r.lnS);
      });
    }
    fill_methodA(v, applicable, n0);
  }
  v.settle();
}

CandidateVerdict case1_methodA(std::int64_t l, const CaseParams& params, const NumericPolicy& policy) {
  numthy::detail::require_index(l, "case1_methodA");
  params.validate();
  CandidateVerdict v;
  v.index = Single{l};
  v.base_degree = static_cast<std::int64_t>(term_of(l).phi / 2);
  v.exceptional = case1_is_exceptional(l, params.a());
  apply_methodA(v, params, policy);
  return v;
}

CandidateVerdict case2_methodA(std::int64_t k, std::int64_t s, const CaseParams& params,
                               const NumericPolicy& policy) {
  numthy::detail::require_index(s, "case2_methodA");
  if (k < s) throw DomainError("case2_methodA: k >= s required");
  params.validate();
  CandidateVerdict v;
  v.index = Pair{k, s};
  v.base_degree = static_cast<std::int64_t>(numthy::degree_Fks(k, s));
  Rational a = params.a();
  v.exceptional = case2_is_exceptional_l(k, a) || case2_is_exceptional_l(s, a) ||
                  case2_is_exceptional_pair(k, s, a);
  apply_methodA(v, params, policy);
  return v;
}

StageConstants case1_stage_constants(const CaseParams& params, const NumericPolicy& policy) {
  params.validate();
  if (params.a() >= 4) throw InapplicableError("Case 1 stage constants need a < 4");
  StageConstants c;
  c.C = stage_C();
  c.start_slope = Slope{Rational(4) / params.a(), {}};
  c.threshold_start = minimal_stage_threshold(CaseKind::Single, c.start_slope, params, 4, policy);
  std::int64_t l = best_prime_power_at_least(c.threshold_start);
  c.delta_slope = Slope{c.start_slope.T, {term_of(l)}};
  if (hybrid_half_log_sign(c.delta_slope.T, c.delta_slope.terms) <= 0) {
    throw DomainError("Delta is not positive at l=" + std::to_string(l));
  }
  c.delta = c.delta_slope.value();
  c.delta_at = Single{l};
  c.threshold_end = minimal_stage_threshold(CaseKind::Single, c.delta_slope, params, c.threshold_start, policy);
  return c;
}

StageConstants case2_stage_constants(const CaseParams& params, const NumericPolicy& policy) {
  params.validate();
  Rational a = params.a();
  if (a >= 16) throw InapplicableError("Case 2 stage constants need a < 16");
  StageConstants c;
  c.C = stage_C();
  c.start_slope = Slope{Rational(16) / a, {}};
  std::int64_t K0 = minimal_stage_threshold(CaseKind::Pair, c.start_slope, params, 4, policy);
  c.threshold_start = K0;

  std::int64_t k = best_prime_power_at_least(K0);
  auto tk = term_of(k);
  auto tval = [](const LogRatioTerm& t) {
    return std::log(static_cast<double>(t.g)) / static_cast<double>(t.phi);
  };
  // s ranges over [s0, K0) without exceptional values, or s = k itself.
  std::int64_t s = k;
  double best = tval(tk);
  for (std::int64_t cand = params.s0; cand < K0; ++cand) {
    if (case2_is_exceptional_l(cand, a)) continue;
    double v = tval(term_of(cand));
    if (v > best) {
      best = v;
      s = cand;
    }
  }
  c.delta_slope = Slope{c.start_slope.T, {tk, term_of(s)}};
  if (hybrid_half_log_sign(c.delta_slope.T, c.delta_slope.terms) <= 0) {
    throw DomainError("Delta1 is not positive at (" + std::to_string(k) + "," + std::to_string(s) + ")");
  }
  c.delta = c.delta_slope.value();
  c.delta_at = Pair{k, s};
  c.threshold_end = minimal_stage_threshold(CaseKind::Pair, c.delta_slope, params, K0, policy);
  return c;
}

void settle_grand_bound(EnumerationResult& r) {
  r.grand_bound.reset();
  r.achiever.reset();
  for (const auto& v : r.verdicts) {
    if (v.final_N && (!r.grand_bound || *v.final_N > *r.grand_bound)) {
      r.grand_bound = v.final_N;
      r.achiever = v.index;
    }
  }
}

EnumerationResult enumerate_case1(const CaseParams& params, const EnumerationOptions& options) {
  EnumerationResult out;
  out.constants = case1_stage_constants(params, options.policy);
  const std::int64_t L0 = out.constants.threshold_start;
  const std::int64_t L1 = out.constants.threshold_end;
  for (std::int64_t l = 3; l < L1; ++l) {
    if (l >= L0 && !numthy::is_prime_power(static_cast<std::uint64_t>(l))) continue;
    ++out.examined;
    CandidateVerdict v = case1_methodB(l, params, options.policy);
    if (v.exceptional) {
      out.exceptional_l.push_back(l);
      apply_methodA(v, params, options.policy);
      if (!v.final_N) out.unresolved.push_back(v.index);
    } else if (*v.methodB_holds) {
      if (*v.N_B > options.target) apply_methodA(v, params, options.policy);
    } else {
      ++out.rejected;
    }
    if (v.final_N && *v.final_N > options.target) out.over_target.push_back(v.index);
    out.verdicts.push_back(std::move(v));
  }
  settle_grand_bound(out);
  return out;
}

namespace {

struct PairTables {
  std::vector<std::int64_t> phi;
  std::vector<std::uint64_t> gam;
  std::vector<double> t;
  std::vector<double> lnsin;
  std::vector<char> exceptional;
};

PairTables build_pair_tables(std::int64_t limit, const Rational& a) {
  PairTables tb;
  auto n = static_cast<std::size_t>(limit);
  tb.phi.assign(n, 0);
  tb.gam.assign(n, 1);
  tb.t.assign(n, 0.0);
  tb.lnsin.assign(n, 0.0);
  tb.exceptional.assign(n, 0);
  tb.phi[1] = tb.phi[2] = 1;  // gcd values
  for (std::int64_t l = 3; l < limit; ++l) {
    auto term = term_of(l);
    auto i = static_cast<std::size_t>(l);
    tb.phi[i] = static_cast<std::int64_t>(term.phi);
    tb.gam[i] = term.g;
    tb.t[i] = std::log(static_cast<double>(term.g)) / static_cast<double>(term.phi);
    tb.lnsin[i] = std::log(std::sin(3.141592653589793238462643383279502884 / static_cast<double>(l)));
    tb.exceptional[i] = case2_is_exceptional_l(l, a) ? 1 : 0;
  }
  return tb;
}

// The same tables in MPFR, for runs that must not decide anything in doubles.
struct BigPairTables {
  std::vector<BigFloat> t;
  std::vector<BigFloat> lnsin;
};

BigPairTables build_big_tables(std::int64_t limit, int bits) {
  BigArith ar(bits);
  BigPairTables tb;
  tb.t.reserve(static_cast<std::size_t>(limit));
  tb.lnsin.reserve(static_cast<std::size_t>(limit));
  for (std::int64_t l = 0; l < limit; ++l) {
    if (l < 3) {
      tb.t.emplace_back(bits);
      tb.lnsin.emplace_back(bits);
      continue;
    }
    tb.t.push_back(half_log(ar, Slope{Rational(1), {term_of(l)}}) * std::int64_t{-1});
    tb.lnsin.push_back(ln_sin_pi_over(ar, l));
  }
  return tb;
}

struct WorkerOutput {
  std::vector<CandidateVerdict> verdicts;
  std::int64_t examined = 0;
  std::int64_t rejected = 0;
  std::int64_t skipped = 0;
};

}  // namespace

EnumerationResult enumerate_case2(const CaseParams& params, const EnumerationOptions& options) {
  EnumerationResult out;
  out.constants = case2_stage_constants(params, options.policy);
  const std::int64_t K0 = out.constants.threshold_start;
  const std::int64_t K1 = out.constants.threshold_end;
  const std::int64_t s0 = params.s0;
  const Rational a = params.a();
  const PairTables tb = build_pair_tables(K1, a);

  for (std::int64_t l = 3; l < K1; ++l) {
    if (tb.exceptional[static_cast<std::size_t>(l)]) out.exceptional_l.push_back(l);
  }

  const double h = out.constants.start_slope.value();
  const double y_base = 0.5 * std::log(to_double(params.b() / a));
  const bool fast = !options.policy.high_precision();
  const int bits = options.policy.bits();
  const BigPairTables big = fast ? BigPairTables{} : build_big_tables(K1, bits);
  const BigFloat big_h = half_log(BigArith(bits), out.constants.start_slope);
  const BigFloat big_y = BigArith(bits).ln(params.b() / a) / std::int64_t{2};
  const double big_gate = abort_margin(bits);

  auto full_verdict = [&](std::int64_t k, std::int64_t s) {
    CandidateVerdict v = case2_methodB(k, s, params, options.policy);
    if (v.exceptional || (v.N_B && *v.N_B > options.target)) apply_methodA(v, params, options.policy);
    return v;
  };

  auto process_k = [&](std::int64_t k, WorkerOutput& w) {
    const auto ik = static_cast<std::size_t>(k);
    const bool k_pp = tb.gam[ik] > 1;
    BigFloat X_big(bits), Y_big(bits), MX_big(bits);
    for (std::int64_t s = s0; s <= k; ++s) {
      const auto is = static_cast<std::size_t>(s);
      if (k >= K0 && !k_pp && tb.gam[is] == 1) continue;
      if (tb.exceptional[ik] || tb.exceptional[is]) {
        ++w.skipped;
        continue;
      }
      ++w.examined;
      if (fast) {
        // Clear rejections are settled here; everything else takes the full path.
        const double X = h - tb.t[ik] - tb.t[is];
        if (X > 1e-9) {
          const double Y = y_base - tb.lnsin[ik] - tb.lnsin[is];
          const double slack = 1e-9 * std::max(1.0, std::abs(Y));
          // [k,s] ≥ k gives M ≥ φ(k)/4 without a gcd.
          if (static_cast<double>(tb.phi[ik]) * 0.25 * X - Y > slack) {
            ++w.rejected;
            continue;
          }
          const std::int64_t g = std::gcd(k, s);
          // φ([k,s])·φ(gcd) = φ(k)·φ(s).
          const std::int64_t M = tb.phi[ik] * tb.phi[is] / tb.phi[static_cast<std::size_t>(g)] / (g <= 2 ? 4 : 2);
          if (static_cast<double>(M) * X - Y > slack) {
            ++w.rejected;
            continue;
          }
        }
      } else {
        mpfr_sub(X_big.get(), big_h.get(), big.t[ik].get(), MPFR_RNDN);
        mpfr_sub(X_big.get(), X_big.get(), big.t[is].get(), MPFR_RNDN);
        if (X_big.to_double() > big_gate) {
          mpfr_sub(Y_big.get(), big_y.get(), big.lnsin[ik].get(), MPFR_RNDN);
          mpfr_sub(Y_big.get(), Y_big.get(), big.lnsin[is].get(), MPFR_RNDN);
          const std::int64_t g = std::gcd(k, s);
          const std::int64_t M = tb.phi[ik] * tb.phi[is] / tb.phi[static_cast<std::size_t>(g)] / (g <= 2 ? 4 : 2);
          mpfr_mul_si(MX_big.get(), X_big.get(), static_cast<long>(M), MPFR_RNDN);
          mpfr_sub(MX_big.get(), MX_big.get(), Y_big.get(), MPFR_RNDN);
          if (MX_big.to_double() > big_gate * std::max(1.0, std::abs(Y_big.to_double()))) {
            ++w.rejected;
            continue;
          }
        }
      }
      CandidateVerdict v = full_verdict(k, s);
      if (!v.exceptional && !v.methodB_holds.value_or(false)) {
        ++w.rejected;
        continue;
      }
      w.verdicts.push_back(std::move(v));
    }
  };

  const int workers = std::max(1, options.workers);
  constexpr std::int64_t kChunk = 32;
  std::atomic<std::int64_t> next{s0};
  std::vector<WorkerOutput> outputs(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto run_worker = [&](int id) {
    try {
      auto& w = outputs[static_cast<std::size_t>(id)];
      for (;;) {
        std::int64_t start = next.fetch_add(kChunk);
        if (start >= K1) break;
        for (std::int64_t k = start; k < std::min(start + kChunk, K1); ++k) process_k(k, w);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(id)] = std::current_exception();
      next.store(K1);
    }
  };
  if (workers == 1 || K1 - s0 < kChunk) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(run_worker, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (auto& w : outputs) {
    out.examined += w.examined;
    out.rejected += w.rejected;
    out.skipped_exceptional_l += w.skipped;
    std::move(w.verdicts.begin(), w.verdicts.end(), std::back_inserter(out.verdicts));
  }
  std::sort(out.verdicts.begin(), out.verdicts.end(), [](const CandidateVerdict& x, const CandidateVerdict& y) {
    const auto& p = std::get<Pair>(x.index);
    const auto& q = std::get<Pair>(y.index);
    return std::pair(p.s, p.k) < std::pair(q.s, q.k);
  });
  for (const auto& v : out.verdicts) {
    const auto& p = std::get<Pair>(v.index);
    if (v.exceptional) out.exceptional_pairs.emplace_back(p.k, p.s);
    if (v.exceptional && !v.final_N) out.unresolved.push_back(v.index);
    if (v.final_N && *v.final_N > options.target) out.over_target.push_back(v.index);
  }
  settle_grand_bound(out);
  return out;
}

}  // namespace reflbound::bounds

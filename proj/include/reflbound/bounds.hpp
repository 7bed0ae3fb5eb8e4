#pragma once

// Degree bounds for totally real fields K ⊇ F_l (Case 1) or K ⊇ F_{k,s}
// (Case 2) generated by an algebraic integer with constrained conjugates.
//
// Method B bounds [K:Q] through the norm of α; Method A through the Fekete
// inequality  n·M·ln(1/R) − M·ln(n+1) − ln B ≥ ln S.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflbound/exact.hpp"
#include "reflbound/numeric_policy.hpp"
#include "reflbound/numthy.hpp"
#include "reflbound/rational.hpp"

namespace reflbound::bounds {

using numthy::FieldIndex;
using numthy::LogScalar;

struct CaseParams {
  Rational a1{0};
  Rational a2{0};
  Rational b1{0};
  Rational b2{0};
  std::int64_t s0 = 3;

  Rational a() const { return a1 > a2 ? a1 : a2; }
  Rational b() const { return abs(b1) > abs(b2) ? abs(b1) : abs(b2); }

  /// Throws DomainError unless a1, a2 ≥ 0, a > 0, b1 < b2, a ≤ b, s0 ≥ 3.
  void validate() const;
  /// Non-fatal warnings, e.g. "case1: a >= 4, Method B never applies".
  std::vector<std::string> flags() const;
};

struct FeketeInputs {
  std::int64_t M = 1;
  LogScalar lnB;
  double lnInvR = 0.0;
  double lnS = 0.0;
};

struct CandidateVerdict {
  FieldIndex index = numthy::Single{3};
  std::int64_t base_degree = 1;
  bool exceptional = false;

  std::optional<bool> methodB_holds;
  std::optional<std::int64_t> n0_B;
  std::optional<std::int64_t> N_B;

  bool methodA_attempted = false;
  std::optional<bool> methodA_applicable;
  std::optional<std::int64_t> n0_A;
  std::optional<std::int64_t> N_A;

  std::optional<std::int64_t> final_N;

  /// Sets final_N to the smaller of N_B and N_A when present.
  void settle();
};

/// C = φ(6)·ln(ln 6)/6.
double stage_C();

/// ½·ln(T) − Σ ln(γ_i)/φ_i, the common shape of every slope in both cases.
struct Slope {
  Rational T;
  std::vector<LogRatioTerm> terms;
  double value() const { return half_log_margin(T, terms); }
};

struct StageConstants {
  double C = 0.0;
  std::int64_t threshold_start = 0;  // L0 or K0
  double delta = 0.0;                // Δ(a) or Δ1(a)
  std::int64_t threshold_end = 0;    // L1 or K1
  Slope start_slope;                 // ln(2/√a) or ln(4/√a)
  Slope delta_slope;
  /// Where Δ is attained: l for Case 1, (k,s) for Case 2.
  FieldIndex delta_at = numthy::Single{3};
};

enum class CaseKind { Single, Pair };

/// Does the threshold inequality hold at X for the given slope?
bool stage_inequality_holds(CaseKind kind, std::int64_t X, const Slope& slope, const CaseParams& params,
                            const NumericPolicy& policy = NumericPolicy{});
/// Least integer X ≥ from (and > 3) whose inequality holds at X, 2X and 10X.
std::int64_t minimal_stage_threshold(CaseKind kind, const Slope& slope, const CaseParams& params,
                                     std::int64_t from, const NumericPolicy& policy = NumericPolicy{});

std::int64_t fekete_min_n0(const FeketeInputs& inputs, const NumericPolicy& policy = NumericPolicy{});

/// Value of n·M·lnInvR − M·ln(n+1) − lnB − lnS in double precision.
double fekete_gap(const FeketeInputs& inputs, std::int64_t n);

bool case1_is_exceptional(std::int64_t l, const Rational& a);
bool case2_is_exceptional_l(std::int64_t l, const Rational& a);
/// Requires k ≥ s ≥ 3 with k and s individually non-exceptional.
bool case2_is_exceptional_pair(std::int64_t k, std::int64_t s, const Rational& a);

CandidateVerdict case1_methodB(std::int64_t l, const CaseParams& params,
                               const NumericPolicy& policy = NumericPolicy{});
CandidateVerdict case2_methodB(std::int64_t k, std::int64_t s, const CaseParams& params,
                               const NumericPolicy& policy = NumericPolicy{});

/// Method A inputs in double precision.  Throws InapplicableError when R ≥ 1.
FeketeInputs case1_fekete_inputs(std::int64_t l, const CaseParams& params);
FeketeInputs case2_fekete_inputs(std::int64_t k, std::int64_t s, const CaseParams& params);

/// Verdicts with only the Method A fields (plus index, degree, exceptionality).
CandidateVerdict case1_methodA(std::int64_t l, const CaseParams& params,
                               const NumericPolicy& policy = NumericPolicy{});
CandidateVerdict case2_methodA(std::int64_t k, std::int64_t s, const CaseParams& params,
                               const NumericPolicy& policy = NumericPolicy{});

/// Applies Method A to `v` in place (fields methodA_*, n0_A, N_A) and settles it.
void apply_methodA(CandidateVerdict& v, const CaseParams& params, const NumericPolicy& policy);

StageConstants case1_stage_constants(const CaseParams& params, const NumericPolicy& policy = NumericPolicy{});
StageConstants case2_stage_constants(const CaseParams& params, const NumericPolicy& policy = NumericPolicy{});

struct EnumerationOptions {
  /// Method A is run when a candidate is exceptional or its N_B exceeds this.
  std::int64_t target = 0;
  int workers = 1;
  NumericPolicy policy{};
};

struct EnumerationResult {
  StageConstants constants;
  /// Case 1: every l examined.  Case 2: exceptional pairs and Method B survivors only.
  std::vector<CandidateVerdict> verdicts;
  std::vector<std::int64_t> exceptional_l;
  std::vector<std::pair<std::int64_t, std::int64_t>> exceptional_pairs;
  /// Exceptional candidates for which Method A gives nothing.
  std::vector<FieldIndex> unresolved;
  /// Candidates whose final bound is still above the target.
  std::vector<FieldIndex> over_target;
  std::int64_t examined = 0;
  std::int64_t rejected = 0;
  /// Case 2 pairs with an exceptional coordinate, left to the caller.
  std::int64_t skipped_exceptional_l = 0;
  std::optional<std::int64_t> grand_bound;
  std::optional<FieldIndex> achiever;
};

EnumerationResult enumerate_case1(const CaseParams& params, const EnumerationOptions& options);
EnumerationResult enumerate_case2(const CaseParams& params, const EnumerationOptions& options);

/// Recomputes grand_bound / achiever from the verdict list (ties: first in list order).
void settle_grand_bound(EnumerationResult& result);

}  // namespace reflbound::bounds

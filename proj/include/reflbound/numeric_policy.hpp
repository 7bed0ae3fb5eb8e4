#pragma once

// Escalating float policy for proof-relevant comparisons.
//
// A computation is written once as a generic callable taking a Judge<Arith>&.
// Every decision it makes goes through the judge, which records the smallest
// relative margin seen.  NumericPolicy::run evaluates the callable in doubles
// first and re-runs it in MPFR when any decision was too close to call.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>

#include "reflbound/bigfloat.hpp"
#include "reflbound/errors.hpp"

namespace reflbound {

inline constexpr double kEscalationMargin = 1e-9;
inline constexpr int kEscalationBits = 160;
inline constexpr int kMaxPrecisionBits = 512;

/// Relative margin below which a result computed at `bits` is not trusted.
inline double abort_margin(int bits) {
  return std::max(1e-30, std::ldexp(1.0, -(bits - 32)));
}

template <class Arith>
class Judge {
 public:
  using Real = typename Arith::Real;

  explicit Judge(Arith ar) : ar_(std::move(ar)) {}

  const Arith& ar() const { return ar_; }
  double margin() const { return margin_; }
  const std::string& closest() const { return closest_; }

  /// lhs >= rhs.
  bool ge(const Real& lhs, const Real& rhs, const char* what = "") {
    Real diff = lhs - rhs;
    record(std::abs(to_double(diff)) / std::max(1.0, std::abs(to_double(rhs))), what);
    return !(diff < ar_.integer(0));
  }
  /// lhs < rhs.
  bool lt(const Real& lhs, const Real& rhs, const char* what = "") { return !ge(lhs, rhs, what); }
  /// x > 0.
  bool positive(const Real& x, const char* what = "") { return !ge(ar_.integer(0), x, what); }

  /// floor(num / den) for den > 0, with the distance to the nearest integer
  /// recorded as a margin.
  std::int64_t floor_div(const Real& num, const Real& den, const char* what = "") {
    Real q = num / den;
    std::int64_t n = floor_to_int64(q);
    Real below = q - ar_.integer(n);
    Real above = ar_.integer(n + 1) - q;
    double gap = std::min(std::abs(to_double(below)), std::abs(to_double(above)));
    record(gap / std::max(1.0, std::abs(to_double(q))), what);
    return n;
  }

  /// Marks a decision that was settled exactly elsewhere.
  void exact() {}

 private:
  void record(double m, const char* what) {
    if (m < margin_) {
      margin_ = m;
      closest_ = what;
    }
  }

  Arith ar_;
  double margin_ = std::numeric_limits<double>::infinity();
  std::string closest_;
};

class NumericPolicy {
 public:
  explicit NumericPolicy(int bits = 53)
      : bits_(std::clamp(bits, 53, kMaxPrecisionBits)),
        escalations_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

  int bits() const { return bits_; }
  bool high_precision() const { return bits_ > 53; }
  std::uint64_t escalations() const { return escalations_->load(); }
  void note_escalation() const { escalations_->fetch_add(1, std::memory_order_relaxed); }

  /// Evaluates f(judge) and returns its result, escalating as needed.
  /// f must return the same type for Judge<DoubleArith>& and Judge<BigArith>&.
  template <class F>
  auto run(F&& f) const {
    if (!high_precision()) {
      Judge<DoubleArith> quick{DoubleArith{}};
      auto result = f(quick);
      if (quick.margin() >= kEscalationMargin) return result;
      note_escalation();
    }
    int bits = high_precision() ? bits_ : std::max(kEscalationBits, bits_);
    Judge<BigArith> slow{BigArith(bits)};
    auto result = f(slow);
    if (slow.margin() < abort_margin(bits)) {
      throw PrecisionFailure("undecidable comparison at " + std::to_string(bits) +
                             " bits (" + slow.closest() + ")");
    }
    return result;
  }

 private:
  int bits_;
  std::shared_ptr<std::atomic<std::uint64_t>> escalations_;
};

}  // namespace reflbound

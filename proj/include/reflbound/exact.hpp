#pragma once

// Exact sign of  ½·ln(T) − Σ ln(g_i)/φ_i  for rational T > 0 and integers
// g_i ≥ 1, φ_i ≥ 1, decided by comparing integer powers.

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "reflbound/rational.hpp"

namespace reflbound {

struct LogRatioTerm {
  std::uint64_t g;    // γ value, ≥ 1
  std::uint64_t phi;  // φ value, ≥ 1
};

/// -1, 0 or +1.  Pure integer arithmetic; cost grows with the exponents.
int exact_half_log_sign(const Rational& T, const std::vector<LogRatioTerm>& terms);

/// Same sign, but settled by the double margin when it is at least 1e-9 and
/// only falls back to integers otherwise.
int hybrid_half_log_sign(const Rational& T, const std::vector<LogRatioTerm>& terms);

/// The double-precision value of ½·ln(T) − Σ ln(g_i)/φ_i.
double half_log_margin(const Rational& T, const std::vector<LogRatioTerm>& terms);

}  // namespace reflbound

#pragma once

// Gram-matrix feasibility systems of the plane quadrilateral and pentagon,
// global extrema of their product objectives, and the α builders.

#include <array>
#include <cstdint>

namespace reflbound::gram {

struct GramQuadPoint {
  double b13 = 0, b14 = 0, b23 = 0, b24 = 0;
};

struct GramPentPoint {
  double c = 0, b13 = 0, b14 = 0, b24 = 0, b25 = 0, b35 = 0;
};

template <class Point>
struct ExtremaResult {
  double min_value = 0;
  double max_value = 0;
  Point argmin{};
  Point argmax{};
  double residual_tol = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
inline constexpr int kDefaultGrid = 50;
inline constexpr int kDefaultRefine = 10000;

/// The 4×4 Gram determinant; zero on the feasible set.
double quad_det4(const GramQuadPoint& p);
double quad_product(const GramQuadPoint& p);
/// Largest violation of the four closure constraints b_ij² + b_kl² ≤ 4 (0 if none).
double quad_closure_violation(const GramQuadPoint& p);
/// |det4| ≤ tol and closure violation ≤ tol.
bool quad_feasible(const GramQuadPoint& p, double tol = 1e-8);

/// Extrema of b13·b14·b23·b24 over the closure of the feasible set.
/// Throws InfeasibleError if nothing feasible is found, DomainError if grid < 50.
ExtremaResult<GramQuadPoint> quad_extrema(int grid = kDefaultGrid, int refine = kDefaultRefine,
                                          std::uint64_t seed = kDefaultSeed);

/// Signed residuals (LHS − RHS) of the five pentagon equations.
std::array<double, 5> pent_residual(const GramPentPoint& p);
double pent_product(const GramPentPoint& p);
double pent_max_residual(const GramPentPoint& p);

ExtremaResult<GramPentPoint> pent_extrema(int grid = kDefaultGrid, int refine = kDefaultRefine,
                                          std::uint64_t seed = kDefaultSeed);

double alpha_gamma15(double a13, double a14, double a23, double a24, int m1, int m3);
double alpha_gamma46(double a13, double a14, double a24, double a25, double a35);
/// Gram determinant of (e, δ1, δ4): 2α − 8 sin²(π/m1).
double tri_det(double alpha, int m1);

}  // namespace reflbound::gram

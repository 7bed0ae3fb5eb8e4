#include "reflbound/gram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "reflbound/errors.hpp"

namespace reflbound::gram {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kClosureTol = 1e-12;
constexpr double kResidualTol = 1e-8;

double sq(double x) { return x * x; }

// Keeps the `cap` best entries under `better`, ties broken by key order.
template <class T>
class TopK {
 public:
  TopK(std::size_t cap, std::function<bool(const T&, const T&)> better) : cap_(cap), better_(std::move(better)) {}
  void offer(T item) {
    items_.push_back(std::move(item));
    if (items_.size() > 4 * cap_) trim();
  }
  std::vector<T> take() {
    trim();
    return items_;
  }

 private:
  void trim() {
    std::sort(items_.begin(), items_.end(), better_);
    if (items_.size() > cap_) items_.resize(cap_);
  }
  std::size_t cap_;
  std::function<bool(const T&, const T&)> better_;
  std::vector<T> items_;
};

// ---------- quadrilateral ----------

auto quad_key(const GramQuadPoint& p) { return std::tuple(p.b13, p.b14, p.b23, p.b24); }

// b24 from the determinant, which is quadratic in b24:
// (b13² − 4)·b24² − 2·b13·b14·b23·b24 + (16 + b14²b23² − 4b13² − 4b14² − 4b23²) = 0.
std::optional<GramQuadPoint> quad_from(double b13, double b14, double b23, int branch) {
  double A = sq(b13) - 4;
  double B = -2 * b13 * b14 * b23;
  double C = 16 + sq(b14) * sq(b23) - 4 * sq(b13) - 4 * sq(b14) - 4 * sq(b23);
  if (std::abs(A) < 1e-14) return std::nullopt;
  double disc = B * B - 4 * A * C;
  if (disc < 0) {
    if (disc < -1e-12) return std::nullopt;
    disc = 0;
  }
  double r = std::sqrt(disc);
  // Cancellation-free pair of roots.
  double q = -0.5 * (B + (B >= 0 ? r : -r));
  double x1 = q / A;
  double x2 = q != 0 ? C / q : x1;
  GramQuadPoint p{b13, b14, b23, branch == 0 ? std::min(x1, x2) : std::max(x1, x2)};
  if (quad_closure_violation(p) > kClosureTol) return std::nullopt;
  return p;
}

struct QuadSeed {
  double x[3];
  int branch;
  double value;
  GramQuadPoint point;
};

// Compass search on (b13, b14, b23) for one root branch; sense = +1 maximizes.
GramQuadPoint quad_refine(const QuadSeed& seed, double sense, double step, int budget) {
  double x[3] = {seed.x[0], seed.x[1], seed.x[2]};
  GramQuadPoint best = seed.point;
  double best_v = sense * quad_product(best);
  for (int it = 0; it < budget && step > 1e-13; ++it) {
    bool moved = false;
    for (int d = 0; d < 3 && !moved; ++d) {
      for (double dir : {1.0, -1.0}) {
        double y[3] = {x[0], x[1], x[2]};
        y[d] += dir * step;
        auto p = quad_from(y[0], y[1], y[2], seed.branch);
        if (!p) continue;
        double v = sense * quad_product(*p);
        if (v > best_v) {
          best_v = v;
          best = *p;
          std::copy(y, y + 3, x);
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

// ---------- pentagon ----------

auto pent_key(const GramPentPoint& p) { return std::tuple(p.c, p.b13, p.b14, p.b24, p.b25, p.b35); }

struct PentBranch {
  int s13;    // sign of b13
  int s25;    // sign of b25
  int croot;  // which root of the c quadratic
};

// eq1, eq2 fix |b13|, |b25|; eq3 is quadratic in c.
std::optional<GramPentPoint> pent_from(const double x[3], const PentBranch& br) {
  double b14 = x[0], b24 = x[1], b35 = x[2];
  if (std::abs(b14) > 2 || std::abs(b24) > 2 || std::abs(b35) > 2) return std::nullopt;
  double q13 = (4 - sq(b14)) * (4 - sq(b35)) / 4;
  double q25 = (4 - sq(b24)) * (4 - sq(b35)) / 4;
  double b13 = br.s13 * std::sqrt(std::max(0.0, q13));
  double b25 = br.s25 * std::sqrt(std::max(0.0, q25));
  double B = 4 * b14 * b24;
  double C = 4 * sq(b14) - (4 - sq(b13)) * (4 - sq(b24));
  double disc = B * B - 16 * C;
  if (disc < 0) return std::nullopt;
  double r = std::sqrt(disc);
  double c = (-B + (br.croot == 0 ? -r : r)) / 8;
  if (std::abs(c) > 2 + kClosureTol) return std::nullopt;
  return GramPentPoint{c, b13, b14, b24, b25, b35};
}

std::optional<std::array<double, 2>> pent_tail(const double x[3], const PentBranch& br) {
  auto p = pent_from(x, br);
  if (!p) return std::nullopt;
  auto r = pent_residual(*p);
  return std::array<double, 2>{r[3], r[4]};
}

// Gauss-Newton onto eq4 = eq5 = 0 with a finite-difference 2×3 Jacobian and
// minimum-norm steps.  Returns false if the iteration leaves the domain.
bool pent_project(double x[3], const PentBranch& br, double tol, int max_iter,
                  std::array<double, 3>* tangent = nullptr) {
  for (int it = 0; it <= max_iter; ++it) {
    auto r = pent_tail(x, br);
    if (!r) return false;
    double J[2][3];
    const double h = 1e-7;
    for (int d = 0; d < 3; ++d) {
      double xp[3] = {x[0], x[1], x[2]};
      double xm[3] = {x[0], x[1], x[2]};
      xp[d] += h;
      xm[d] -= h;
      auto rp = pent_tail(xp, br);
      auto rm = pent_tail(xm, br);
      if (!rp || !rm) return false;
      J[0][d] = ((*rp)[0] - (*rm)[0]) / (2 * h);
      J[1][d] = ((*rp)[1] - (*rm)[1]) / (2 * h);
    }
    bool done = std::max(std::abs((*r)[0]), std::abs((*r)[1])) <= tol;
    if (done || it == max_iter) {
      if (tangent) {
        std::array<double, 3> t = {J[0][1] * J[1][2] - J[0][2] * J[1][1], J[0][2] * J[1][0] - J[0][0] * J[1][2],
                                   J[0][0] * J[1][1] - J[0][1] * J[1][0]};
        double n = std::sqrt(sq(t[0]) + sq(t[1]) + sq(t[2]));
        if (n == 0) return false;
        for (double& v : t) v /= n;
        *tangent = t;
      }
      return done;
    }
    // dx = −Jᵀ (J Jᵀ)⁻¹ r
    double a = 0, b = 0, d = 0;
    for (int k = 0; k < 3; ++k) {
      a += J[0][k] * J[0][k];
      b += J[0][k] * J[1][k];
      d += J[1][k] * J[1][k];
    }
    double det = a * d - b * b;
    if (std::abs(det) < 1e-300) return false;
    double y0 = (d * (*r)[0] - b * (*r)[1]) / det;
    double y1 = (-b * (*r)[0] + a * (*r)[1]) / det;
    for (int k = 0; k < 3; ++k) x[k] -= J[0][k] * y0 + J[1][k] * y1;
  }
  return false;
}

struct PentSeed {
  double x[3];
  PentBranch branch;
  double value;
  GramPentPoint point;
};

// Penalized compass search: sense·product − w·(eq4² + eq5²).
void pent_penalized(double x[3], const PentBranch& br, double sense, double step, int budget) {
  auto score = [&](const double y[3], double w) -> std::optional<double> {
    auto p = pent_from(y, br);
    if (!p) return std::nullopt;
    auto r = pent_residual(*p);
    return sense * pent_product(*p) - w * (sq(r[3]) + sq(r[4]));
  };
  for (double w : {1e3, 1e5, 1e7}) {
    auto best = score(x, w);
    if (!best) return;
    double h = step;
    for (int it = 0; it < budget / 3 && h > 1e-9; ++it) {
      bool moved = false;
      for (int d = 0; d < 3 && !moved; ++d) {
        for (double dir : {1.0, -1.0}) {
          double y[3] = {x[0], x[1], x[2]};
          y[d] += dir * h;
          auto v = score(y, w);
          if (v && *v > *best) {
            best = v;
            std::copy(y, y + 3, x);
            moved = true;
            break;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    step *= 0.1;
  }
}

// Walks along the feasible curve in the tangent direction.
std::optional<GramPentPoint> pent_refine(const PentSeed& seed, double sense, int budget) {
  double x[3] = {seed.x[0], seed.x[1], seed.x[2]};
  pent_penalized(x, seed.branch, sense, 0.02, budget);
  std::array<double, 3> t{};
  if (!pent_project(x, seed.branch, 1e-13, 60, &t)) {
    std::copy(seed.x, seed.x + 3, x);
    if (!pent_project(x, seed.branch, 1e-13, 60, &t)) return std::nullopt;
  }
  auto cur = pent_from(x, seed.branch);
  if (!cur) return std::nullopt;
  double best_v = sense * pent_product(*cur);
  double h = 0.01;
  for (int it = 0; it < budget && h > 1e-12; ++it) {
    bool moved = false;
    for (double dir : {1.0, -1.0}) {
      double y[3];
      for (int k = 0; k < 3; ++k) y[k] = x[k] + dir * h * t[k];
      std::array<double, 3> ty{};
      if (!pent_project(y, seed.branch, 1e-13, 60, &ty)) continue;
      auto p = pent_from(y, seed.branch);
      if (!p) continue;
      double v = sense * pent_product(*p);
      if (v > best_v) {
        best_v = v;
        std::copy(y, y + 3, x);
        t = ty;
        cur = p;
        moved = true;
        h *= 1.5;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return cur;
}

const PentBranch kPentBranches[8] = {{1, 1, 0},  {1, 1, 1},  {1, -1, 0},  {1, -1, 1},
                                     {-1, 1, 0}, {-1, 1, 1}, {-1, -1, 0}, {-1, -1, 1}};

}  // namespace

double quad_det4(const GramQuadPoint& p) {
  return 16 + sq(p.b13) * sq(p.b24) + sq(p.b14) * sq(p.b23) - 4 * sq(p.b13) - 4 * sq(p.b14) - 4 * sq(p.b23) -
         4 * sq(p.b24) - 2 * p.b13 * p.b14 * p.b23 * p.b24;
}

double quad_product(const GramQuadPoint& p) { return p.b13 * p.b14 * p.b23 * p.b24; }

double quad_closure_violation(const GramQuadPoint& p) {
  double v = std::max({sq(p.b13) + sq(p.b23), sq(p.b23) + sq(p.b24), sq(p.b24) + sq(p.b14),
                       sq(p.b14) + sq(p.b13)}) -
             4;
  return std::max(0.0, v);
}

bool quad_feasible(const GramQuadPoint& p, double tol) {
  return std::abs(quad_det4(p)) <= tol && quad_closure_violation(p) <= tol;
}

ExtremaResult<GramQuadPoint> quad_extrema(int grid, int refine, std::uint64_t seed) {
  if (grid < 50) throw DomainError("quad_extrema: grid must be >= 50");
  ExtremaResult<GramQuadPoint> res;
  res.residual_tol = kResidualTol;
  res.seed = seed;

  constexpr std::size_t kKeep = 16;
  auto by_max = [](const QuadSeed& a, const QuadSeed& b) {
    return a.value != b.value ? a.value > b.value : quad_key(a.point) < quad_key(b.point);
  };
  auto by_min = [](const QuadSeed& a, const QuadSeed& b) {
    return a.value != b.value ? a.value < b.value : quad_key(a.point) < quad_key(b.point);
  };
  TopK<QuadSeed> top_max(kKeep, by_max), top_min(kKeep, by_min);

  auto consider = [&](double b13, double b14, double b23) {
    for (int branch = 0; branch < 2; ++branch) {
      auto p = quad_from(b13, b14, b23, branch);
      if (!p) continue;
      ++res.samples;
      QuadSeed s{{b13, b14, b23}, branch, quad_product(*p), *p};
      top_max.offer(s);
      top_min.offer(s);
    }
  };

  const double h = 4.0 / grid;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      for (int k = 0; k <= grid; ++k) consider(-2 + i * h, -2 + j * h, -2 + k * h);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int n = 0; n < 4096; ++n) consider(unit(rng), unit(rng), unit(rng));
  // The sign patterns of ±1 and ±√2 are exact extremizers; inject them.
  for (double mag : {1.0, std::sqrt(2.0)}) {
    for (int mask = 0; mask < 8; ++mask) {
      consider(mask & 1 ? -mag : mag, mask & 2 ? -mag : mag, mask & 4 ? -mag : mag);
    }
  }

  auto maxs = top_max.take();
  auto mins = top_min.take();
  if (maxs.empty()) throw InfeasibleError("quad_extrema: no feasible point");

  auto pick = [&](const std::vector<QuadSeed>& seeds, double sense) {
    GramQuadPoint best = seeds.front().point;
    for (const auto& s : seeds) {
      GramQuadPoint p = quad_refine(s, sense, h, refine);
      double v = sense * quad_product(p), bv = sense * quad_product(best);
      if (v > bv || (v == bv && quad_key(p) < quad_key(best))) best = p;
    }
    return best;
  };
  res.argmax = pick(maxs, 1.0);
  res.argmin = pick(mins, -1.0);
  res.max_value = quad_product(res.argmax);
  res.min_value = quad_product(res.argmin);
  return res;
}

std::array<double, 5> pent_residual(const GramPentPoint& p) {
  const double c = p.c, b13 = p.b13, b14 = p.b14, b24 = p.b24, b25 = p.b25, b35 = p.b35;
  return {
      4 * sq(b13) - (4 - sq(b14)) * (4 - sq(b35)),
      4 * sq(b25) - (4 - sq(b24)) * (4 - sq(b35)),
      4 * sq(b14) + 4 * sq(c) + 4 * c * b14 * b24 - (4 - sq(b13)) * (4 - sq(b24)),
      4 * sq(b24) + 4 * sq(c) + 4 * c * b14 * b24 - (4 - sq(b14)) * (4 - sq(b25)),
      sq(b35) * (4 - sq(c)) + 2 * c * b13 * b25 * b35 + 4 * sq(c) - (4 - sq(b13)) * (4 - sq(b25)),
  };
}

double pent_product(const GramPentPoint& p) { return p.b13 * p.b14 * p.b24 * p.b25 * p.b35; }

double pent_max_residual(const GramPentPoint& p) {
  double m = 0;
  for (double r : pent_residual(p)) m = std::max(m, std::abs(r));
  return m;
}

ExtremaResult<GramPentPoint> pent_extrema(int grid, int refine, std::uint64_t seed) {
  if (grid < 50) throw DomainError("pent_extrema: grid must be >= 50");
  ExtremaResult<GramPentPoint> res;
  res.residual_tol = kResidualTol;
  res.seed = seed;

  constexpr std::size_t kKeep = 24;
  constexpr double kGate = 0.5;
  auto by_max = [](const PentSeed& a, const PentSeed& b) {
    return a.value != b.value ? a.value > b.value : pent_key(a.point) < pent_key(b.point);
  };
  auto by_min = [](const PentSeed& a, const PentSeed& b) {
    return a.value != b.value ? a.value < b.value : pent_key(a.point) < pent_key(b.point);
  };
  TopK<PentSeed> top_max(kKeep, by_max), top_min(kKeep, by_min);

  auto consider = [&](double b14, double b24, double b35) {
    for (const auto& br : kPentBranches) {
      double x[3] = {b14, b24, b35};
      auto r = pent_tail(x, br);
      if (!r || std::max(std::abs((*r)[0]), std::abs((*r)[1])) > kGate) continue;
      if (!pent_project(x, br, 1e-12, 30)) continue;
      auto p = pent_from(x, br);
      if (!p) continue;
      ++res.samples;
      PentSeed s{{x[0], x[1], x[2]}, br, pent_product(*p), *p};
      top_max.offer(s);
      top_min.offer(s);
    }
  };

  const double h = 4.0 / grid;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      for (int k = 0; k <= grid; ++k) consider(-2 + i * h, -2 + j * h, -2 + k * h);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int n = 0; n < 4096; ++n) consider(unit(rng), unit(rng), unit(rng));

  auto maxs = top_max.take();
  auto mins = top_min.take();
  if (maxs.empty()) throw InfeasibleError("pent_extrema: no feasible point");

  auto pick = [&](const std::vector<PentSeed>& seeds, double sense) {
    std::optional<GramPentPoint> best;
    for (const auto& s : seeds) {
      auto p = pent_refine(s, sense, refine);
      if (!p || pent_max_residual(*p) > kResidualTol) continue;
      if (!best) {
        best = p;
        continue;
      }
      double v = sense * pent_product(*p), bv = sense * pent_product(*best);
      if (v > bv || (v == bv && pent_key(*p) < pent_key(*best))) best = p;
    }
    if (!best) throw InfeasibleError("pent_extrema: refinement lost feasibility");
    return *best;
  };
  res.argmax = pick(maxs, 1.0);
  res.argmin = pick(mins, -1.0);
  res.max_value = pent_product(res.argmax);
  res.min_value = pent_product(res.argmin);
  return res;
}

double alpha_gamma15(double a13, double a14, double a23, double a24, int m1, int m3) {
  return 2 * a13 * a14 * a23 * a24 + 4 * std::cos(kPi / m1) * std::cos(kPi / m3) * a14 * a23 * a24;
}

double alpha_gamma46(double a13, double a14, double a24, double a25, double a35) {
  return a13 * a14 * a24 * a25 * a35;
}

double tri_det(double alpha, int m1) { return 2 * alpha - 8 * sq(std::sin(kPi / m1)); }

}  // namespace reflbound::gram

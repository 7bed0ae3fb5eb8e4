#pragma once

// Cyclotomic invariants: totients, the norms γ(l) and γ̃(l), discriminants of
// Q(ζ_l), F_l = Q(cos 2π/l) and the composita F_{k,s}.  Discriminants are kept
// in log space.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "reflbound/bigfloat.hpp"
#include "reflbound/errors.hpp"

namespace reflbound::numthy {

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Ascending by prime.
using Factorization = std::vector<PrimePower>;

struct LogScalar {
  double value = 0.0;
  int precision_bits = 53;
};

struct Single {
  std::int64_t l;
  bool operator==(const Single&) const = default;
};
struct Pair {
  std::int64_t k;
  std::int64_t s;
  bool operator==(const Pair&) const = default;
};
using FieldIndex = std::variant<Single, Pair>;

FieldIndex make_single(std::int64_t l);
/// Requires k ≥ s ≥ 3.
FieldIndex make_pair(std::int64_t k, std::int64_t s);
std::string to_string(const FieldIndex& idx);

/// Numbers below this are factored from a smallest-prime-factor table.
inline constexpr std::uint64_t kSieveLimit = 1u << 20;

Factorization factorize(std::uint64_t n);
/// Factorization of lcm(a, b) from the factorizations of a and b.
Factorization merge_lcm(const Factorization& a, const Factorization& b);
std::uint64_t reconstruct(const Factorization& f);

std::uint64_t euler_phi(std::uint64_t n);
std::uint64_t euler_phi(const Factorization& f);

bool is_prime_power(std::uint64_t n);
bool is_prime(std::uint64_t n);

std::uint64_t gamma(std::int64_t l);
std::uint64_t gamma_tilde(std::int64_t l);

/// ρ(k,s) ∈ {1,2}.
int rho(std::int64_t k, std::int64_t s);
/// [F_{k,s} : Q] = φ(lcm(k,s)) / (2ρ(k,s)).
std::uint64_t degree_Fks(std::int64_t k, std::int64_t s);

LogScalar ln_disc_cyclotomic(std::int64_t l);
LogScalar ln_disc_Fl(std::int64_t l);
LogScalar ln_disc_Fks(std::int64_t k, std::int64_t s);

/// |discr Q(ζ_l)| as an exact integer.
mpz_class disc_cyclotomic_exact(std::int64_t l);
/// The exact ratio |discr Q(ζ_l)| / γ̃(l) is a perfect square (its root is |discr F_l|).
bool disc_Fl_is_square(std::int64_t l);

namespace detail {
void require_index(std::int64_t l, const char* what);
std::uint64_t gamma_tilde_from(std::uint64_t l, const Factorization& f);
}  // namespace detail

/// ln|discr Q(ζ_n)| for n with factorization f, in the arithmetic of `ar`.
template <class Arith>
typename Arith::Real ln_disc_cyclotomic_t(const Arith& ar, const Factorization& f) {
  std::uint64_t n = reconstruct(f);
  std::uint64_t ph = euler_phi(f);
  auto r = ar.integer(static_cast<std::int64_t>(ph)) * ar.ln(static_cast<std::int64_t>(n));
  for (const auto& pp : f) {
    std::uint64_t w = ph / (pp.prime - 1);
    r -= ar.integer(static_cast<std::int64_t>(w)) * ar.ln(static_cast<std::int64_t>(pp.prime));
  }
  return r;
}

template <class Arith>
typename Arith::Real ln_disc_Fl_t(const Arith& ar, const Factorization& f) {
  std::uint64_t n = reconstruct(f);
  auto r = ln_disc_cyclotomic_t(ar, f) - ar.ln(static_cast<std::int64_t>(detail::gamma_tilde_from(n, f)));
  return r / std::int64_t{2};
}

template <class Arith>
typename Arith::Real ln_disc_Fks_t(const Arith& ar, std::int64_t k, std::int64_t s) {
  Factorization fk = factorize(static_cast<std::uint64_t>(k));
  Factorization fs = factorize(static_cast<std::uint64_t>(s));
  std::int64_t g = std::gcd(k, s);
  if (2 % g != 0) return ln_disc_Fl_t(ar, merge_lcm(fk, fs));
  auto phk = static_cast<std::int64_t>(euler_phi(fk));
  auto phs = static_cast<std::int64_t>(euler_phi(fs));
  return ar.integer(phs / 2) * ln_disc_Fl_t(ar, fk) + ar.integer(phk / 2) * ln_disc_Fl_t(ar, fs);
}

}  // namespace reflbound::numthy

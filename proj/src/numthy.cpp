#include "reflbound/numthy.hpp"

#include <cmath>

namespace reflbound::numthy {

namespace {

// spf[n] = smallest prime factor of n, for 2 <= n < kSieveLimit.
const std::vector<std::uint32_t>& spf_table() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<std::uint32_t> spf(kSieveLimit, 0);
    for (std::uint32_t i = 2; i < kSieveLimit; ++i) {
      if (spf[i] != 0) continue;
      spf[i] = i;
      for (std::uint64_t j = std::uint64_t{i} * i; j < kSieveLimit; j += i) {
        if (spf[j] == 0) spf[j] = i;
      }
    }
    return spf;
  }();
  return table;
}

mpz_class ipow(std::uint64_t base, std::uint64_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

}  // namespace

namespace detail {

void require_index(std::int64_t l, const char* what) {
  if (l < 3) throw DomainError(std::string(what) + ": index must be >= 3, got " + std::to_string(l));
}

std::uint64_t gamma_tilde_from(std::uint64_t l, const Factorization& f) {
  if (l % 2 == 1) return f.size() == 1 ? f[0].prime : 1;
  if (l == 4) return 4;
  std::uint64_t h = l / 2;
  // h = l/2 has the factorization of l with one fewer 2.
  Factorization fh = f;
  if (--fh[0].exponent == 0) fh.erase(fh.begin());
  std::uint64_t g = fh.size() == 1 ? fh[0].prime : 1;
  return h % 2 == 1 ? g : g * g;
}

}  // namespace detail

FieldIndex make_single(std::int64_t l) {
  detail::require_index(l, "FieldIndex");
  return Single{l};
}

FieldIndex make_pair(std::int64_t k, std::int64_t s) {
  detail::require_index(s, "FieldIndex");
  if (k < s) throw DomainError("FieldIndex: pair requires k >= s");
  return Pair{k, s};
}

std::string to_string(const FieldIndex& idx) {
  if (const auto* one = std::get_if<Single>(&idx)) return "l=" + std::to_string(one->l);
  const auto& p = std::get<Pair>(idx);
  return "(" + std::to_string(p.k) + "," + std::to_string(p.s) + ")";
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization f;
  auto push = [&f](std::uint64_t p) {
    if (!f.empty() && f.back().prime == p) {
      ++f.back().exponent;
    } else {
      f.push_back({p, 1});
    }
  };
  // Trial division until the cofactor drops into the table.
  for (std::uint64_t p = 2; n >= kSieveLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  }
  if (n >= kSieveLimit) {
    push(n);
    return f;
  }
  const auto& spf = spf_table();
  while (n > 1) {
    std::uint64_t p = spf[n];
    push(p);
    n /= p;
  }
  return f;
}

Factorization merge_lcm(const Factorization& a, const Factorization& b) {
  Factorization out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].prime < a[i].prime) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].prime, std::max(a[i].exponent, b[j].exponent)});
      ++i;
      ++j;
    }
  }
  return out;
}

std::uint64_t reconstruct(const Factorization& f) {
  std::uint64_t n = 1;
  for (const auto& pp : f) {
    for (int e = 0; e < pp.exponent; ++e) n *= pp.prime;
  }
  return n;
}

std::uint64_t euler_phi(const Factorization& f) {
  std::uint64_t r = 1;
  for (const auto& pp : f) {
    r *= pp.prime - 1;
    for (int e = 1; e < pp.exponent; ++e) r *= pp.prime;
  }
  return r;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw DomainError("euler_phi: n must be positive");
  return euler_phi(factorize(n));
}

bool is_prime_power(std::uint64_t n) { return n > 1 && factorize(n).size() == 1; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  auto f = factorize(n);
  return f.size() == 1 && f[0].exponent == 1;
}

std::uint64_t gamma(std::int64_t l) {
  detail::require_index(l, "gamma");
  auto f = factorize(static_cast<std::uint64_t>(l));
  return f.size() == 1 ? f[0].prime : 1;
}

std::uint64_t gamma_tilde(std::int64_t l) {
  detail::require_index(l, "gamma_tilde");
  auto u = static_cast<std::uint64_t>(l);
  return detail::gamma_tilde_from(u, factorize(u));
}

int rho(std::int64_t k, std::int64_t s) {
  detail::require_index(k, "rho");
  detail::require_index(s, "rho");
  return 2 % std::gcd(k, s) == 0 ? 2 : 1;
}

std::uint64_t degree_Fks(std::int64_t k, std::int64_t s) {
  int r = rho(k, s);
  auto m = merge_lcm(factorize(static_cast<std::uint64_t>(k)), factorize(static_cast<std::uint64_t>(s)));
  return euler_phi(m) / (2 * static_cast<std::uint64_t>(r));
}

LogScalar ln_disc_cyclotomic(std::int64_t l) {
  detail::require_index(l, "ln_disc_cyclotomic");
  return {ln_disc_cyclotomic_t(DoubleArith{}, factorize(static_cast<std::uint64_t>(l))), 53};
}

LogScalar ln_disc_Fl(std::int64_t l) {
  detail::require_index(l, "ln_disc_Fl");
  // The exact check is cheap for small l; beyond that the integers get huge.
  if (l <= 300 && !disc_Fl_is_square(l)) {
    throw std::logic_error("discriminant ratio is not a perfect square for l=" + std::to_string(l));
  }
  return {ln_disc_Fl_t(DoubleArith{}, factorize(static_cast<std::uint64_t>(l))), 53};
}

LogScalar ln_disc_Fks(std::int64_t k, std::int64_t s) {
  detail::require_index(k, "ln_disc_Fks");
  detail::require_index(s, "ln_disc_Fks");
  return {ln_disc_Fks_t(DoubleArith{}, k, s), 53};
}

mpz_class disc_cyclotomic_exact(std::int64_t l) {
  detail::require_index(l, "disc_cyclotomic_exact");
  auto f = factorize(static_cast<std::uint64_t>(l));
  std::uint64_t ph = euler_phi(f);
  mpz_class num = ipow(static_cast<std::uint64_t>(l), ph);
  mpz_class den = 1;
  for (const auto& pp : f) den *= ipow(pp.prime, ph / (pp.prime - 1));
  return num / den;
}

bool disc_Fl_is_square(std::int64_t l) {
  mpz_class d = disc_cyclotomic_exact(l);
  mpz_class g = static_cast<unsigned long>(gamma_tilde(l));
  if (d % g != 0) return false;
  mpz_class q = d / g;
  return mpz_perfect_square_p(q.get_mpz_t()) != 0;
}

}  // namespace reflbound::numthy

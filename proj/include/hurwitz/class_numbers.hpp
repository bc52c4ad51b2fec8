#pragma once

// Generalized Hurwitz class numbers.
//
// Two families, each available through its defining formula and through a
// product of local factors:
//   * H(ell, m, N; n)    -- Eisenstein plus-space coefficients (trivial
//                           character when ell = 1, written H_{m,N}(n));
//   * H^(N1,N2)(D)       -- modified class numbers attached to Eichler orders.
// The defining formulas never call the local-factor code and vice versa, so
// agreement between the two routes is a real check.

#include "hurwitz/arith.hpp"
#include "hurwitz/binary_forms.hpp"
#include "hurwitz/cache.hpp"
#include "hurwitz/rational.hpp"
#include "hurwitz/report.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace hcn {

// ------------------------------------------------------------- L-values

namespace detail {

inline int unit_count(i64 D) { return D == -3 ? 6 : (D == -4 ? 4 : 2); }

}  // namespace detail

// L(0, chi_D) for a negative fundamental discriminant, as -(1/|D|) sum chi_D(a) a.
// The class-number formula 2 h(D) / w(D) is evaluated alongside and must agree.
inline Rational L0_chi(i64 D) {
  if (D >= 0 || !is_fundamental(D)) throw std::invalid_argument("L0_chi: D must be a negative fundamental discriminant");
  static MemoTable<i64, Rational> memo;
  return memo.get(D, [D] {
    const i64 m = -D;
    Integer s = 0;
    for (i64 a = 1; a < m; ++a) {
      const int k = kronecker(D, a);
      if (k != 0) s += Integer{static_cast<long>(k * a)};
    }
    Rational value{-s, Integer{static_cast<long>(m)}};
    value.canonicalize();
    const Rational via_class_number = make_rational(2 * class_number_h(D), detail::unit_count(D));
    if (value != via_class_number) throw std::logic_error("L0_chi: character sum disagrees with 2h/w for D=" + std::to_string(D));
    return value;
  });
}

// L_m(0, chi_D) = L(0, chi_D) prod_{p | m} (1 - chi_D(p)).
inline Rational L0_chi_removed(i64 m, i64 D) {
  Rational v = L0_chi(D);
  for (i64 p : prime_divisors(m)) v *= 1 - kronecker(D, p);
  return v;
}

// L_N(-1, id) = zeta(-1) prod_{p | N} (1 - p).
inline Rational L_N_value(i64 N) {
  if (N < 1) throw std::invalid_argument("L_N_value: N must be positive");
  Rational v = make_rational(-1, 12);
  for (i64 p : prime_divisors(N)) v *= 1 - p;
  return v;
}

// ---------------------------------------------------------- local factors

struct LocalFactors {
  i64 p;
  Rational A, B, C, D;
};

namespace detail {

// sigma_1(f) - sigma_1(f / p) * k, with sigma_1(1/p) = 0.
inline Rational conductor_factor(i64 fp, i64 p, i64 k) {
  Rational v = to_rational(sigma(fp, 1));
  if (fp > 1) v -= to_rational(sigma(fp / p, 1)) * k;
  return v;
}

inline Rational a_factor(i64 fp, i64 p, i64 k) {
  return Rational{fp} * (1 - make_rational(k, p)) / (1 - make_rational(1, p * p));
}

}  // namespace detail

inline LocalFactors local_factors(i64 p, i64 n) {
  if (!is_prime(p)) throw std::invalid_argument("local_factors: p must be prime");
  const auto split = n >= 1 ? disc_split(n) : std::nullopt;
  if (!split) throw std::invalid_argument("local_factors: -" + std::to_string(n) + " is not a discriminant");
  const i64 fp = p_part(split->conductor, p);
  const i64 k = kronecker(split->fundamental, p);
  LocalFactors lf{p, 0, 0, 0, 0};
  lf.A = detail::a_factor(fp, p, k);
  lf.B = make_rational(2 * p * fp - p - 1 - k * (2 * fp - p - 1), p - 1);
  lf.C = 1 - k;
  lf.D = detail::conductor_factor(fp, p, k);
  return lf;
}

struct EllLocalFactors {
  i64 p;
  Rational A, C, D;
  i64 fundamental;        // D_{ell,n}:  -eps n  = D_{ell,n} f_n^2
  i64 fundamental_twist;  // D'_{ell,n}: -ell n = D'_{ell,n} f'_n^2
  i64 conductor;          // f_n
};

inline int ell_sign(i64 ell) { return ((ell - 1) / 2) % 2 == 0 ? 1 : -1; }

namespace detail {

struct EllSplit {
  FundamentalSplit plain;  // of -eps n
  FundamentalSplit twist;  // of -ell n
};

inline std::optional<EllSplit> ell_split(i64 ell, i64 n) {
  const auto plain = split_discriminant(-ell_sign(ell) * n);
  const auto twist = split_discriminant(-ell * n);
  if (!plain || !twist) return std::nullopt;
  return EllSplit{*plain, *twist};
}

inline int ell_character(i64 a, i64 ell) { return ell == 1 ? 1 : jacobi(a, ell); }

}  // namespace detail

inline EllLocalFactors ell_local_factors(i64 p, i64 ell, i64 n) {
  if (!is_prime(p)) throw std::invalid_argument("ell_local_factors: p must be prime");
  if (ell < 1 || ell % 2 == 0 || !is_squarefree(ell)) throw std::invalid_argument("ell_local_factors: ell must be odd square-free");
  const auto s = n >= 1 ? detail::ell_split(ell, n) : std::nullopt;
  if (!s) throw std::invalid_argument("ell_local_factors: -eps n or -ell n is not a discriminant");
  const i64 fp = p_part(s->plain.conductor, p);
  const i64 k_twist = kronecker(s->twist.fundamental, p);
  const i64 k_plain = kronecker(s->plain.fundamental, p) * detail::ell_character(p, ell);
  return {p,
          detail::a_factor(fp, p, k_twist),
          Rational{1 - k_twist},
          detail::conductor_factor(fp, p, k_plain),
          s->plain.fundamental,
          s->twist.fundamental,
          s->plain.conductor};
}

// ------------------------------------------------ Pei-Wang class numbers

struct PWParams {
  i64 ell;
  i64 m;
  i64 N;

  PWParams(i64 ell_, i64 m_, i64 N_) : ell(ell_), m(m_), N(N_) {
    if (N < 1 || N % 2 == 0 || !is_squarefree(N)) throw HypothesisError("N=" + std::to_string(N) + " must be odd and square-free");
    if (ell < 1 || N % ell != 0) throw HypothesisError("ell=" + std::to_string(ell) + " must divide N=" + std::to_string(N));
    if (m < 1 || N % m != 0) throw HypothesisError("m=" + std::to_string(m) + " must divide N=" + std::to_string(N));
  }
};

// Moebius-twisted conductor sum
//   sum_{a | f_n, (a, N) = 1} mu(a) chi_D(a) chi'_ell(a) sigma_{m,N,1}(f_n / a).
inline Rational twisted_divisor_sum(const PWParams& prm, i64 fundamental, i64 conductor) {
  Rational total = 0;
  for (i64 a : divisors(conductor)) {
    if (std::gcd(a, prm.N) != 1) continue;
    const int mu = moebius(a);
    if (mu == 0) continue;
    const int chi = kronecker(fundamental, a) * detail::ell_character(a, prm.ell);
    if (chi == 0) continue;
    total += to_rational(sigma_lns(prm.m, prm.N, 1, conductor / a)) * (mu * chi);
  }
  return total;
}

// H(ell, m, N; n) straight from its definition.
inline Rational pw_class_number(const PWParams& prm, i64 n) {
  if (n < 0) throw std::invalid_argument("pw_class_number: n must be non-negative");
  if (n == 0) return prm.m == prm.N ? L_N_value(prm.N) : Rational{0};
  const auto s = detail::ell_split(prm.ell, n);
  if (!s) return 0;
  Rational v = L0_chi_removed(prm.m, s->twist.fundamental) *
               twisted_divisor_sum(prm, s->plain.fundamental, s->plain.conductor);
  if (prm.m != prm.N) {
    for (i64 p : prime_divisors(prm.N / prm.m))
      v *= (1 - make_rational(kronecker(s->twist.fundamental, p), p)) / (1 - make_rational(1, p * p));
    const i64 g = std::gcd(prm.ell, s->plain.fundamental);
    v *= make_rational(g, std::gcd(g, prm.m));
  }
  return v;
}

inline Rational pw_class_number(i64 ell, i64 m, i64 N, i64 n) { return pw_class_number(PWParams{ell, m, N}, n); }

// H_{m,N}(n) = L(0, chi_D) prod_{p | f, p !| N} D_p prod_{p | m} C_p prod_{p | N/m} A_p.
inline Rational pw_class_number_local(const PWParams& prm, i64 n) {
  if (prm.ell != 1) throw std::invalid_argument("pw_class_number_local: ell must be 1");
  if (n < 1) throw std::invalid_argument("pw_class_number_local: n must be positive");
  const auto split = disc_split(n);
  if (!split) return 0;
  Rational v = L0_chi(split->fundamental);
  for (i64 p : prime_divisors(split->conductor))
    if (prm.N % p != 0) v *= local_factors(p, n).D;
  for (i64 p : prime_divisors(prm.m)) v *= local_factors(p, n).C;
  for (i64 p : prime_divisors(prm.N / prm.m)) v *= local_factors(p, n).A;
  return v;
}

// Local-product form of H(ell, m, N; n) for any ell, built on the twisted factors.
inline Rational pw_class_number_ell_local(const PWParams& prm, i64 n) {
  if (n < 1) throw std::invalid_argument("pw_class_number_ell_local: n must be positive");
  const auto s = detail::ell_split(prm.ell, n);
  if (!s) return 0;
  Rational v = L0_chi(s->twist.fundamental);
  for (i64 p : prime_divisors(s->plain.conductor))
    if (prm.N % p != 0) v *= ell_local_factors(p, prm.ell, n).D;
  for (i64 p : prime_divisors(prm.m)) v *= ell_local_factors(p, prm.ell, n).C;
  for (i64 p : prime_divisors(prm.N / prm.m)) v *= ell_local_factors(p, prm.ell, n).A;
  const i64 g = std::gcd(prm.ell, s->plain.fundamental);
  v *= make_rational(g, std::gcd(g, prm.m));
  return v;
}

// ---------------------------------------- modified (Eichler order) numbers

namespace detail {

// N1 may carry a single factor of 2 (the level-4 three-squares case).
inline void require_lsz_levels(i64 N1, i64 N2) {
  if (N1 < 1 || N2 < 1) throw HypothesisError("N1, N2 must be positive");
  if (!is_squarefree(N1) || !is_squarefree(N2))
    throw HypothesisError("N1=" + std::to_string(N1) + ", N2=" + std::to_string(N2) + " must be square-free");
  if (std::gcd(N1, N2) != 1) throw HypothesisError("N1=" + std::to_string(N1) + ", N2=" + std::to_string(N2) + " must be coprime");
  if (N2 % 2 == 0) throw HypothesisError("N2=" + std::to_string(N2) + " must be odd");
}

inline Rational b_factor(i64 fp, i64 p, i64 k) { return make_rational(2 * p * fp - p - 1 - k * (2 * fp - p - 1), p - 1); }

}  // namespace detail

inline Rational lsz_class_number(i64 N1, i64 N2, i64 D) {
  detail::require_lsz_levels(N1, N2);
  if (D < 0) throw std::invalid_argument("lsz_class_number: D must be non-negative");
  if (D == 0) {
    Rational v = make_rational(-1, 12);
    for (i64 p : prime_divisors(N1)) v *= 1 - p;
    for (i64 p : prime_divisors(N2)) v *= p + 1;
    return v;
  }
  if (!is_discriminant(-D)) return 0;
  // Largest f built from primes of N1 N2 with -D / f^2 still a discriminant.
  i64 f = 1;
  for (i64 p : prime_divisors(N1 * N2)) {
    while (D % (f * p * f * p) == 0 && is_discriminant(-(D / (f * p * f * p)))) f *= p;
  }
  const i64 reduced = D / (f * f);
  Rational v = hurwitz_H(reduced);
  for (i64 p : prime_divisors(N1)) v *= 1 - kronecker(-reduced, p);
  for (i64 p : prime_divisors(N2)) v *= detail::b_factor(p_part(f, p), p, kronecker(-reduced, p));
  return v;
}

// L(0, chi_D) prod_{p | f, p !| N} D_p prod_{p | N1} C_p prod_{p | N2} B_p.
inline Rational lsz_class_number_local(i64 N1, i64 N2, i64 n) {
  detail::require_lsz_levels(N1, N2);
  if (N1 % 2 == 0) throw HypothesisError("lsz_class_number_local: N1 must be odd");
  if (n < 1) throw std::invalid_argument("lsz_class_number_local: n must be positive");
  const auto split = disc_split(n);
  if (!split) return 0;
  const i64 N = N1 * N2;
  Rational v = L0_chi(split->fundamental);
  for (i64 p : prime_divisors(split->conductor))
    if (N % p != 0) v *= local_factors(p, n).D;
  for (i64 p : prime_divisors(N1)) v *= local_factors(p, n).C;
  for (i64 p : prime_divisors(N2)) v *= local_factors(p, n).B;
  return v;
}

}  // namespace hcn

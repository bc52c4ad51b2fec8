#pragma once

// Identity registry and verification engine.
//
// Each entry evaluates both sides of one identity at one parameter point and
// returns an IdentityReport. Where two computational routes exist the sides
// are evaluated through different ones (orbit enumeration vs class numbers,
// class numbers vs ternary theta series, defining formula vs local factors).

#include "hurwitz/arith.hpp"
#include "hurwitz/binary_forms.hpp"
#include "hurwitz/class_numbers.hpp"
#include "hurwitz/qseries.hpp"
#include "hurwitz/rational.hpp"
#include "hurwitz/report.hpp"
#include "hurwitz/ternary_forms.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hcn {

using Params = std::map<std::string, i64>;

// Malformed requests: unknown identity, missing or unknown parameter.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline i64 need(const Params& prm, const std::string& key) {
  auto it = prm.find(key);
  if (it == prm.end()) throw UsageError("missing parameter --" + key);
  return it->second;
}

inline i64 get_or(const Params& prm, const std::string& key, i64 fallback) {
  auto it = prm.find(key);
  return it == prm.end() ? fallback : it->second;
}

inline void require_odd_squarefree(i64 N, const std::string& name) {
  if (N < 1 || N % 2 == 0 || !is_squarefree(N))
    throw HypothesisError(name + "=" + std::to_string(N) + " must be odd and square-free");
}

inline void require_divides(i64 d, i64 N, const std::string& name) {
  if (d < 1 || N % d != 0) throw HypothesisError(name + "=" + std::to_string(d) + " must divide " + std::to_string(N));
}

inline void require_prime(i64 p, const std::string& name) {
  if (!is_prime(p)) throw HypothesisError(name + "=" + std::to_string(p) + " must be prime");
}

inline void require_coprime(i64 a, i64 b, const std::string& what) {
  if (std::gcd(a, b) != 1) throw HypothesisError(what + " must be coprime");
}

inline void require_nonnegative(i64 n) {
  if (n < 0) throw HypothesisError("n=" + std::to_string(n) + " must be non-negative");
}

// n > 0 with n = 0, 3 (mod 4).
inline void require_discriminant_index(i64 n) {
  if (n <= 0 || !is_discriminant(-n))
    throw HypothesisError("n=" + std::to_string(n) + " must be positive with n = 0, 3 (mod 4)");
}

inline void require_truncation(i64 M, i64 cap) {
  if (M < 0 || M > cap) throw std::invalid_argument("truncation " + std::to_string(M) + " outside [0, " + std::to_string(cap) + "]");
}

inline Rational prod_over_primes(i64 n, const std::function<Rational(i64)>& f) {
  Rational v = 1;
  for (i64 p : prime_divisors(n)) v *= f(p);
  return v;
}

inline Rational pow2(int e) {
  Rational v = 1;
  if (e >= 0)
    for (int i = 0; i < e; ++i) v *= 2;
  else
    for (int i = 0; i < -e; ++i) v /= 2;
  return v;
}

}  // namespace detail

// ------------------------------------------------------------ coefficients

// u(g) = prod_{p | g} 1/(p-1) prod_{p | N/(mg)} 1/(p+1)
inline Rational coef_u(i64 g, i64 m, i64 N) {
  return detail::prod_over_primes(g, [](i64 p) { return make_rational(1, p - 1); }) *
         detail::prod_over_primes(N / (m * g), [](i64 p) { return make_rational(1, p + 1); });
}

// t(v) = prod_{p | N/(mv)} 2/p prod_{p | v} 1/(1-p)
inline Rational coef_t(i64 v, i64 m, i64 N) {
  return detail::prod_over_primes(N / (m * v), [](i64 p) { return make_rational(2, p); }) *
         detail::prod_over_primes(v, [](i64 p) { return make_rational(1, 1 - p); });
}

// prod_{p | N/m} (p+1)/p prod_{p | m} 1/(1-p)
inline Rational coef_v(i64 m, i64 N) {
  return detail::prod_over_primes(N / m, [](i64 p) { return make_rational(p + 1, p); }) *
         detail::prod_over_primes(m, [](i64 p) { return make_rational(1, 1 - p); });
}

// ---------------------------------------------------------------- series

inline QSeries pw_series(i64 ell, i64 m, i64 N, i64 truncation) {
  const PWParams prm{ell, m, N};
  QSeries s(truncation);
  for (i64 n = 0; n <= truncation; ++n) s[n] = pw_class_number(prm, n);
  return s;
}

inline QSeries lsz_series(i64 N1, i64 N2, i64 truncation) {
  QSeries s(truncation);
  for (i64 n = 0; n <= truncation; ++n) s[n] = lsz_class_number(N1, N2, n);
  return s;
}

// H_{m,N}(n) for n >= 1 from local factors; n = 0 from the definition.
inline Rational pw_value_local(i64 m, i64 N, i64 n) {
  const PWParams prm{1, m, N};
  return n == 0 ? pw_class_number(prm, 0) : pw_class_number_local(prm, n);
}

inline Rational lsz_value_local(i64 N1, i64 N2, i64 n) {
  return n == 0 ? lsz_class_number(N1, N2, 0) : lsz_class_number_local(N1, N2, n);
}

// T_{mg}: weighted genus theta when mu(mg) = -1; the difference of the
// shrunken genus (level 4N/q) and the full-level genus, both anisotropic at
// mg/q, when mu(mg) = +1.
inline QSeries t_series(i64 d, i64 N, std::optional<i64> q, i64 truncation) {
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(d, N, "mg");
  if (d == 1) throw HypothesisError("mg must be greater than 1");
  if (moebius(d) == -1) return weighted_genus_theta(genus_contents(N, d), truncation);
  const i64 qq = q ? *q : prime_divisors(d).front();
  if (!is_prime(qq) || d % qq != 0)
    throw HypothesisError("q" + std::to_string(d) + "=" + std::to_string(qq) + " must be a prime divisor of " + std::to_string(d));
  return weighted_genus_theta(genus_contents(N, d / qq, qq), truncation) -
         weighted_genus_theta(genus_contents(N, d / qq), truncation);
}

// ------------------------------------------------------- exact linear algebra

using RationalMatrix = std::vector<std::vector<Rational>>;

// Row-reduces in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    const Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = 0; c < a[r].size(); ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix a) {
  if (a.empty()) return 0;
  return row_reduce(a, a.front().size()).size();
}

// Unique X with X * basis = targets (rows are series), if it exists.
inline std::optional<RationalMatrix> solve_rows(const std::vector<QSeries>& basis, const std::vector<QSeries>& targets) {
  const std::size_t k = basis.size(), r = targets.size();
  if (k == 0) return std::nullopt;
  const i64 M = basis.front().truncation();
  // Columns of the augmented system are the basis rows then the target rows.
  RationalMatrix aug(static_cast<std::size_t>(M) + 1, std::vector<Rational>(k + r));
  for (i64 n = 0; n <= M; ++n) {
    for (std::size_t j = 0; j < k; ++j) aug[static_cast<std::size_t>(n)][j] = basis[j][n];
    for (std::size_t j = 0; j < r; ++j) aug[static_cast<std::size_t>(n)][k + j] = targets[j][n];
  }
  const auto pivots = row_reduce(aug, k);
  if (pivots.size() != k) return std::nullopt;
  for (std::size_t row = k; row < aug.size(); ++row)
    for (std::size_t j = 0; j < r; ++j)
      if (aug[row][k + j] != 0) return std::nullopt;
  RationalMatrix x(r, std::vector<Rational>(k));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < k; ++i) x[j][i] = aug[i][k + j];
  return x;
}

// ------------------------------------------------------------- identities

namespace checks {

inline IdentityReport gauss_three_squares(const Params& prm) {
  const i64 n = detail::need(prm, "n");
  detail::require_nonnegative(n);
  const Rational lhs{static_cast<long>(r3(n))};
  const Rational h4 = hurwitz_H(4 * n), h1 = hurwitz_H(n);
  return make_report("gauss_three_squares", {{"n", n}}, lhs, 12 * (h4 - 2 * h1), {{"H(4n)", h4}, {"H(n)", h1}});
}

inline IdentityReport kronecker_hurwitz(const Params& prm) { return kronecker_hurwitz_check(detail::need(prm, "n")); }

inline IdentityReport r3_is_lsz(const Params& prm) {
  const i64 n = detail::need(prm, "n");
  detail::require_nonnegative(n);
  const Rational h = lsz_class_number(2, 1, 4 * n);
  return make_report("r3_is_lsz", {{"n", n}}, Rational{static_cast<long>(r3(n))}, 12 * h, {{"H^(2,1)(4n)", h}});
}

inline IdentityReport hurwitz_local_product(const Params& prm) {
  const i64 n = detail::need(prm, "n");
  detail::require_discriminant_index(n);
  const auto split = disc_split(n);
  Rational rhs = L0_chi(split->fundamental);
  std::vector<Term> terms{{"L(0,chi_D)", rhs}};
  for (i64 p : prime_divisors(split->conductor)) {
    const Rational d = local_factors(p, n).D;
    terms.push_back({"D_" + std::to_string(p), d});
    rhs *= d;
  }
  return make_report("hurwitz_local_product", {{"n", n}}, hurwitz_H(n), rhs, std::move(terms));
}

// Four linear relations among A_p, B_p, C_p, D_p.
inline IdentityReport local_factor_relations(const Params& prm) {
  const i64 p = detail::need(prm, "p"), n = detail::need(prm, "n"), part = detail::need(prm, "part");
  detail::require_prime(p, "p");
  detail::require_discriminant_index(n);
  if (part < 1 || part > 4) throw UsageError("--part must be 1, 2, 3 or 4");
  const auto lf = local_factors(p, n);
  Rational lhs, rhs;
  switch (part) {
    case 1:
      lhs = lf.B;
      rhs = (p + 1) * (make_rational(2, p) * lf.A + make_rational(1, 1 - p) * lf.C);
      break;
    case 2:
      lhs = lf.A;
      rhs = make_rational(p, 2 * (p + 1)) * lf.B + make_rational(p, 2 * (p - 1)) * lf.C;
      break;
    case 3:
      lhs = lf.D;
      rhs = make_rational(p + 1, p) * lf.A + make_rational(1, 1 - p) * lf.C;
      break;
    default:
      lhs = lf.D;
      rhs = lf.B / 2 + lf.C / 2;
  }
  return make_report("local_factor_relations", {{"p", p}, {"n", n}, {"part", part}}, lhs, rhs,
                     {{"A", lf.A}, {"B", lf.B}, {"C", lf.C}, {"D", lf.D}});
}

// Defining formula vs local-factor product for H(ell, m, N; n).
inline IdentityReport pw_local_product(const Params& prm) {
  const i64 ell = detail::get_or(prm, "ell", 1), m = detail::need(prm, "m"), N = detail::need(prm, "N"), n = detail::need(prm, "n");
  detail::require_odd_squarefree(N, "N");
  if (n < 1) throw HypothesisError("n must be positive");
  const PWParams p{ell, m, N};
  return make_report("pw_local_product", {{"ell", ell}, {"m", m}, {"N", N}, {"n", n}}, pw_class_number(p, n),
                     pw_class_number_ell_local(p, n));
}

// (2^w(N/m) m / N) H_{m,N}(n) = sum_{g | N/m} u(g) H^(mg, N/(mg))(n)
inline IdentityReport pw_to_lsz(const Params& prm) {
  const i64 m = detail::need(prm, "m"), N = detail::need(prm, "N"), n = detail::need(prm, "n");
  const bool local = detail::get_or(prm, "local", 0) != 0;
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(m, N, "m");
  detail::require_nonnegative(n);
  const Rational scale = detail::pow2(omega(N / m)) * make_rational(m, N);
  const Rational h = local ? pw_value_local(m, N, n) : pw_class_number(PWParams{1, m, N}, n);
  Rational rhs = 0;
  std::vector<Term> terms{{"H_{m,N}(n)", h}};
  for (i64 g : divisors(N / m)) {
    const Rational x = local ? lsz_value_local(m * g, N / (m * g), n) : lsz_class_number(m * g, N / (m * g), n);
    terms.push_back({"H^(" + std::to_string(m * g) + "," + std::to_string(N / (m * g)) + ")", x});
    rhs += coef_u(g, m, N) * x;
  }
  return make_report("pw_to_lsz", {{"m", m}, {"N", N}, {"n", n}, {"local", local}}, scale * h, rhs, std::move(terms));
}

// H^(m,N/m)(n) / prod_{p | N/m}(p+1) = sum_{v | N/m} t(v) H_{mv,N}(n)
inline IdentityReport lsz_to_pw(const Params& prm) {
  const i64 m = detail::need(prm, "m"), N = detail::need(prm, "N"), n = detail::need(prm, "n");
  const bool local = detail::get_or(prm, "local", 0) != 0;
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(m, N, "m");
  detail::require_nonnegative(n);
  const Rational h = local ? lsz_value_local(m, N / m, n) : lsz_class_number(m, N / m, n);
  const Rational lhs = h / detail::prod_over_primes(N / m, [](i64 p) { return Rational{p + 1}; });
  Rational rhs = 0;
  std::vector<Term> terms{{"H^(m,N/m)(n)", h}};
  for (i64 v : divisors(N / m)) {
    const Rational x = local ? pw_value_local(m * v, N, n) : pw_class_number(PWParams{1, m * v, N}, n);
    terms.push_back({"H_{" + std::to_string(m * v) + "," + std::to_string(N) + "}", x});
    rhs += coef_t(v, m, N) * x;
  }
  return make_report("lsz_to_pw", {{"m", m}, {"N", N}, {"n", n}, {"local", local}}, lhs, rhs, std::move(terms));
}

// H^(m,N/m)(n) / prod(p+1) = sum_v t(v) / gcd(ell, X_v) H(ell, mv, N; ell n).
// reading 0: X_v = N/(mv); reading 1: X_v = (N/m) v.
inline IdentityReport nontrivial_char(const Params& prm) {
  const i64 ell = detail::need(prm, "ell"), m = detail::need(prm, "m"), N = detail::need(prm, "N"), n = detail::need(prm, "n");
  const i64 reading = detail::get_or(prm, "reading", 0);
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(m, N, "m");
  detail::require_divides(ell, N, "ell");
  if (ell == 1) throw HypothesisError("ell must be greater than 1");
  if (reading != 0 && reading != 1) throw UsageError("--reading must be 0 or 1");
  detail::require_nonnegative(n);
  const Rational h = lsz_class_number(m, N / m, n);
  const Rational lhs = h / detail::prod_over_primes(N / m, [](i64 p) { return Rational{p + 1}; });
  Rational rhs = 0;
  std::vector<Term> terms{{"H^(m,N/m)(n)", h}};
  for (i64 v : divisors(N / m)) {
    const i64 x = reading == 0 ? N / (m * v) : checked_mul(N / m, v);
    const Rational pw = pw_class_number(PWParams{ell, m * v, N}, checked_mul(ell, n));
    terms.push_back({"H(ell," + std::to_string(m * v) + ",N;ell n)", pw});
    rhs += coef_t(v, m, N) * pw / std::gcd(ell, x);
  }
  return make_report("nontrivial_char", {{"ell", ell}, {"m", m}, {"N", N}, {"n", n}, {"reading", reading}}, lhs, rhs,
                     std::move(terms));
}

// H(ell, m, N; ell n) = gcd(ell, N/m) H_{m,N}(n)
inline IdentityReport ape3(const Params& prm) {
  const i64 ell = detail::need(prm, "ell"), m = detail::need(prm, "m"), N = detail::need(prm, "N"), n = detail::need(prm, "n");
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(m, N, "m");
  detail::require_divides(ell, N, "ell");
  if (ell == 1) throw HypothesisError("ell must be greater than 1");
  detail::require_nonnegative(n);
  const Rational lhs = pw_class_number(PWParams{ell, m, N}, checked_mul(ell, n));
  const Rational h = pw_value_local(m, N, n);
  return make_report("ape3", {{"ell", ell}, {"m", m}, {"N", N}, {"n", n}}, lhs, std::gcd(ell, N / m) * h,
                     {{"H_{m,N}(n)", h}});
}

// H(n) = sum_{m | N} v(m) H_{m,N}(n)
inline IdentityReport classical_to_pw(const Params& prm) {
  const i64 N = detail::need(prm, "N"), n = detail::need(prm, "n");
  detail::require_odd_squarefree(N, "N");
  detail::require_nonnegative(n);
  Rational rhs = 0;
  std::vector<Term> terms;
  for (i64 m : divisors(N)) {
    const Rational x = pw_class_number(PWParams{1, m, N}, n);
    terms.push_back({"H_{" + std::to_string(m) + "," + std::to_string(N) + "}", x});
    rhs += coef_v(m, N) * x;
  }
  return make_report("classical_to_pw", {{"N", N}, {"n", n}}, hurwitz_H(n), rhs, std::move(terms));
}

// H(n) = 2^-w(N) sum_{m | N} H^(m, N/m)(n)
inline IdentityReport classical_to_lsz(const Params& prm) {
  const i64 N = detail::need(prm, "N"), n = detail::need(prm, "n");
  detail::require_odd_squarefree(N, "N");
  detail::require_nonnegative(n);
  Rational sum = 0;
  std::vector<Term> terms;
  for (i64 m : divisors(N)) {
    const Rational x = lsz_class_number(m, N / m, n);
    terms.push_back({"H^(" + std::to_string(m) + "," + std::to_string(N / m) + ")", x});
    sum += x;
  }
  return make_report("classical_to_lsz", {{"N", N}, {"n", n}}, hurwitz_H(n), sum * detail::pow2(-omega(N)), std::move(terms));
}

inline void require_lsz_pair(i64 N1, i64 N2) {
  detail::require_odd_squarefree(N1, "N1");
  detail::require_odd_squarefree(N2, "N2");
  detail::require_coprime(N1, N2, "N1 and N2");
}

// H^(N1,N2)(n) = 2 H^(N1/q,N2)(n) - H^(N1/q,N2 q)(n)
inline IdentityReport lsz_shift_lemma(const Params& prm) {
  const i64 N1 = detail::need(prm, "N1"), N2 = detail::need(prm, "N2"), q = detail::need(prm, "q"), n = detail::need(prm, "n");
  require_lsz_pair(N1, N2);
  if (N1 == 1) throw HypothesisError("N1 must be greater than 1");
  detail::require_prime(q, "q");
  detail::require_divides(q, N1, "q");
  detail::require_nonnegative(n);
  const Rational a = lsz_class_number(N1 / q, N2, n), b = lsz_class_number(N1 / q, N2 * q, n);
  return make_report("lsz_shift_lemma", {{"N1", N1}, {"N2", N2}, {"q", q}, {"n", n}}, lsz_class_number(N1, N2, n), 2 * a - b,
                     {{"H^(N1/q,N2)", a}, {"H^(N1/q,N2 q)", b}});
}

// H^(N1,N2)(p^2 n) - p H^(N1,N2)(n) = H^(N1 p,N2)(p^2 n), or with argument n
// on the right when variant = 1.
inline IdentityReport gauss_general(const Params& prm) {
  const i64 N1 = detail::need(prm, "N1"), N2 = detail::need(prm, "N2"), p = detail::need(prm, "p"), n = detail::need(prm, "n");
  const i64 variant = detail::get_or(prm, "variant", 0);
  require_lsz_pair(N1, N2);
  detail::require_prime(p, "p");
  detail::require_coprime(p, N1 * N2, "p and N1 N2");
  detail::require_nonnegative(n);
  if (variant != 0 && variant != 1) throw UsageError("--variant must be 0 or 1");
  if (variant == 1 && p == 2 && !(n == 0 || is_discriminant(-n)))
    throw HypothesisError("variant 1 with p = 2 needs -n to be a discriminant");
  const i64 pn = checked_mul(p * p, n);
  const Rational big = lsz_class_number(N1, N2, pn), small = lsz_class_number(N1, N2, n);
  const Rational rhs = lsz_class_number(N1 * p, N2, variant == 1 ? n : pn);
  return make_report("gauss_general", {{"N1", N1}, {"N2", N2}, {"p", p}, {"n", n}, {"variant", variant}}, big - p * small, rhs,
                     {{"H^(N1,N2)(p^2 n)", big}, {"H^(N1,N2)(n)", small}});
}

// H^(p,N2)(4n) - 2 H^(p,N2)(n) = H^(2,N2)(4 p^2 n) - p H^(2,N2)(4n)
inline IdentityReport cor_4_9(const Params& prm) {
  const i64 p = detail::need(prm, "p"), N2 = detail::need(prm, "N2"), n = detail::need(prm, "n");
  detail::require_prime(p, "p");
  if (p == 2) throw HypothesisError("p must be odd");
  detail::require_odd_squarefree(N2, "N2");
  detail::require_coprime(p, N2, "p and N2");
  detail::require_nonnegative(n);
  const Rational lhs = lsz_class_number(p, N2, 4 * n) - 2 * lsz_class_number(p, N2, n);
  const Rational rhs = lsz_class_number(2, N2, checked_mul(4 * p * p, n)) - p * lsz_class_number(2, N2, 4 * n);
  return make_report("cor_4_9", {{"p", p}, {"N2", N2}, {"n", n}}, lhs, rhs);
}

// sum over Gamma0(p)-orbits of 2/|stab| = 4(p+1)/p H_{1,p}(n) - 2(p+1)/(p-1) H_{p,p}(n)
inline IdentityReport bm4(const Params& prm) {
  const i64 p = detail::need(prm, "p"), n = detail::need(prm, "n");
  detail::require_prime(p, "p");
  detail::require_discriminant_index(n);
  const auto orbits = gamma0_orbits(p, n, true);
  Rational lhs = 0;
  for (const auto& r : orbits.representatives) lhs += make_rational(2, r.stabilizer_order);
  const Rational h1 = pw_class_number(PWParams{1, 1, p}, n), hp = pw_class_number(PWParams{1, p, p}, n);
  const Rational rhs = make_rational(4 * (p + 1), p) * h1 - make_rational(2 * (p + 1), p - 1) * hp;
  return make_report("bm4", {{"p", p}, {"n", n}}, lhs, rhs,
                     {{"orbits", Rational{static_cast<long>(orbits.count())}}, {"H_{1,p}(n)", h1}, {"H_{p,p}(n)", hp}});
}

// 12 X(4n) - 24 X(n) = 4 r3(n) - 2 (r3(p^2 n) - p r3(n)), X the weighted orbit sum.
inline IdentityReport main4(const Params& prm) {
  const i64 p = detail::need(prm, "p"), n = detail::need(prm, "n");
  detail::require_prime(p, "p");
  if (p == 2) throw HypothesisError("p must be odd");
  detail::require_discriminant_index(n);
  const auto big = gamma0_orbits(p, 4 * n, true), small = gamma0_orbits(p, n, true);
  Rational x4 = 0, x1 = 0;
  for (const auto& r : big.representatives) x4 += make_rational(2, r.stabilizer_order);
  for (const auto& r : small.representatives) x1 += make_rational(2, r.stabilizer_order);
  const i64 a = r3(n), b = r3(checked_mul(p * p, n));
  const Rational rhs = Rational{static_cast<long>(4 * a - 2 * (b - p * a))};
  return make_report("main4", {{"p", p}, {"n", n}}, 12 * x4 - 24 * x1, rhs,
                     {{"orbits(-4n)", Rational{static_cast<long>(big.count())}},
                      {"orbits(-n)", Rational{static_cast<long>(small.count())}},
                      {"weighted(-4n)", x4},
                      {"weighted(-n)", x1},
                      {"r3(n)", Rational{static_cast<long>(a)}},
                      {"r3(p^2 n)", Rational{static_cast<long>(b)}}});
}

// sum_{G_{4N,16N^2,No}} theta/|Aut| = 2^{-w(N)-1} sum H^(No, N/No)(n) q^n
inline IdentityReport genus_theta(const Params& prm, i64 truncation) {
  const i64 N = detail::need(prm, "N"), No = detail::need(prm, "aniso");
  detail::require_truncation(truncation, 10'000);
  const auto g = genus_contents(N, No);
  const QSeries lhs = weighted_genus_theta(g, truncation);
  const QSeries rhs = lsz_series(No, N / No, truncation) * detail::pow2(-omega(N) - 1);
  return make_report("genus_theta", {{"N", N}, {"aniso", No}, {"truncation", truncation}}, lhs, rhs,
                     {{"classes", Rational{static_cast<long>(g.classes.size())}}, {"mass", g.mass()}});
}

// H^(Ne, N/Ne) = 2^{w(N)+1} (sum_{G_{4N/q,16(N/q)^2,Ne/q}} - sum_{G_{4N,16N^2,Ne/q}})
inline IdentityReport even_genus(const Params& prm, i64 truncation) {
  const i64 N = detail::need(prm, "N"), Ne = detail::need(prm, "even"), q = detail::need(prm, "q");
  detail::require_odd_squarefree(N, "N");
  detail::require_divides(Ne, N, "even");
  if (Ne == 1 || omega(Ne) % 2 != 0) throw HypothesisError("even=" + std::to_string(Ne) + " must have a positive even number of prime factors");
  detail::require_prime(q, "q");
  detail::require_divides(q, Ne, "q");
  detail::require_truncation(truncation, 10'000);
  const QSeries lhs = lsz_series(Ne, N / Ne, truncation);
  const auto shrunk = genus_contents(N, Ne / q, q), full = genus_contents(N, Ne / q);
  const QSeries rhs = (weighted_genus_theta(shrunk, truncation) - weighted_genus_theta(full, truncation)) * detail::pow2(omega(N) + 1);
  return make_report("even_genus", {{"N", N}, {"even", Ne}, {"q", q}, {"truncation", truncation}}, lhs, rhs,
                     {{"mass(level 4N/q)", shrunk.mass()}, {"mass(level 4N)", full.mass()}});
}

// (2^w(N/m) m/N) sum H_{m,N}(n) q^n = 2^{w(N)+1} sum_{g | N/m} u(g) T_{mg}
// q-choices come in as parameters "q<mg>"; the default is the least prime of mg.
inline IdentityReport main_theta(const Params& prm, i64 truncation) {
  const i64 m = detail::need(prm, "m"), N = detail::need(prm, "N");
  detail::require_odd_squarefree(N, "N");
  if (N == 1) throw HypothesisError("N must be greater than 1");
  detail::require_divides(m, N, "m");
  if (m == 1) throw HypothesisError("m must be greater than 1");
  detail::require_truncation(truncation, 10'000);
  Params echo{{"m", m}, {"N", N}, {"truncation", truncation}};
  for (const auto& [k, v] : prm)
    if (k.size() > 1 && k[0] == 'q') {
      const i64 d = std::stoll(k.substr(1));
      if (d < 1 || N % d != 0 || d % m != 0 || moebius(d) != 1)
        throw HypothesisError("--" + k + ": " + std::to_string(d) + " is not some mg with mu(mg) = +1");
      echo[k] = v;
    }
  const QSeries lhs = pw_series(1, m, N, truncation) * (detail::pow2(omega(N / m)) * make_rational(m, N));
  QSeries rhs(truncation);
  std::vector<Term> terms;
  for (i64 g : divisors(N / m)) {
    const i64 d = m * g;
    std::optional<i64> q;
    if (auto it = prm.find("q" + std::to_string(d)); it != prm.end()) q = it->second;
    if (moebius(d) == 1 && !q) q = prime_divisors(d).front();
    if (q) echo["q" + std::to_string(d)] = *q;
    const QSeries t = t_series(d, N, q, truncation);
    terms.push_back({"T_" + std::to_string(d), t});
    rhs += t * coef_u(g, m, N);
  }
  rhs *= detail::pow2(omega(N) + 1);
  return make_report("main_theta", echo, lhs, rhs, std::move(terms));
}

// theta_Q - (6/5) sum H_{11,11}(n) q^n = c f, with f the monic normalization
// of (theta(11 tau) eta(2 tau) eta(22 tau)) | U4 and theta(tau) = sum_{n in Z} q^{n^2}.
// c = 6/5 by default; printed = 1 uses c = 1/5 instead.
inline QSeries cusp_form_level44(i64 truncation) {
  const QSeries lifted = unary_theta_scaled(11, 4 * truncation) * eta_product({{2, 1}, {22, 1}}, 4 * truncation);
  QSeries f = u4(lifted);
  for (i64 n = 0; n <= f.truncation(); ++n)
    if (f[n] != 0) {
      const Rational lead = f[n];
      f *= 1 / lead;
      break;
    }
  return f;
}

inline IdentityReport cusp_p11(const Params& prm, i64 truncation) {
  const i64 printed = detail::get_or(prm, "printed", 0);
  if (printed != 0 && printed != 1) throw UsageError("--printed must be 0 or 1");
  detail::require_truncation(truncation, 2'000);
  const TernaryForm q{3, 15, 15, -14, -2, -2};
  const QSeries theta = theta_series(q, truncation);
  const QSeries h = pw_series(1, 11, 11, truncation);
  const QSeries f = cusp_form_level44(truncation);
  const Rational c = printed ? make_rational(1, 5) : make_rational(6, 5);
  return make_report("cusp_p11", {{"truncation", truncation}, {"printed", printed}}, theta - h * make_rational(6, 5), f * c,
                     {{"theta_Q", theta}, {"H_{11,11}", h}, {"f", f}});
}

// Both families {H_{m,N}} and {H^(m,N/m)} (m | N, m > 1) have full rank
// 2^w(N) - 1 at the given truncation, and the change of basis from the
// second to the first is triangular with the predicted coefficients.
// Encoded as vectors: [rank_pw, rank_lsz, triangular, c_{m,d} ...] on the
// left against [count, count, 1, predicted c_{m,d} ...] on the right.
inline IdentityReport basis_dimension(const Params& prm, i64 truncation) {
  const i64 N = detail::need(prm, "N");
  detail::require_odd_squarefree(N, "N");
  if (N == 1) throw HypothesisError("N must be greater than 1");
  detail::require_truncation(truncation, 2'000);
  std::vector<i64> ms;
  for (i64 m : divisors(N))
    if (m > 1) ms.push_back(m);
  std::stable_sort(ms.begin(), ms.end(), [](i64 a, i64 b) { return divisors(a).size() < divisors(b).size(); });
  const std::size_t k = ms.size();

  std::vector<QSeries> pw, lsz;
  for (i64 m : ms) {
    pw.push_back(pw_series(1, m, N, truncation));
    lsz.push_back(lsz_series(m, N / m, truncation));
  }
  auto as_matrix = [&](const std::vector<QSeries>& fam) {
    RationalMatrix a;
    for (const auto& s : fam) {
      std::vector<Rational> row;
      for (i64 n = 0; n <= truncation; ++n) row.push_back(s[n]);
      a.push_back(std::move(row));
    }
    return a;
  };
  const std::size_t rank_pw = rank(as_matrix(pw)), rank_lsz = rank(as_matrix(lsz));
  const auto coeffs = solve_rows(lsz, pw);

  const i64 len = 3 + static_cast<i64>(k * k) - 1;
  QSeries lhs(len), rhs(len);
  lhs[0] = Rational{static_cast<long>(rank_pw)};
  lhs[1] = Rational{static_cast<long>(rank_lsz)};
  rhs[0] = rhs[1] = Rational{static_cast<long>(k)};
  rhs[2] = 1;
  bool triangular = coeffs.has_value();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const i64 m = ms[i], d = ms[j];
      Rational predicted = 0;
      if (d % m == 0) predicted = coef_u(d / m, m, N) * make_rational(N, m) / detail::pow2(omega(N / m));
      rhs[3 + static_cast<i64>(i * k + j)] = predicted;
      if (coeffs) {
        lhs[3 + static_cast<i64>(i * k + j)] = (*coeffs)[i][j];
        if (j < i && (*coeffs)[i][j] != 0) triangular = false;
      }
    }
  lhs[2] = triangular ? 1 : 0;
  return make_report("basis_dimension", {{"N", N}, {"truncation", truncation}}, lhs, rhs,
                     {{"family_size", Rational{static_cast<long>(k)}},
                      {"rank_pw", Rational{static_cast<long>(rank_pw)}},
                      {"rank_lsz", Rational{static_cast<long>(rank_lsz)}}});
}

}  // namespace checks

// --------------------------------------------------------------- registry

struct IdentityEntry {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  bool series;              // uses a truncation
  i64 default_truncation;   // when series
  bool q_choices;           // accepts q<mg> parameters
  std::function<IdentityReport(const Params&, i64)> run;
};

inline const std::vector<IdentityEntry>& registry() {
  using namespace checks;
  auto scalar = [](IdentityReport (*f)(const Params&)) {
    return [f](const Params& p, i64) { return f(p); };
  };
  static const std::vector<IdentityEntry> entries{
      {"gauss_three_squares", {"n"}, {}, false, 0, false, scalar(gauss_three_squares)},
      {"kronecker_hurwitz", {"n"}, {}, false, 0, false, scalar(kronecker_hurwitz)},
      {"r3_is_lsz", {"n"}, {}, false, 0, false, scalar(r3_is_lsz)},
      {"hurwitz_local_product", {"n"}, {}, false, 0, false, scalar(hurwitz_local_product)},
      {"local_factor_relations", {"p", "n", "part"}, {}, false, 0, false, scalar(local_factor_relations)},
      {"pw_local_product", {"m", "N", "n"}, {"ell"}, false, 0, false, scalar(pw_local_product)},
      {"pw_to_lsz", {"m", "N", "n"}, {"local"}, false, 0, false, scalar(pw_to_lsz)},
      {"lsz_to_pw", {"m", "N", "n"}, {"local"}, false, 0, false, scalar(lsz_to_pw)},
      {"nontrivial_char", {"ell", "m", "N", "n"}, {"reading"}, false, 0, false, scalar(nontrivial_char)},
      {"ape3", {"ell", "m", "N", "n"}, {}, false, 0, false, scalar(ape3)},
      {"classical_to_pw", {"N", "n"}, {}, false, 0, false, scalar(classical_to_pw)},
      {"classical_to_lsz", {"N", "n"}, {}, false, 0, false, scalar(classical_to_lsz)},
      {"lsz_shift_lemma", {"N1", "N2", "q", "n"}, {}, false, 0, false, scalar(lsz_shift_lemma)},
      {"gauss_general", {"N1", "N2", "p", "n"}, {"variant"}, false, 0, false, scalar(gauss_general)},
      {"cor_4_9", {"p", "N2", "n"}, {}, false, 0, false, scalar(cor_4_9)},
      {"bm4", {"p", "n"}, {}, false, 0, false, scalar(bm4)},
      {"main4", {"p", "n"}, {}, false, 0, false, scalar(main4)},
      {"genus_theta", {"N", "aniso"}, {}, true, 50, false, genus_theta},
      {"even_genus", {"N", "even", "q"}, {}, true, 50, false, even_genus},
      {"main_theta", {"m", "N"}, {}, true, 50, true, main_theta},
      {"cusp_p11", {}, {"printed"}, true, 48, false, cusp_p11},
      {"basis_dimension", {"N"}, {}, true, 100, false, basis_dimension},
  };
  return entries;
}

inline const IdentityEntry& find_identity(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw UsageError("unknown identity '" + name + "'");
}

inline IdentityReport verify(const std::string& name, const Params& params, std::optional<i64> truncation = std::nullopt) {
  const auto& e = find_identity(name);
  for (const auto& [k, v] : params) {
    const bool known = std::find(e.required.begin(), e.required.end(), k) != e.required.end() ||
                       std::find(e.optional.begin(), e.optional.end(), k) != e.optional.end() ||
                       (e.q_choices && k.size() > 1 && k[0] == 'q' &&
                        std::all_of(k.begin() + 1, k.end(), [](char c) { return c >= '0' && c <= '9'; }));
    if (!known) throw UsageError("identity '" + name + "' does not take --" + k);
  }
  for (const auto& k : e.required)
    if (!params.count(k)) throw UsageError("identity '" + name + "' needs --" + k);
  if (truncation && !e.series) throw UsageError("identity '" + name + "' is not a series identity; --prec does not apply");
  const i64 M = truncation.value_or(e.default_truncation);
  if (M < 0) throw UsageError("truncation must be non-negative");
  return e.run(params, M);
}

struct RangeSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool stopped_early = false;
  std::vector<IdentityReport> reports;  // in grid order
};

// Evaluates every grid point; results keep grid order whatever the worker count.
inline RangeSummary verify_range(const std::string& name, const std::vector<Params>& grid,
                                 std::optional<i64> truncation = std::nullopt, bool early_exit = false,
                                 unsigned workers = 0) {
  find_identity(name);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(grid.size(), 1)));

  std::vector<std::optional<IdentityReport>> slots(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        slots[i] = verify(name, grid[i], truncation);
        if (early_exit && !slots[i]->pass) stop = true;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  RangeSummary s;
  for (auto& slot : slots) {
    if (!slot) {
      s.stopped_early = true;
      continue;
    }
    ++s.total;
    (slot->pass ? s.passed : s.failed) += 1;
    s.reports.push_back(std::move(*slot));
  }
  return s;
}

// ------------------------------------------------------------------ grids

enum class Scale { smoke, desk };

namespace detail {

inline std::vector<i64> discriminant_indices(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 n = std::max<i64>(lo, 1); n <= hi; ++n)
    if (is_discriminant(-n)) out.push_back(n);
  return out;
}

inline std::vector<i64> odd_squarefree_upto(i64 bound) {
  std::vector<i64> out;
  for (i64 k = 1; k <= bound; k += 2)
    if (is_squarefree(k)) out.push_back(k);
  return out;
}

// (N1, N2) odd, square-free, coprime, N1 N2 <= bound.
inline std::vector<std::pair<i64, i64>> coprime_pairs(i64 bound) {
  std::vector<std::pair<i64, i64>> out;
  for (i64 a : odd_squarefree_upto(bound))
    for (i64 b : odd_squarefree_upto(bound / a))
      if (std::gcd(a, b) == 1) out.emplace_back(a, b);
  return out;
}

// Every assignment of a prime q | d to each d = m g with mu(d) = +1.
inline std::vector<Params> q_choice_grid(i64 m, i64 N) {
  std::vector<Params> out{Params{{"m", m}, {"N", N}}};
  for (i64 g : divisors(N / m)) {
    const i64 d = m * g;
    if (moebius(d) != 1) continue;
    std::vector<Params> next;
    for (const auto& base : out)
      for (i64 q : prime_divisors(d)) {
        Params p = base;
        p["q" + std::to_string(d)] = q;
        next.push_back(p);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

// Parameter grid for an identity at the given scale. The desk grids are the
// ranges the acceptance suite covers.
inline std::vector<Params> standard_grid(const std::string& name, Scale scale) {
  const bool desk = scale == Scale::desk;
  std::vector<Params> g;
  const std::vector<i64> levels = desk ? std::vector<i64>{5, 7, 11, 15, 21, 33, 35, 105} : std::vector<i64>{5, 15};
  auto n_cap = [&](i64 N) { return desk ? (N == 105 ? 200 : 500) : 40; };

  if (name == "gauss_three_squares" || name == "r3_is_lsz") {
    for (i64 n = 0; n <= (desk ? 1000 : 100); ++n) g.push_back({{"n", n}});
  } else if (name == "kronecker_hurwitz") {
    for (i64 n = 1; n <= (desk ? 500 : 50); ++n) g.push_back({{"n", n}});
  } else if (name == "hurwitz_local_product") {
    for (i64 n : detail::discriminant_indices(1, desk ? 2000 : 200)) g.push_back({{"n", n}});
  } else if (name == "local_factor_relations") {
    for (i64 p = 2; p <= (desk ? 50 : 13); ++p) {
      if (!is_prime(p)) continue;
      for (i64 n : detail::discriminant_indices(1, desk ? 2000 : 100))
        for (i64 part = 1; part <= 4; ++part) g.push_back({{"p", p}, {"n", n}, {"part", part}});
    }
  } else if (name == "pw_local_product") {
    for (i64 N : levels)
      for (i64 ell : divisors(N))
        for (i64 m : divisors(N))
          for (i64 n = 1; n <= n_cap(N) / 2; ++n) g.push_back({{"ell", ell}, {"m", m}, {"N", N}, {"n", n}});
  } else if (name == "pw_to_lsz" || name == "lsz_to_pw") {
    for (i64 N : levels)
      for (i64 m : divisors(N))
        for (i64 n = 0; n <= n_cap(N); ++n) g.push_back({{"m", m}, {"N", N}, {"n", n}});
  } else if (name == "nontrivial_char" || name == "ape3") {
    for (i64 N : levels)
      for (i64 ell : divisors(N)) {
        if (ell == 1) continue;
        for (i64 m : divisors(N))
          for (i64 n = 0; n <= n_cap(N); ++n) g.push_back({{"ell", ell}, {"m", m}, {"N", N}, {"n", n}});
      }
  } else if (name == "classical_to_pw" || name == "classical_to_lsz") {
    for (i64 N : levels)
      for (i64 n = 0; n <= n_cap(N); ++n) g.push_back({{"N", N}, {"n", n}});
  } else if (name == "lsz_shift_lemma") {
    for (auto [N1, N2] : detail::coprime_pairs(35)) {
      if (N1 == 1) continue;
      for (i64 q : prime_divisors(N1))
        for (i64 n = 0; n <= (desk ? 300 : 30); ++n) g.push_back({{"N1", N1}, {"N2", N2}, {"q", q}, {"n", n}});
    }
  } else if (name == "gauss_general") {
    for (i64 p : {3, 5, 7, 11, 13})
      for (auto [N1, N2] : detail::coprime_pairs(desk ? 35 : 15)) {
        if ((N1 * N2) % p == 0) continue;
        for (i64 variant : {0, 1})
          for (i64 n = 0; n <= (desk ? 300 : 30); ++n)
            g.push_back({{"N1", N1}, {"N2", N2}, {"p", p}, {"n", n}, {"variant", variant}});
      }
  } else if (name == "cor_4_9") {
    for (i64 p : {3, 5, 7, 11, 13})
      for (i64 N2 : detail::odd_squarefree_upto(35)) {
        if (N2 % p == 0) continue;
        for (i64 n = 0; n <= (desk ? 300 : 30); ++n) g.push_back({{"p", p}, {"N2", N2}, {"n", n}});
      }
  } else if (name == "bm4") {
    for (i64 p : {3, 5, 7, 11, 13})
      for (i64 n : detail::discriminant_indices(1, desk ? 200 : 40)) g.push_back({{"p", p}, {"n", n}});
  } else if (name == "main4") {
    g.push_back({{"p", 41}, {"n", 35}});
    g.push_back({{"p", 31}, {"n", 43}});
    for (i64 p : {3, 5, 7})
      for (i64 n : detail::discriminant_indices(1, desk ? 60 : 12)) g.push_back({{"p", p}, {"n", n}});
  } else if (name == "genus_theta") {
    for (i64 N : desk ? std::vector<i64>{5, 7, 11, 15, 21, 35} : std::vector<i64>{5, 7, 15})
      for (i64 d : divisors(N))
        if (omega(d) % 2 == 1) g.push_back({{"N", N}, {"aniso", d}});
  } else if (name == "even_genus") {
    for (i64 N : desk ? std::vector<i64>{15, 21, 35} : std::vector<i64>{15})
      for (i64 q : prime_divisors(N)) g.push_back({{"N", N}, {"even", N}, {"q", q}});
  } else if (name == "main_theta") {
    for (i64 N : desk ? std::vector<i64>{5, 7, 11, 15, 21, 35} : std::vector<i64>{5, 7, 15})
      for (i64 m : divisors(N)) {
        if (m == 1) continue;
        for (auto& p : detail::q_choice_grid(m, N)) g.push_back(p);
      }
  } else if (name == "cusp_p11") {
    g.push_back({});
  } else if (name == "basis_dimension") {
    for (i64 N : desk ? std::vector<i64>{5, 7, 11, 15, 35, 105} : std::vector<i64>{5, 15}) g.push_back({{"N", N}});
  } else {
    find_identity(name);
    throw std::logic_error("no grid for identity '" + name + "'");
  }
  return g;
}

}  // namespace hcn

#pragma once

// Binary quadratic forms ax^2 + bxy + cy^2: SL2(Z) reduction, class numbers
// by reduced-form enumeration (the Hurwitz oracle), and Gamma0(p)-orbits of
// forms with p | a together with their stabilizers.

#include "hurwitz/arith.hpp"
#include "hurwitz/cache.hpp"
#include "hurwitz/rational.hpp"
#include "hurwitz/report.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcn {

struct BinaryForm {
  i64 a = 0;
  i64 b = 0;
  i64 c = 0;

  i64 disc() const { return checked_add(checked_mul(b, b), -checked_mul(4, checked_mul(a, c))); }
  bool positive_definite() const { return a > 0 && disc() < 0; }
  i128 operator()(i64 x, i64 y) const {
    return static_cast<i128>(a) * x * x + static_cast<i128>(b) * x * y + static_cast<i128>(c) * y * y;
  }
  BinaryForm negated() const { return {-a, -b, -c}; }

  friend auto operator<=>(const BinaryForm&, const BinaryForm&) = default;
};

inline std::string to_string(const BinaryForm& f) {
  return "[" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + "]";
}

// [[alpha, beta], [gamma, delta]]
struct Mat2 {
  i64 alpha = 1;
  i64 beta = 0;
  i64 gamma = 0;
  i64 delta = 1;
};

// (f o M)(x, y) = f(alpha x + beta y, gamma x + delta y).
inline BinaryForm act(const BinaryForm& f, const Mat2& m) {
  auto narrow = [](i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("binary form coefficient overflow");
    return static_cast<i64>(v);
  };
  const i128 mid = 2 * static_cast<i128>(f.a) * m.alpha * m.beta +
                   static_cast<i128>(f.b) * (static_cast<i128>(m.alpha) * m.delta + static_cast<i128>(m.beta) * m.gamma) +
                   2 * static_cast<i128>(f.c) * m.gamma * m.delta;
  return {narrow(f(m.alpha, m.gamma)), narrow(mid), narrow(f(m.beta, m.delta))};
}

namespace detail {

inline void require_positive_definite(const BinaryForm& f) {
  if (!f.positive_definite()) throw std::invalid_argument("binary form " + to_string(f) + " is not positive definite");
}

// u, v with u a + v b = gcd(a, b).
inline i64 ext_gcd(i64 a, i64 b, i64& u, i64& v) {
  i64 old_r = a, r = b, old_u = 1, cu = 0, old_v = 0, cv = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_u -= q * cu;
    std::swap(old_u, cu);
    old_v -= q * cv;
    std::swap(old_v, cv);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_u = -old_u;
    old_v = -old_v;
  }
  u = old_u;
  v = old_v;
  return old_r;
}

}  // namespace detail

// Unique SL2(Z)-reduced representative: |b| <= a <= c, and b >= 0 if |b| = a or a = c.
inline BinaryForm reduce_sl2(BinaryForm f) {
  detail::require_positive_definite(f);
  const i64 d = f.disc();
  for (;;) {
    // Translate b into (-a, a].
    i64 b = mod_floor(f.b, 2 * f.a);
    if (b > f.a) b -= 2 * f.a;
    f.c = static_cast<i64>((static_cast<i128>(b) * b - d) / (4 * static_cast<i128>(f.a)));
    f.b = b;
    if (f.c < f.a) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    break;
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

// All SL2(Z)-reduced forms (primitive or not) of discriminant -n, n > 0.
inline std::vector<BinaryForm> reduced_forms(i64 n) {
  std::vector<BinaryForm> out;
  if (n <= 0 || !is_discriminant(-n)) return out;
  for (i64 a = 1; 3 * a * a <= n; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 num = b * b + n;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

// Order of the SL2(Z) automorphism group of a reduced positive definite form.
inline int sl2_automorphism_order(const BinaryForm& reduced) {
  if (reduced.a == reduced.b && reduced.b == reduced.c) return 6;
  if (reduced.b == 0 && reduced.a == reduced.c) return 4;
  return 2;
}

// Number of primitive positive definite classes of discriminant D < 0.
inline i64 class_number_h(i64 D) {
  if (D >= 0 || !is_discriminant(D)) throw std::invalid_argument("class_number_h: D must be a negative discriminant");
  i64 h = 0;
  for (const auto& f : reduced_forms(-D))
    if (std::gcd(std::gcd(f.a, f.b), f.c) == 1) ++h;
  return h;
}

// Hurwitz class number by exhaustive reduced-form counting, weights 2/|Aut|.
inline Rational hurwitz_H(i64 n) {
  if (n < 0) throw std::invalid_argument("hurwitz_H: n must be non-negative");
  if (n == 0) return make_rational(-1, 12);
  if (!is_discriminant(-n)) return 0;
  static MemoTable<i64, Rational> memo;
  return memo.get(n, [n] {
    Rational total = 0;
    for (const auto& f : reduced_forms(n)) total += make_rational(2, sl2_automorphism_order(f));
    return total;
  });
}

// --------------------------------------------------------------- Gamma0(p)

// Primitive (alpha, gamma) with p | gamma and f(alpha, gamma) = target.
inline std::vector<std::pair<i64, i64>> primitive_representations(const BinaryForm& f, i64 target, i64 p) {
  std::vector<std::pair<i64, i64>> out;
  const i64 abs_disc = -f.disc();
  if (target <= 0) return out;
  // 4a f(x, y) = (2ax + by)^2 + |disc| y^2.
  const i64 y_max = static_cast<i64>(floor_sqrt(4 * static_cast<i128>(f.a) * target / abs_disc));
  for (i64 y = -y_max; y <= y_max; ++y) {
    if (y % p != 0) continue;
    // a x^2 + (b y) x + (c y^2 - target) = 0
    const i128 lin = static_cast<i128>(f.b) * y;
    const i128 con = static_cast<i128>(f.c) * y * y - target;
    const i128 dd = lin * lin - 4 * static_cast<i128>(f.a) * con;
    if (dd < 0) continue;
    const i128 s = floor_sqrt(dd);
    if (s * s != dd) continue;
    for (int sign : {1, -1}) {
      if (s == 0 && sign == -1) break;
      const i128 root = -lin + sign * s;
      if (root % (2 * f.a) != 0) continue;
      const auto x = static_cast<i64>(root / (2 * f.a));
      if (std::gcd(x, y) != 1) continue;
      out.emplace_back(x, y);
    }
  }
  return out;
}

// Completes first column (alpha, gamma) to M in SL2(Z) with f o M = g, if possible.
// The second column is free up to adding t (alpha, gamma); the middle
// coefficient then moves by 2 t g.a.
inline std::optional<Mat2> complete_to(const BinaryForm& f, const BinaryForm& g, i64 alpha, i64 gamma) {
  i64 u = 0, v = 0;
  if (detail::ext_gcd(alpha, gamma, u, v) != 1) return std::nullopt;
  Mat2 m{alpha, -v, gamma, u};
  const i64 b0 = act(f, m).b;
  const i64 diff = g.b - b0;
  if (diff % (2 * g.a) != 0) return std::nullopt;
  const i64 t = diff / (2 * g.a);
  m.beta += t * alpha;
  m.delta += t * gamma;
  if (act(f, m) != g) return std::nullopt;
  return m;
}

namespace detail {

inline void require_gamma0_pair(const BinaryForm& f, const BinaryForm& g, i64 p) {
  require_positive_definite(f);
  require_positive_definite(g);
  if (f.disc() != g.disc()) throw std::invalid_argument("gamma0_equivalent: discriminants differ");
  if (p < 1 || f.a % p != 0 || g.a % p != 0) throw std::invalid_argument("gamma0_equivalent: p must divide both leading coefficients");
}

}  // namespace detail

inline std::optional<Mat2> gamma0_transform(const BinaryForm& f, const BinaryForm& g, i64 p) {
  detail::require_gamma0_pair(f, g, p);
  for (auto [alpha, gamma] : primitive_representations(f, g.a, p))
    if (auto m = complete_to(f, g, alpha, gamma)) return m;
  return std::nullopt;
}

inline bool gamma0_equivalent(const BinaryForm& f, const BinaryForm& g, i64 p) {
  return gamma0_transform(f, g, p).has_value();
}

// |{M in Gamma0(p) : f o M = f}|, always even since it contains -I.
inline int stabilizer_order(const BinaryForm& f, i64 p) {
  detail::require_gamma0_pair(f, f, p);
  int count = 0;
  for (auto [alpha, gamma] : primitive_representations(f, f.a, p))
    if (complete_to(f, f, alpha, gamma)) ++count;
  return count;
}

struct OrbitRep {
  BinaryForm form;
  int stabilizer_order;
};

struct OrbitSet {
  i64 p = 0;
  i64 disc = 0;
  std::vector<OrbitRep> representatives;
  bool includes_negatives = false;

  std::size_t count() const { return representatives.size(); }
};

// Leading coefficients up to this value meet every Gamma0(p)-orbit of
// positive definite forms in Q_{p,-n}. A reduced basis (v1, v2) of the
// index-p lattice {(x, y) : p | y} under f has f(v1) f(v2) <= p^2 n / 3. If
// v1 is primitive in Z^2 it is a valid first column; otherwise v1 = p w,
// f(v1) >= p^2, and the primitive v2 has f(v2) <= n / 3.
inline i64 gamma0_search_bound(i64 p, i64 n) {
  i64 k = 0;
  while (3 * static_cast<i128>(k) * k < static_cast<i128>(p) * p * n) ++k;
  return std::max(2 * k, (n + 2) / 3);
}

inline OrbitSet gamma0_orbits(i64 p, i64 n, bool include_negatives = true) {
  OrbitSet set;
  set.p = p;
  set.disc = -n;
  set.includes_negatives = include_negatives;
  if (n <= 0 || !is_discriminant(-n)) return set;
  if (!is_prime(p)) throw std::invalid_argument("gamma0_orbits: p must be prime");

  const i64 bound = gamma0_search_bound(p, n);
  std::vector<OrbitRep> reps;
  for (i64 a = p; a <= bound; a += p) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i128 num = static_cast<i128>(b) * b + n;
      if (num % (4 * a) != 0) continue;
      const BinaryForm cand{a, b, static_cast<i64>(num / (4 * a))};
      bool seen = false;
      for (const auto& r : reps) {
        if (gamma0_equivalent(r.form, cand, p)) {
          seen = true;
          break;
        }
      }
      if (!seen) reps.push_back({cand, stabilizer_order(cand, p)});
    }
  }
  set.representatives = reps;
  if (include_negatives)
    for (const auto& r : reps) set.representatives.push_back({r.form.negated(), r.stabilizer_order});
  return set;
}

// Sum over all orbits, positive and negative definite, of 2 / |Gamma0(p)_Q|.
inline Rational weighted_orbit_sum(i64 p, i64 n) {
  Rational total = 0;
  for (const auto& r : gamma0_orbits(p, n, true).representatives) total += make_rational(2, r.stabilizer_order);
  return total;
}

// sum_r H(4n - r^2) + lambda(n) = 2 sigma_1(n), H from form counting, with
// lambda(n) = sum_{ab = n} min(a, b). The max(a, b) variant fails already at n = 2.
inline IdentityReport kronecker_hurwitz_check(i64 n) {
  if (n < 1) throw HypothesisError("kronecker_hurwitz: n must be positive");
  Rational class_sum = 0;
  for (i64 r = -floor_sqrt(4 * n); r * r <= 4 * n; ++r) class_sum += hurwitz_H(4 * n - r * r);
  const Rational lam = to_rational(lambda_min(n, 1));
  const Rational rhs = to_rational(2 * sigma(n, 1));
  return make_report("kronecker_hurwitz", {{"n", n}}, class_sum + lam, rhs,
                     {{"sum_r H(4n-r^2)", class_sum}, {"sum min(a,b)", lam}});
}

}  // namespace hcn

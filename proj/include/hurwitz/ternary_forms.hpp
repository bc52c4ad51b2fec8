#pragma once

// Positive definite integral ternary forms
//   Q(x, y, z) = a x^2 + b y^2 + c z^2 + r yz + s xz + t xy
// with Gram matrix M_Q = [[2a, t, s], [t, 2b, r], [s, r, 2c]].
//
// Everything here is exact integer arithmetic: discriminant and level from
// the adjugate, p-adic anisotropy via Hilbert symbols of a rational
// diagonalization, short-vector enumeration by completing squares over Z,
// and isometry search by backtracking over short vectors.

#include "hurwitz/arith.hpp"
#include "hurwitz/cache.hpp"
#include "hurwitz/qseries.hpp"
#include "hurwitz/rational.hpp"
#include "hurwitz/report.hpp"

#include <array>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcn {

using Vec3 = std::array<i64, 3>;
using Mat3 = std::array<std::array<i64, 3>, 3>;

struct TernaryForm {
  i64 a = 0, b = 0, c = 0;
  i64 r = 0, s = 0, t = 0;

  Mat3 gram() const { return {{{2 * a, t, s}, {t, 2 * b, r}, {s, r, 2 * c}}}; }

  i64 operator()(i64 x, i64 y, i64 z) const {
    return a * x * x + b * y * y + c * z * z + r * y * z + s * x * z + t * x * y;
  }
  i64 operator()(const Vec3& v) const { return (*this)(v[0], v[1], v[2]); }

  friend auto operator<=>(const TernaryForm&, const TernaryForm&) = default;
};

inline std::string to_string(const TernaryForm& q) {
  return "[" + std::to_string(q.a) + "," + std::to_string(q.b) + "," + std::to_string(q.c) + "," + std::to_string(q.r) +
         "," + std::to_string(q.s) + "," + std::to_string(q.t) + "]";
}

// v^T M w
inline i64 bilinear(const Mat3& m, const Vec3& v, const Vec3& w) {
  i64 total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) total += v[i] * m[i][j] * w[j];
  return total;
}

// 4abc + rst - ar^2 - bs^2 - ct^2, i.e. det(M_Q) / 2.
inline i64 raw_discriminant(const TernaryForm& q) {
  return 4 * q.a * q.b * q.c + q.r * q.s * q.t - q.a * q.r * q.r - q.b * q.s * q.s - q.c * q.t * q.t;
}

inline bool is_positive_definite(const TernaryForm& q) {
  return q.a > 0 && 4 * q.a * q.b - q.t * q.t > 0 && raw_discriminant(q) > 0;
}

namespace detail {

inline void require_positive_definite(const TernaryForm& q) {
  if (!is_positive_definite(q)) throw std::invalid_argument("ternary form " + to_string(q) + " is not positive definite");
}

}  // namespace detail

inline i64 discriminant(const TernaryForm& q) {
  detail::require_positive_definite(q);
  return raw_discriminant(q);
}

// Least N with N M_Q^{-1} integral with even diagonal.
inline i64 level(const TernaryForm& q) {
  detail::require_positive_definite(q);
  const Mat3 m = q.gram();
  const i64 det = 2 * raw_discriminant(q);
  auto cof = [&](int i, int j) {
    const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
    return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
  };
  i64 lvl = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const i64 adj = cof(j, i);  // symmetric, but keep the transpose honest
      const i64 mod = (i == j) ? 2 * det : det;
      const i64 need = mod / std::gcd(mod, adj < 0 ? -adj : adj);
      lvl = std::lcm(lvl, need);
    }
  return lvl;
}

// ------------------------------------------------------------ p-adic

// Hilbert symbol (a, b)_p for nonzero integers a, b and prime p.
inline int hilbert_symbol(i64 a, i64 b, i64 p) {
  if (a == 0 || b == 0) throw std::domain_error("hilbert_symbol: arguments must be nonzero");
  int alpha = 0, beta = 0;
  while (a % p == 0) {
    a /= p;
    ++alpha;
  }
  while (b % p == 0) {
    b /= p;
    ++beta;
  }
  if (p != 2) {
    int sign = ((static_cast<i64>(alpha) * beta % 2) == 1 && (p % 4 == 3)) ? -1 : 1;
    if (beta % 2 == 1) sign *= jacobi(a, p);
    if (alpha % 2 == 1) sign *= jacobi(b, p);
    return sign;
  }
  auto eps = [](i64 u) { return mod_floor(u, 4) == 3 ? 1 : 0; };
  auto omg = [](i64 u) {
    const i64 r = mod_floor(u, 8);
    return (r == 3 || r == 5) ? 1 : 0;
  };
  const int e = eps(a) * eps(b) + alpha * omg(b) + beta * omg(a);
  return e % 2 == 0 ? 1 : -1;
}

// A diagonal form <d1, d2, d3> is isotropic over Q_p iff
// prod_{i<j} (d_i, d_j)_p = (-1, -d1 d2 d3)_p.
inline bool is_anisotropic(const TernaryForm& q, i64 p) {
  detail::require_positive_definite(q);
  if (!is_prime(p)) throw std::invalid_argument("is_anisotropic: p must be prime");
  const Mat3 m = q.gram();
  const i64 m1 = m[0][0];
  const i64 m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const i64 m3 = 2 * raw_discriminant(q);
  // Rational Gram-Schmidt gives <m1, m2/m1, m3/m2>; clear denominators by squares.
  const std::array<i64, 3> d{m1, checked_mul(m1, m2), checked_mul(m2, m3)};
  const int hasse = hilbert_symbol(d[0], d[1], p) * hilbert_symbol(d[0], d[2], p) * hilbert_symbol(d[1], d[2], p);
  // (-1, -d1 d2 d3) = (-1, -1) prod (-1, d_i), by bilinearity.
  int target = hilbert_symbol(-1, -1, p);
  for (i64 x : d) target *= hilbert_symbol(-1, x, p);
  return hasse != target;
}

// Primes (necessarily dividing 2 disc) at which q is anisotropic.
inline std::vector<i64> anisotropic_primes(const TernaryForm& q) {
  std::vector<i64> out;
  for (i64 p : prime_divisors(2 * discriminant(q)))
    if (is_anisotropic(q, p)) out.push_back(p);
  return out;
}

// ------------------------------------------------------ short vectors

namespace detail {

// Integers y with A y^2 + B y + C <= 0, A > 0, as [lo, hi] (empty if lo > hi).
inline std::pair<i64, i64> quadratic_range(i128 A, i128 B, i128 C) {
  const i128 disc = B * B - 4 * A * C;
  if (disc < 0) return {1, 0};
  const i128 s = floor_sqrt(disc);
  // One unit of slack each side; callers check the inequality exactly.
  auto fdiv = [](i128 x, i128 y) {
    i128 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
  };
  const i128 lo = fdiv(-B - s - 1, 2 * A);
  const i128 hi = fdiv(-B + s + 1, 2 * A) + 1;
  return {static_cast<i64>(lo), static_cast<i64>(hi)};
}

}  // namespace detail

// Calls visit(v, Q(v)) for every v in Z^3 with Q(v) <= bound.
template <class Visit>
void for_each_short_vector(const TernaryForm& q, i64 bound, Visit&& visit) {
  detail::require_positive_definite(q);
  if (bound < 0) return;
  const i128 d = raw_discriminant(q);
  const i128 minor_yz = 4 * static_cast<i128>(q.b) * q.c - static_cast<i128>(q.r) * q.r;
  // min over real (y, z) of Q given x is x^2 d / (4bc - r^2).
  const i64 x_max = static_cast<i64>(floor_sqrt(static_cast<i128>(bound) * minor_yz / d));
  for (i64 x = -x_max; x <= x_max; ++x) {
    // 4c(ax^2 + by^2 + txy) - (ry + sx)^2 <= 4c bound, as a quadratic in y.
    const i128 A = minor_yz;
    const i128 B = (4 * static_cast<i128>(q.c) * q.t - 2 * static_cast<i128>(q.r) * q.s) * x;
    const i128 C = (4 * static_cast<i128>(q.a) * q.c - static_cast<i128>(q.s) * q.s) * x * x -
                   4 * static_cast<i128>(q.c) * bound;
    const auto [y_lo, y_hi] = detail::quadratic_range(A, B, C);
    for (i64 y = y_lo; y <= y_hi; ++y) {
      const i128 base = static_cast<i128>(q.a) * x * x + static_cast<i128>(q.b) * y * y + static_cast<i128>(q.t) * x * y;
      const i128 lin = static_cast<i128>(q.r) * y + static_cast<i128>(q.s) * x;
      const auto [z_lo, z_hi] = detail::quadratic_range(q.c, lin, base - bound);
      for (i64 z = z_lo; z <= z_hi; ++z) {
        const i128 value = base + lin * z + static_cast<i128>(q.c) * z * z;
        if (value <= bound) visit(Vec3{x, y, z}, static_cast<i64>(value));
      }
    }
  }
}

inline QSeries theta_series(const TernaryForm& q, i64 truncation) {
  if (truncation < 0 || truncation > 10'000) throw std::invalid_argument("theta_series: truncation must be in [0, 10^4]");
  std::vector<i64> counts(static_cast<std::size_t>(truncation) + 1, 0);
  for_each_short_vector(q, truncation, [&](const Vec3&, i64 v) { ++counts[static_cast<std::size_t>(v)]; });
  QSeries out(truncation);
  for (i64 n = 0; n <= truncation; ++n) out[n] = Rational{static_cast<long>(counts[static_cast<std::size_t>(n)])};
  return out;
}

// ---------------------------------------------------------- isometries

namespace detail {

// Calls visit(v1, v2, v3) for every basis with v_i^T M2 v_j = (M1)_ij.
// visit returns false to stop the search.
template <class Visit>
void search_isometries(const TernaryForm& q1, const TernaryForm& q2, Visit&& visit) {
  const Mat3 g1 = q1.gram();
  const Mat3 g2 = q2.gram();
  const std::array<i64, 3> norms{q1.a, q1.b, q1.c};
  const i64 bound = std::max({q1.a, q1.b, q1.c});
  std::map<i64, std::vector<Vec3>> shells;
  for_each_short_vector(q2, bound, [&](const Vec3& v, i64 value) {
    if (value == norms[0] || value == norms[1] || value == norms[2]) shells[value].push_back(v);
  });
  const auto& s0 = shells[norms[0]];
  const auto& s1 = shells[norms[1]];
  const auto& s2 = shells[norms[2]];
  for (const auto& v1 : s0)
    for (const auto& v2 : s1) {
      if (bilinear(g2, v1, v2) != g1[0][1]) continue;
      for (const auto& v3 : s2) {
        if (bilinear(g2, v1, v3) != g1[0][2] || bilinear(g2, v2, v3) != g1[1][2]) continue;
        if (!visit(v1, v2, v3)) return;
      }
    }
}

}  // namespace detail

// Z-equivalence: exists M in GL3(Z) with M_{Q1} = M^T M_{Q2} M.
inline bool is_equivalent(const TernaryForm& q1, const TernaryForm& q2) {
  if (discriminant(q1) != discriminant(q2)) return false;
  bool found = false;
  detail::search_isometries(q1, q2, [&](const Vec3&, const Vec3&, const Vec3&) {
    found = true;
    return false;
  });
  return found;
}

// |{M in GL3(Z) : M^T M_Q M = M_Q}|.
inline int aut_order(const TernaryForm& q) {
  detail::require_positive_definite(q);
  int count = 0;
  detail::search_isometries(q, q, [&](const Vec3&, const Vec3&, const Vec3&) {
    ++count;
    return true;
  });
  return count;
}

// ------------------------------------------------------ class enumeration

inline constexpr i64 kMaxEnumerationDisc = 25'000;

// Z-class representatives (lexicographically least reduced candidate in each
// class) of positive definite forms of the given level and discriminant.
// Search box: a <= b <= c, |t| <= a, |s| <= a, |r| <= b, abc <= disc; c is
// solved from the discriminant equation.
inline std::vector<TernaryForm> enumerate_classes(i64 target_level, i64 disc) {
  if (disc < 1 || disc > kMaxEnumerationDisc)
    throw std::invalid_argument("enumerate_classes: discriminant " + std::to_string(disc) + " outside [1, 25000]");
  static MemoTable<std::pair<i64, i64>, std::vector<TernaryForm>> memo;
  return memo.get({target_level, disc}, [&] {
    std::vector<TernaryForm> candidates;
    for (i64 a = 1; a * a * a <= disc; ++a)
      for (i64 b = a; a * b * b <= disc; ++b)
        for (i64 t = -a; t <= a; ++t) {
          const i64 denom = 4 * a * b - t * t;
          for (i64 s = -a; s <= a; ++s)
            for (i64 r = -b; r <= b; ++r) {
              const i64 num = disc - r * s * t + a * r * r + b * s * s;
              if (num % denom != 0) continue;
              const i64 c = num / denom;
              if (c < b || a * b * c > disc) continue;
              const TernaryForm q{a, b, c, r, s, t};
              if (level(q) == target_level) candidates.push_back(q);
            }
        }
    std::sort(candidates.begin(), candidates.end());

    // Bucket by a theta head before the isometry test.
    std::map<std::vector<i64>, std::vector<TernaryForm>> buckets;
    std::vector<TernaryForm> reps;
    for (const auto& q : candidates) {
      std::vector<i64> head(41, 0);
      for_each_short_vector(q, 40, [&](const Vec3&, i64 v) { ++head[static_cast<std::size_t>(v)]; });
      auto& bucket = buckets[head];
      bool seen = false;
      for (const auto& rep : bucket)
        if (is_equivalent(rep, q)) {
          seen = true;
          break;
        }
      if (!seen) {
        bucket.push_back(q);
        reps.push_back(q);
      }
    }
    std::sort(reps.begin(), reps.end());
    return reps;
  });
}

// ------------------------------------------------------------- genera

// Forms of level 4N, discriminant 16 N^2, anisotropic exactly at p | N_aniso.
struct GenusDescriptor {
  i64 N;
  i64 level;
  i64 disc;
  i64 anisotropic_set;
};

struct GenusClass {
  TernaryForm form;
  int aut_order;
};

struct GenusContents {
  GenusDescriptor descriptor;
  std::vector<GenusClass> classes;

  Rational mass() const {
    Rational m = 0;
    for (const auto& c : classes) m += make_rational(1, c.aut_order);
    return m;
  }
};

inline GenusContents genus_contents(i64 N, i64 N_aniso) {
  if (N < 1 || N % 2 == 0 || !is_squarefree(N)) throw HypothesisError("genus: N=" + std::to_string(N) + " must be odd square-free");
  if (N_aniso < 1 || N % N_aniso != 0) throw HypothesisError("genus: anisotropic set " + std::to_string(N_aniso) + " must divide N");
  if (omega(N_aniso) % 2 == 0)
    throw HypothesisError("genus: anisotropic set " + std::to_string(N_aniso) + " must have an odd number of prime factors");
  static MemoTable<std::pair<i64, i64>, GenusContents> memo;
  return memo.get({N, N_aniso}, [&] {
    GenusContents g{{N, 4 * N, 16 * N * N, N_aniso}, {}};
    const auto wanted = prime_divisors(N_aniso);
    for (const auto& q : enumerate_classes(4 * N, 16 * N * N))
      if (anisotropic_primes(q) == wanted) g.classes.push_back({q, aut_order(q)});
    return g;
  });
}

// Shrunken genus: level 4N/q, discriminant 16 (N/q)^2.
inline GenusContents genus_contents(i64 N, i64 N_aniso, i64 q) {
  if (!is_prime(q) || N % q != 0) throw HypothesisError("genus: q=" + std::to_string(q) + " must be a prime divisor of N");
  return genus_contents(N / q, N_aniso);
}

inline QSeries weighted_genus_theta(const GenusContents& g, i64 truncation) {
  QSeries total(truncation);
  for (const auto& c : g.classes) total += theta_series(c.form, truncation) * make_rational(1, c.aut_order);
  return total;
}

}  // namespace hcn

#pragma once

// Integer primitives: factorization, multiplicative functions, Kronecker
// symbols and the fundamental-discriminant split -n = D f^2.
//
// Arguments are 64-bit; anything whose size is not bounded by the argument
// (divisor power sums, class-number values) is returned as an Integer or a
// Rational. Intermediate products go through 128-bit or checked arithmetic.

#include "hurwitz/rational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hcn {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 checked_mul(i64 a, i64 b) {
  i64 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("64-bit overflow in product");
  return out;
}

inline i64 checked_add(i64 a, i64 b) {
  i64 out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("64-bit overflow in sum");
  return out;
}

// floor(sqrt(x)) for x >= 0, exact.
inline i128 floor_sqrt(i128 x) {
  if (x < 0) throw std::domain_error("floor_sqrt of negative value");
  if (x < 2) return x;
  auto r = static_cast<i128>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

inline i64 floor_sqrt(i64 x) { return static_cast<i64>(floor_sqrt(static_cast<i128>(x))); }

inline i64 ceil_sqrt(i64 x) {
  i64 r = floor_sqrt(x);
  return r * r == x ? r : r + 1;
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// ---------------------------------------------------------------- primality

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

}  // namespace detail

// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
inline bool is_prime(i64 n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : bases) {
    if (static_cast<std::uint64_t>(n) % p == 0) return static_cast<std::uint64_t>(n) == p;
  }
  const auto m = static_cast<std::uint64_t>(n);
  std::uint64_t d = m - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (auto a : bases) {
    std::uint64_t x = detail::pow_mod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mul_mod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ------------------------------------------------------------ factorization

struct PrimePower {
  i64 prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Primes strictly increasing.
using Factorization = std::vector<PrimePower>;

inline Factorization factorize(i64 n) {
  if (n < 1) throw std::domain_error("factorize: n must be positive");
  Factorization out;
  auto take = [&](i64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  take(2);
  take(3);
  bool cofactor_prime = is_prime(n);
  for (i64 p = 5; !cofactor_prime && p * p <= n; p += 6) {
    for (i64 q : {p, p + 2}) {
      if (n % q == 0) {
        take(q);
        cofactor_prime = is_prime(n);
      }
    }
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline i64 reconstruct(const Factorization& f) {
  i64 n = 1;
  for (auto [p, e] : f)
    for (int i = 0; i < e; ++i) n = checked_mul(n, p);
  return n;
}

inline std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int omega(i64 n) { return static_cast<int>(factorize(n).size()); }

inline int moebius(i64 n) {
  auto f = factorize(n);
  for (auto [p, e] : f)
    if (e > 1) return 0;
  return f.size() % 2 == 0 ? 1 : -1;
}

inline bool is_squarefree(i64 n) { return n >= 1 && (n == 1 || moebius(n) != 0); }

inline int valuation(i64 n, i64 p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// Largest power of p dividing n.
inline i64 p_part(i64 n, i64 p) {
  i64 r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

// ---------------------------------------------------- multiplicative sums

inline Integer sigma(i64 n, unsigned s) {
  if (n < 1) throw std::domain_error("sigma: n must be positive");
  Integer total = 0;
  for (i64 d : divisors(n)) {
    Integer term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), s);
    total += term;
  }
  return total;
}

// Sum over factorizations ab = n of max(a, b)^s.
inline Integer lambda(i64 n, unsigned s) {
  if (n < 1) throw std::domain_error("lambda: n must be positive");
  Integer total = 0;
  for (i64 a : divisors(n)) {
    Integer term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(std::max(a, n / a)), s);
    total += term;
  }
  return total;
}

// Sum over factorizations ab = n of min(a, b)^s. This is the divisor term
// that balances the class number relation sum_r H(4n - r^2) = 2 sigma_1(n) - ...
inline Integer lambda_min(i64 n, unsigned s) {
  if (n < 1) throw std::domain_error("lambda_min: n must be positive");
  Integer total = 0;
  for (i64 a : divisors(n)) {
    Integer term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(std::min(a, n / a)), s);
    total += term;
  }
  return total;
}

// Sum of d^s over d | r with gcd(d, ell) = 1 and gcd(r/d, N/ell) = 1.
inline Integer sigma_lns(i64 ell, i64 N, unsigned s, i64 r) {
  if (ell < 1 || N < 1 || N % ell != 0) throw std::invalid_argument("sigma_lns: ell must divide N");
  if (r < 1) throw std::domain_error("sigma_lns: r must be positive");
  Integer total = 0;
  for (i64 d : divisors(r)) {
    if (std::gcd(d, ell) != 1 || std::gcd(r / d, N / ell) != 1) continue;
    Integer term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), s);
    total += term;
  }
  return total;
}

// --------------------------------------------------------------- symbols

// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(i64 a, i64 n) {
  if (n < 1 || n % 2 == 0) throw std::domain_error("jacobi: n must be odd and positive");
  a = mod_floor(a, n);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const i64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// Kronecker symbol (D/a), fully extended: a <= 0 and even a allowed.
// (D/0) = 1 if |D| = 1 else 0; (D/-1) = sign(D); (D/2) = 0 for even D,
// otherwise 1 for D = +-1 mod 8 and -1 for D = +-3 mod 8.
inline int kronecker(i64 D, i64 a) {
  if (a == 0) return (D == 1 || D == -1) ? 1 : 0;
  int result = 1;
  if (a < 0) {
    a = -a;
    if (D < 0) result = -result;
  }
  int twos = 0;
  while (a % 2 == 0) {
    a /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (D % 2 == 0) return 0;
    const i64 r = mod_floor(D, 8);
    if ((twos % 2 == 1) && (r == 3 || r == 5)) result = -result;
  }
  return result * jacobi(D, a);
}

// ----------------------------------------------------------- discriminants

inline bool is_discriminant(i64 d) {
  const i64 r = mod_floor(d, 4);
  return r == 0 || r == 1;
}

inline bool is_fundamental(i64 D) {
  if (D == 0 || D == 1) return false;
  const i64 r = mod_floor(D, 4);
  if (r == 1) return is_squarefree(D < 0 ? -D : D);
  if (r != 0) return false;
  const i64 m = D / 4;
  const i64 rm = mod_floor(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(m < 0 ? -m : m);
}

// d = D f^2 with D fundamental, for a nonzero discriminant d of either sign.
struct FundamentalSplit {
  i64 fundamental;
  i64 conductor;
};

inline std::optional<FundamentalSplit> split_discriminant(i64 d) {
  if (d == 0 || !is_discriminant(d)) return std::nullopt;
  const i64 sign = d < 0 ? -1 : 1;
  i64 core = 1;
  i64 root = 1;
  for (auto [p, e] : factorize(d * sign)) {
    if (e % 2 == 1) core *= p;
    for (int i = 0; i < e / 2; ++i) root *= p;
  }
  const i64 signed_core = sign * core;
  if (mod_floor(signed_core, 4) == 1) return FundamentalSplit{signed_core, root};
  return FundamentalSplit{4 * signed_core, root / 2};
}

// -n = D f^2 with D a negative fundamental discriminant.
struct DiscSplit {
  i64 n;
  i64 fundamental;
  i64 conductor;
  friend bool operator==(const DiscSplit&, const DiscSplit&) = default;
};

inline std::optional<DiscSplit> disc_split(i64 n) {
  if (n < 1) throw std::domain_error("disc_split: n must be positive");
  auto s = split_discriminant(-n);
  if (!s) return std::nullopt;
  return DiscSplit{n, s->fundamental, s->conductor};
}

}  // namespace hcn

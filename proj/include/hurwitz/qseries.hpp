#pragma once

// Truncated q-series with exact rational coefficients.
//
// A QSeries of truncation M knows the coefficients of q^0 .. q^M. Binary
// operations never read beyond the smaller truncation of their operands.

#include "hurwitz/arith.hpp"
#include "hurwitz/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hcn {

class QSeries {
 public:
  QSeries() : coeffs_(1) {}
  explicit QSeries(i64 truncation) {
    if (truncation < 0) throw std::invalid_argument("negative truncation");
    coeffs_.resize(static_cast<std::size_t>(truncation) + 1);
  }
  QSeries(i64 truncation, std::vector<Rational> head) : QSeries(truncation) {
    if (head.size() > coeffs_.size()) head.resize(coeffs_.size());
    std::move(head.begin(), head.end(), coeffs_.begin());
  }

  static QSeries constant(const Rational& c, i64 truncation) {
    QSeries s(truncation);
    s.coeffs_[0] = c;
    return s;
  }

  i64 truncation() const { return static_cast<i64>(coeffs_.size()) - 1; }

  // Zero beyond the truncation is NOT implied; callers asking past it get an error.
  const Rational& operator[](i64 n) const {
    if (n < 0 || n > truncation()) throw std::out_of_range("q-series index beyond truncation");
    return coeffs_[static_cast<std::size_t>(n)];
  }
  Rational& operator[](i64 n) {
    if (n < 0 || n > truncation()) throw std::out_of_range("q-series index beyond truncation");
    return coeffs_[static_cast<std::size_t>(n)];
  }

  QSeries truncated(i64 m) const {
    if (m > truncation()) throw std::invalid_argument("cannot extend a truncated series");
    return QSeries(m, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + m + 1));
  }

  QSeries& operator+=(const QSeries& o) {
    shrink_to(o.truncation());
    for (i64 n = 0; n <= truncation(); ++n) (*this)[n] += o[n];
    return *this;
  }
  QSeries& operator-=(const QSeries& o) {
    shrink_to(o.truncation());
    for (i64 n = 0; n <= truncation(); ++n) (*this)[n] -= o[n];
    return *this;
  }
  QSeries& operator*=(const Rational& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(QSeries a, const Rational& c) { return a *= c; }
  friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }

  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    const i64 m = std::min(a.truncation(), b.truncation());
    QSeries out(m);
    for (i64 i = 0; i <= m; ++i) {
      if (a[i] == 0) continue;
      for (i64 j = 0; i + j <= m; ++j) {
        if (b[j] == 0) continue;
        out[i + j] += a[i] * b[j];
      }
    }
    return out;
  }

  // Coefficient-wise equality up to the common truncation.
  friend bool operator==(const QSeries& a, const QSeries& b) {
    const i64 m = std::min(a.truncation(), b.truncation());
    for (i64 n = 0; n <= m; ++n)
      if (a[n] != b[n]) return false;
    return true;
  }

  // Nonzero terms in ascending order.
  std::vector<std::pair<i64, Rational>> terms() const {
    std::vector<std::pair<i64, Rational>> out;
    for (i64 n = 0; n <= truncation(); ++n)
      if ((*this)[n] != 0) out.emplace_back(n, (*this)[n]);
    return out;
  }

 private:
  void shrink_to(i64 m) {
    if (m < truncation()) coeffs_.resize(static_cast<std::size_t>(m) + 1);
  }

  std::vector<Rational> coeffs_;
};

// Coefficient n of the output is coefficient 4n of the input.
inline QSeries u4(const QSeries& s) {
  QSeries out(s.truncation() / 4);
  for (i64 n = 0; n <= out.truncation(); ++n) out[n] = s[4 * n];
  return out;
}

// sum over n in Z of q^(d n^2).
inline QSeries unary_theta_scaled(i64 d, i64 truncation) {
  if (d < 1) throw std::invalid_argument("unary_theta_scaled: d must be positive");
  QSeries s(truncation);
  s[0] = 1;
  for (i64 k = 1; d * k * k <= truncation; ++k) s[d * k * k] += 2;
  return s;
}

inline QSeries unary_theta(i64 truncation) { return unary_theta_scaled(1, truncation); }

// Number of (x, y, z) in Z^3 with x^2 + y^2 + z^2 = n, by direct counting.
inline i64 r3(i64 n) {
  if (n < 0) return 0;
  if (n > 100'000'000) throw std::invalid_argument("r3: n above direct-counting scale");
  i64 count = 0;
  for (i64 x = -floor_sqrt(n); x * x <= n; ++x) {
    const i64 rest = n - x * x;
    for (i64 y = -floor_sqrt(rest); y * y <= rest; ++y) {
      const i64 zz = rest - y * y;
      const i64 z = floor_sqrt(zz);
      if (z * z == zz) count += (z == 0 ? 1 : 2);
    }
  }
  return count;
}

inline QSeries r3_series(i64 truncation) {
  if (truncation > 1'000'000) throw std::invalid_argument("r3_series: truncation above 10^6");
  std::vector<i64> counts(static_cast<std::size_t>(truncation) + 1, 0);
  const i64 b = floor_sqrt(truncation);
  for (i64 x = -b; x <= b; ++x)
    for (i64 y = -b; y <= b; ++y) {
      const i64 xy = x * x + y * y;
      if (xy > truncation) continue;
      for (i64 z = -b; z <= b; ++z) {
        const i64 v = xy + z * z;
        if (v <= truncation) ++counts[static_cast<std::size_t>(v)];
      }
    }
  QSeries s(truncation);
  for (i64 n = 0; n <= truncation; ++n) s[n] = Rational{static_cast<long>(counts[static_cast<std::size_t>(n)])};
  return s;
}

struct EtaFactor {
  i64 d;         // eta(d tau)
  i64 exponent;  // may be negative
};

// q^(sum d e / 24) * prod_k prod (1 - q^(d k))^e. The prefactor must be integral.
inline QSeries eta_product(const std::vector<EtaFactor>& factors, i64 truncation) {
  i64 weight = 0;
  for (auto [d, e] : factors) {
    if (d < 1) throw std::invalid_argument("eta_product: d must be positive");
    weight += d * e;
  }
  if (mod_floor(weight, 24) != 0)
    throw std::invalid_argument("eta_product: sum of d*e is not divisible by 24 (fractional q-power)");
  const i64 shift = weight / 24;
  if (shift < 0) throw std::invalid_argument("eta_product: negative leading q-power");

  QSeries body = QSeries::constant(1, truncation);
  for (auto [d, e] : factors) {
    // Multiply by (1 - q^(dk))^(+-1) one factor at a time.
    for (i64 rep = 0; rep < (e < 0 ? -e : e); ++rep) {
      for (i64 k = 1; d * k <= truncation; ++k) {
        const i64 step = d * k;
        if (e > 0) {
          for (i64 n = truncation; n >= step; --n) body[n] -= body[n - step];
        } else {
          for (i64 n = step; n <= truncation; ++n) body[n] += body[n - step];
        }
      }
    }
  }
  QSeries out(truncation);
  for (i64 n = shift; n <= truncation; ++n) out[n] = body[n - shift];
  return out;
}

}  // namespace hcn

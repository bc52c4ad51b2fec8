#include "hurwitz/qseries.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcn;

namespace {

QSeries from_terms(i64 M, std::initializer_list<std::pair<i64, long>> terms) {
  QSeries s(M);
  for (auto [n, c] : terms) s[n] = Rational{c};
  return s;
}

}  // namespace

TEST(QSeries, R3MatchesBruteForce) {
  for (i64 n = 0; n <= 400; ++n) ASSERT_EQ(r3(n), oracle::r3(n)) << n;
}

TEST(QSeries, R3Examples) {
  EXPECT_EQ(r3(35), 48);
  EXPECT_EQ(r3(43), 24);
  EXPECT_EQ(r3(43 * 31 * 31), 744);
  EXPECT_EQ(r3(41 * 41 * 35), 2064);
  EXPECT_EQ(r3(7), 0);
}

TEST(QSeries, ThetaCubeIsR3Series) {
  const QSeries t = unary_theta(200);
  EXPECT_EQ(t * t * t, r3_series(200));
  EXPECT_EQ(r3_series(200)[43], 24);
}

TEST(QSeries, U4PicksEveryFourthCoefficient) {
  const QSeries u = u4(r3_series(400));
  EXPECT_EQ(u.truncation(), 100);
  EXPECT_EQ(u[1], 6);
  for (i64 n = 0; n <= 100; ++n) ASSERT_EQ(u[n], r3(4 * n));
}

TEST(QSeries, EtaProductLevel11Newform) {
  const QSeries f = eta_product({{1, 2}, {11, 2}}, 12);
  EXPECT_EQ(f, from_terms(12, {{1, 1}, {2, -2}, {3, -1}, {4, 2}, {5, 1}, {6, 2}, {7, -2}, {9, -2}, {10, -2}, {11, 1}, {12, -2}}));
}

TEST(QSeries, EtaProductRejectsFractionalShift) {
  EXPECT_THROW(eta_product({{2, 2}, {11, 2}}, 10), std::invalid_argument);
  EXPECT_THROW(eta_product({{0, 1}}, 10), std::invalid_argument);
}

TEST(QSeries, EtaNegativeExponentInverts) {
  const QSeries a = eta_product({{1, 24}}, 30);
  const QSeries b = eta_product({{1, -24}, {2, 48}}, 60);  // shift 3
  EXPECT_EQ(a[1], 1);
  EXPECT_EQ(a[2], -24);
  EXPECT_EQ(a[3], 252);  // Ramanujan tau
  EXPECT_EQ(b[3], 1);
}

TEST(QSeries, ArithmeticAndTruncation) {
  QSeries a = from_terms(5, {{0, 1}, {2, 3}});
  const QSeries b = from_terms(3, {{1, 2}});
  const QSeries c = a + b;
  EXPECT_EQ(c.truncation(), 3);
  EXPECT_EQ(c[1], 2);
  EXPECT_EQ((a * b)[3], 6);
  EXPECT_EQ((a * Rational(1, 3))[2], 1);
  EXPECT_THROW(a[6], std::out_of_range);
  EXPECT_THROW(a.truncated(9), std::invalid_argument);
  EXPECT_THROW(QSeries(-1), std::invalid_argument);
  EXPECT_EQ(a.terms().size(), 2u);
}

#include "hurwitz/arith.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcn;

TEST(Arith, KroneckerExamples) {
  EXPECT_EQ(kronecker(-35, 31), -1);
  EXPECT_EQ(kronecker(-35, 41), -1);
  EXPECT_EQ(kronecker(-3, 5), -1);
  EXPECT_EQ(kronecker(-3, 2), -1);
  EXPECT_EQ(kronecker(-7, 2), 1);
  EXPECT_EQ(kronecker(-4, 2), 0);
  EXPECT_EQ(kronecker(5, 1), 1);
}

TEST(Arith, KroneckerMatchesSquareCountingAtOddPrimes) {
  for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
    for (i64 D = -400; D <= 400; ++D) {
      if (!is_discriminant(D)) continue;
      ASSERT_EQ(kronecker(D, p), oracle::legendre_count(D, p)) << "D=" << D << " p=" << p;
    }
}

TEST(Arith, KroneckerIsMultiplicativeInTheBottom) {
  for (i64 D : {-3, -4, -7, -8, -15, -20, -23, -35, -43, 5, 12, 13})
    for (i64 a = 1; a <= 60; ++a)
      for (i64 b = 1; b <= 60; ++b) ASSERT_EQ(kronecker(D, a * b), kronecker(D, a) * kronecker(D, b)) << D << " " << a << " " << b;
}

TEST(Arith, DiscSplitExamples) {
  const auto s = disc_split(12);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->fundamental, -3);
  EXPECT_EQ(s->conductor, 2);
  EXPECT_FALSE(disc_split(5));
  EXPECT_EQ(disc_split(172)->fundamental, -43);
  EXPECT_EQ(disc_split(172)->conductor, 2);
  EXPECT_EQ(disc_split(16)->fundamental, -4);
  EXPECT_EQ(disc_split(16)->conductor, 2);
  EXPECT_THROW(disc_split(0), std::domain_error);
}

TEST(Arith, DiscSplitReconstructsAndIsFundamental) {
  for (i64 n = 1; n <= 3000; ++n) {
    const auto s = disc_split(n);
    ASSERT_EQ(s.has_value(), n % 4 == 0 || n % 4 == 3) << n;
    if (!s) continue;
    ASSERT_TRUE(is_fundamental(s->fundamental)) << n;
    ASSERT_EQ(-s->fundamental * s->conductor * s->conductor, n) << n;
  }
}

TEST(Arith, SigmaLnsExamples) {
  EXPECT_EQ(sigma_lns(5, 5, 1, 5), 1);
  EXPECT_EQ(sigma_lns(1, 5, 1, 5), 5);
  EXPECT_EQ(sigma_lns(1, 1, 1, 12), 28);
  EXPECT_THROW(sigma_lns(2, 5, 1, 5), std::invalid_argument);
}

TEST(Arith, LambdaExamples) {
  EXPECT_EQ(lambda(4, 1), 10);
  EXPECT_EQ(lambda_min(4, 1), 4);
  EXPECT_EQ(lambda_min(2, 1), 2);
  EXPECT_EQ(lambda(1, 1), 1);
}

TEST(Arith, SigmaMatchesOracle) {
  for (i64 n = 1; n <= 500; ++n) ASSERT_EQ(sigma(n, 1), oracle::sigma1(n)) << n;
}

TEST(Arith, FactorizationRoundTrip) {
  for (i64 n = 1; n <= 5000; ++n) ASSERT_EQ(reconstruct(factorize(n)), n);
  EXPECT_EQ(reconstruct(factorize(41 * 41 * 35)), 41 * 41 * 35);
  EXPECT_TRUE(is_prime(1'000'000'007));
  EXPECT_FALSE(is_prime(1'000'000'007LL * 3));
}

TEST(Arith, MoebiusAndSquarefree) {
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(moebius(35), 1);
  EXPECT_EQ(moebius(105), -1);
  EXPECT_EQ(moebius(45), 0);
  EXPECT_TRUE(is_squarefree(105));
  EXPECT_FALSE(is_squarefree(75));
  EXPECT_EQ(omega(105), 3);
}

TEST(Arith, CheckedArithmeticThrowsOnOverflow) {
  EXPECT_THROW(checked_mul(INT64_MAX / 2, 3), std::overflow_error);
  EXPECT_EQ(checked_mul(-7, 6), -42);
}

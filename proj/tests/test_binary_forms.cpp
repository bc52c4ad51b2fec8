#include "hurwitz/binary_forms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hcn;

TEST(BinaryForms, ReduceExamples) {
  const BinaryForm r = reduce_sl2({11, -89, 181});
  EXPECT_EQ(r.a, 1);
  EXPECT_EQ(r.b, 1);
  EXPECT_EQ(r.c, 11);
  const BinaryForm s = reduce_sl2({2, 2, 3});
  EXPECT_EQ(s.a, 2);
  EXPECT_EQ(s.b, 2);
  EXPECT_EQ(s.c, 3);
  EXPECT_THROW(reduce_sl2({1, 3, 1}), std::invalid_argument);
}

TEST(BinaryForms, ReducedFormsMatchOracle) {
  for (i64 n = 3; n <= 1500; ++n) {
    if (n % 4 == 1 || n % 4 == 2) continue;
    ASSERT_EQ(reduced_forms(n).size(), oracle::reduced(n).size()) << n;
  }
}

TEST(BinaryForms, ClassNumberAndHurwitzExamples) {
  EXPECT_EQ(class_number_h(-23), 3);
  EXPECT_EQ(class_number_h(-43), 1);
  EXPECT_EQ(class_number_h(-4), 1);
  EXPECT_EQ(hurwitz_H(3), Rational(1, 3));
  EXPECT_EQ(hurwitz_H(4), Rational(1, 2));
  EXPECT_EQ(hurwitz_H(0), Rational(-1, 12));
  EXPECT_EQ(hurwitz_H(23), 3);
  EXPECT_EQ(hurwitz_H(8), 1);
  EXPECT_EQ(hurwitz_H(2), 0);
  EXPECT_EQ(hurwitz_H(5), 0);
}

TEST(BinaryForms, HurwitzMatchesOracle) {
  for (i64 n = 0; n <= 2000; ++n) ASSERT_EQ(hurwitz_H(n), oracle::hurwitz(n)) << n;
}

TEST(BinaryForms, Gamma0OrbitCountsFromTheWorkedExample) {
  const auto small = gamma0_orbits(31, 43, true);
  const auto big = gamma0_orbits(31, 172, true);
  EXPECT_EQ(small.count(), 4u);
  EXPECT_EQ(big.count(), 16u);
  for (const auto& r : small.representatives) EXPECT_EQ(r.stabilizer_order, 2);
  for (const auto& r : big.representatives) EXPECT_EQ(r.stabilizer_order, 2);
  EXPECT_EQ(gamma0_orbits(41, 35, true).count(), 0u);
  EXPECT_EQ(gamma0_orbits(41, 140, true).count(), 0u);
  EXPECT_EQ(gamma0_orbits(31, 43, false).count(), 2u);
}

TEST(BinaryForms, Gamma0RepresentativesArePairwiseInequivalent) {
  const auto big = gamma0_orbits(31, 172, false);
  for (std::size_t i = 0; i < big.representatives.size(); ++i) {
    const auto& f = big.representatives[i].form;
    EXPECT_EQ(f.a % 31, 0);
    EXPECT_EQ(f.disc(), -172);
    for (std::size_t j = i + 1; j < big.representatives.size(); ++j)
      EXPECT_FALSE(gamma0_equivalent(f, big.representatives[j].form, 31)) << i << " " << j;
  }
}

TEST(BinaryForms, Gamma0EquivalenceFindsTranslates) {
  // (31, b, c) and its image under [[1, 0], [31, 1]] and [[1, 1], [0, 1]]
  const auto reps = gamma0_orbits(31, 43, false).representatives;
  ASSERT_EQ(reps.size(), 2u);
  const BinaryForm f = reps[0].form;
  const BinaryForm g = act(f, {1, 1, 0, 1});
  const BinaryForm h = act(g, {1, 0, 31, 1});
  EXPECT_TRUE(gamma0_equivalent(f, h, 31));
  EXPECT_FALSE(gamma0_equivalent(f, reps[1].form, 31));
}

TEST(BinaryForms, WeightedOrbitSumMatchesProjectiveLineOracle) {
  for (i64 p : {3, 5, 7, 11, 13})
    for (i64 n = 3; n <= 160; ++n) {
      if (n % 4 == 1 || n % 4 == 2) continue;
      ASSERT_EQ(weighted_orbit_sum(p, n), oracle::gamma0_weighted_p1(p, n)) << "p=" << p << " n=" << n;
    }
  for (i64 n : {35, 43, 140, 172}) {
    ASSERT_EQ(weighted_orbit_sum(31, n), oracle::gamma0_weighted_p1(31, n)) << n;
    ASSERT_EQ(weighted_orbit_sum(41, n), oracle::gamma0_weighted_p1(41, n)) << n;
  }
}

TEST(BinaryForms, LargeDiscriminantRelativeToLevel) {
  // n much larger than p^2: the search bound has to reach n / 3
  for (i64 n : {300, 400, 499, 500, 800}) {
    if (is_discriminant(-n)) {
      ASSERT_EQ(weighted_orbit_sum(3, n), oracle::gamma0_weighted_p1(3, n)) << n;
    }
  }
}

TEST(BinaryForms, StabilizerOfDiscMinus3Orbits) {
  // the order-3 rotation fixes both isotropic lines mod p
  for (i64 p : {3, 7, 13}) {
    const auto set = gamma0_orbits(p, 3, false);
    ASSERT_FALSE(set.representatives.empty()) << p;
    for (const auto& r : set.representatives) EXPECT_EQ(r.stabilizer_order, 6) << p;
  }
  EXPECT_TRUE(gamma0_orbits(5, 3, false).representatives.empty());
}

TEST(BinaryForms, KroneckerHurwitzExamples) {
  EXPECT_TRUE(kronecker_hurwitz_check(1).pass);
  EXPECT_EQ(std::get<Rational>(kronecker_hurwitz_check(1).rhs), 2);
  EXPECT_EQ(std::get<Rational>(kronecker_hurwitz_check(4).rhs), 14);
  EXPECT_TRUE(kronecker_hurwitz_check(4).pass);
  EXPECT_TRUE(kronecker_hurwitz_check(100).pass);
}

TEST(BinaryForms, KroneckerHurwitzAgainstOracle) {
  for (i64 n = 1; n <= 200; ++n) {
    mpq_class lhs = 0;
    for (i64 r = -200; r <= 200; ++r)
      if (4 * n - r * r >= 0) lhs += oracle::hurwitz(4 * n - r * r);
    i64 lam = 0;
    for (i64 a = 1; a <= n; ++a)
      if (n % a == 0) lam += std::min(a, n / a);
    ASSERT_EQ(lhs + lam, 2 * oracle::sigma1(n)) << n;
  }
}

TEST(BinaryForms, RejectsIndefiniteForms) {
  EXPECT_THROW(detail::require_positive_definite({1, 3, 1}), std::invalid_argument);
  EXPECT_THROW(gamma0_orbits(4, 43, true), std::invalid_argument);
}

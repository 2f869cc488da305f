#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "infoflow/discretization.hpp"
#include "oracles.hpp"

using namespace infoflow;

TEST(Mesh, BinExamples) {
  EXPECT_EQ(bin(Mesh(300), 0.0), 0u);
  EXPECT_EQ(bin(Mesh(300), 0.999999), 299u);
  EXPECT_EQ(bin(Mesh(4), 0.5), 2u);
  EXPECT_EQ(bin(Mesh(3), std::nextafter(1.0, 0.0)), 2u);
}

TEST(Mesh, BinDomainAndZeroCells) {
  EXPECT_THROW(bin(Mesh(4), 1.0), DomainError);
  EXPECT_THROW(bin(Mesh(4), -0.1), DomainError);
  EXPECT_THROW(Mesh(0), DomainError);
}

// i / L is exact in binary only for power-of-two meshes.
TEST(Mesh, EveryCellLeftEdgeBinsToItself) {
  for (std::size_t L : {8u, 256u, 1024u}) {
    const Mesh m(L);
    for (std::size_t i = 0; i < L; ++i) ASSERT_EQ(bin(m, m.left(i)), i);
  }
}

TEST(JointFromSamples, IdentityIsDiagonal) {
  const std::vector<double> y{0.05, 0.3, 0.55, 0.8, 0.81};
  const JointDist2 j = joint_from_samples(Mesh(4), y, y);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      if (i != k) EXPECT_EQ(j.at(i, k), 0.0);
  EXPECT_DOUBLE_EQ(j.at(3, 3), 0.4);
}

TEST(JointFromSamples, LengthMismatch) {
  const std::vector<double> a{0.1, 0.2}, b{0.1};
  EXPECT_THROW(joint_from_samples(Mesh(4), a, b), DimensionError);
}

TEST(JointFromSamples, MarginalsAreTheOneDimensionalHistograms) {
  const auto y = sample_distribution(UniformDist{}, 10000, 1);
  const auto x = pairs_from_map(MapSpec::sine_box(3), y);
  const Mesh mesh(20);
  const JointDist2 j = joint_from_samples(mesh, y, x);
  const DensityEstimate hx = density_from_samples(mesh, x), hy = density_from_samples(mesh, y);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_NEAR(j.marginal_x()[i], hx.weights[i], 1e-15);
    EXPECT_NEAR(j.marginal_y()[i], hy.weights[i], 1e-15);
  }
}

TEST(JointFromSamples, CoarseMeshLosesEverything) {
  const auto y = sample_distribution(UniformDist{}, 1'000'000, 2);
  const auto x = pairs_from_map(MapSpec::bernoulli(5), y);
  EXPECT_LT(mutual_information(joint_from_samples(Mesh(5), y, x)).value, 1e-4);
  // 3 does not divide 5: the true cell joint is uneven and the MI is small but positive.
  const double uneven = oracle::mutual_information(3, 3, oracle::bernoulli_cell_measure(3, 5));
  EXPECT_GT(uneven, 0.01);
  EXPECT_NEAR(mutual_information(joint_from_samples(Mesh(3), y, x)).value, uneven, 1e-3);
}

TEST(JointFromSamples, TripleMapNearLog100) {
  const auto y = sample_distribution(UniformDist{}, 1'000'000, 3);
  const auto x = pairs_from_map(MapSpec::bernoulli(3), y);
  EXPECT_NEAR(mutual_information(joint_from_samples(Mesh(300), y, x)).value, std::log(100.0), 0.02);
}

TEST(JointFromTrajectory, UsesConsecutivePairs) {
  const std::vector<double> traj{0.1, 0.6, 0.35, 0.9};
  const JointDist2 j = joint_from_trajectory(Mesh(2), traj);
  // pairs (y, x): (0.1, 0.6), (0.6, 0.35), (0.35, 0.9); X on the first axis.
  EXPECT_DOUBLE_EQ(j.at(1, 0), 2.0 / 3);
  EXPECT_DOUBLE_EQ(j.at(0, 1), 1.0 / 3);
  EXPECT_THROW(joint_from_trajectory(Mesh(2), std::vector<double>{0.5}), DimensionError);
}

TEST(PairsFromMap, Examples) {
  const std::vector<double> y{0.1, 0.7};
  EXPECT_EQ(pairs_from_map(MapSpec::rotation(0.0), y), y);
  EXPECT_EQ(pairs_from_map(MapSpec::bernoulli(2), std::vector<double>{0.25, 0.75}), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(pairs_from_map(MapSpec::sine_box(1), std::vector<double>{0.25}), (std::vector<double>{0.0}));
}

TEST(ExactBernoulli, SmallExamples) {
  const JointDist2 a = exact_bernoulli_joint(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(a.at(i, k), 0.25);
  EXPECT_NEAR(mutual_information(a).value, 0.0, 1e-15);

  const JointDist2 b = exact_bernoulli_joint(4, 2);
  int charged = 0;
  for (double m : b.masses()) {
    if (m > 0) {
      EXPECT_DOUBLE_EQ(m, 0.125);
      ++charged;
    }
  }
  EXPECT_EQ(charged, 8);
  EXPECT_NEAR(mutual_information(b).value, std::log(2.0), 1e-15);

  EXPECT_NEAR(mutual_information(exact_bernoulli_joint(300, 7)).value, std::log(300.0) - std::log(7.0), 1e-12);
  EXPECT_NEAR(mutual_information(exact_bernoulli_joint(300, 3)).value, std::log(100.0), 1e-12);
}

TEST(ExactBernoulli, RejectsBadArguments) {
  EXPECT_THROW(exact_bernoulli_joint(0, 2), DomainError);
  EXPECT_THROW(exact_bernoulli_joint(4, 1), DomainError);
}

// Sub-cell integration of the true pushforward agrees with the support-set
// construction whenever d < L or L divides d.
TEST(ExactBernoulli, AgreesWithCellMeasureOracle) {
  for (std::size_t L : {2u, 3u, 5u, 8u, 12u, 30u}) {
    for (std::size_t d : {2u, 3u, 4u, 6u, 7u, 24u}) {
      const auto ref = oracle::bernoulli_cell_measure(L, d);
      const JointDist2 push = bernoulli_pushforward_joint(L, d);
      for (std::size_t a = 0; a < ref.size(); ++a) ASSERT_NEAR(push.masses()[a], ref[a], 1e-14) << L << " " << d;
      if (d < L || d % L == 0) {
        const JointDist2 exact = exact_bernoulli_joint(L, d);
        for (std::size_t a = 0; a < ref.size(); ++a) ASSERT_NEAR(exact.masses()[a], ref[a], 1e-14) << L << " " << d;
      }
    }
  }
}

// When L <= d and L does not divide d the pushforward charges cells unevenly,
// while the support-set construction is uniform by definition.
TEST(ExactBernoulli, PushforwardDiffersWhenLDoesNotDivideD) {
  EXPECT_EQ(mutual_information(exact_bernoulli_joint(2, 3)).value, 0.0);
  const double push = mutual_information(bernoulli_pushforward_joint(2, 3)).value;
  EXPECT_NEAR(push, oracle::mutual_information(2, 2, oracle::bernoulli_cell_measure(2, 3)), 1e-14);
  EXPECT_GT(push, 0.05);
}

TEST(ExactBernoulli, EmpiricalSupportWithinExactSupport) {
  const Mesh mesh(300);
  const auto y = sample_distribution(UniformDist{}, 200000, 5);
  for (std::size_t d : {2u, 7u, 30u}) {
    const auto x = pairs_from_map(MapSpec::bernoulli(static_cast<int>(d)), y);
    const JointDist2 emp = joint_from_samples(mesh, y, x);
    const JointDist2 exact = exact_bernoulli_joint(300, d);
    for (std::size_t a = 0; a < exact.masses().size(); ++a) {
      if (exact.masses()[a] == 0.0) ASSERT_EQ(emp.masses()[a], 0.0);
    }
  }
}

TEST(ExactBernoulli, RefinementKeepsMinusLogD) {
  for (std::size_t L : {50u, 100u, 200u, 400u}) {
    const double mi = mutual_information(exact_bernoulli_joint(L, 2)).value;
    EXPECT_NEAR(mi - std::log(double(L)), -std::log(2.0), 1e-12);
  }
}

TEST(CountTable, ShardsMergeToTheWhole) {
  const Mesh mesh(16);
  const auto y = sample_distribution(UniformDist{}, 30000, 6);
  const auto x = pairs_from_map(MapSpec::bernoulli(3), y);
  const std::span<const double> ys(y), xs(x);
  CountTable2 merged(16, 16);
  for (std::size_t start = 0; start < y.size(); start += 7000) {
    const std::size_t n = std::min<std::size_t>(7000, y.size() - start);
    merged += count_pairs(pair_indices(mesh, ys.subspan(start, n), xs.subspan(start, n)), 16);
  }
  const CountTable2 whole = count_pairs(pair_indices(mesh, y, x), 16);
  EXPECT_TRUE(std::equal(merged.counts().begin(), merged.counts().end(), whole.counts().begin()));
  const JointDist2 a = merged.normalized(), b = joint_from_samples(mesh, y, x);
  for (std::size_t i = 0; i < a.masses().size(); ++i) EXPECT_EQ(a.masses()[i], b.masses()[i]);
  CountTable2 other(4, 4);
  EXPECT_THROW(merged += other, DimensionError);
}

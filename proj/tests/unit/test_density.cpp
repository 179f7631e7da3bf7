#include <gtest/gtest.h>

#include <random>

#include "collinear_lab/density.hpp"
#include "collinear_lab/error.hpp"
#include "collinear_lab/generators.hpp"

using namespace clab;

namespace {

// Direct count over every corner with the window inside the bounds.
Rational naive_best(const PointSet& a, const Box& bounds, Int side) {
  Rational best = -1;
  const std::size_t d = bounds.dim();
  std::vector<Int> hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = std::max(bounds.lo(i), bounds.hi(i) - side);
  std::vector<Int> lo(d);
  for (std::size_t i = 0; i < d; ++i) lo[i] = bounds.lo(i);
  Box cbox(lo, hi);
  cbox.for_each([&](const LatticePoint& c) {
    std::size_t n = 0;
    for (const auto& p : a) {
      bool in = true;
      for (std::size_t i = 0; i < d && in; ++i) in = p[i] >= c[i] && p[i] <= c[i] + side;
      n += in;
    }
    Rational v(static_cast<long>(n));
    for (std::size_t i = 0; i < d; ++i) v /= side;
    if (v > best) best = v;
  });
  return best;
}

}  // namespace

TEST(WindowDensity, ClosedBoxNormalisation) {
  const PointSet a = full_set(Box::cube(2, 0, 9));
  EXPECT_EQ(window_density(a, {0, 0}, 9), Rational(100, 81));
  EXPECT_THROW(window_density(a, {0, 0}, 0), Error);
}

TEST(WindowDensity, BernoulliNearP) {
  Rng rng(1);
  const PointSet a = bernoulli_set(Box::cube(2, 0, 60), Rational(3, 10), rng);
  const Rational v = window_density(a, {5, 5}, 50);
  std::size_t direct = 0;
  for (const auto& p : a) direct += p[0] >= 5 && p[0] <= 55 && p[1] >= 5 && p[1] <= 55;
  EXPECT_EQ(v, Rational(static_cast<long>(direct), 2500));
  EXPECT_GE(v, Rational(1, 4));
  EXPECT_LE(v, Rational(7, 20));
}

TEST(BanachEstimate, CosetDecreasesToQuarter) {
  const PointSet a = coset_set(Box::cube(2, 0, 40), 2);
  const std::vector<Int> sides{2, 4, 8, 16};
  const auto rows = banach_density_estimate(a, sides);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Int l = sides[i];
    Rational expected((l / 2 + 1) * (l / 2 + 1), l * l);
    expected.canonicalize();
    EXPECT_EQ(rows[i].value, expected);
    EXPECT_GT(rows[i].value, Rational(1, 4));
    if (i) EXPECT_LT(rows[i].value, rows[i - 1].value);
  }
}

TEST(BanachEstimate, IntervalInsideLargerBounds) {
  const PointSet a = full_set(Box({0}, {99}));
  const std::vector<Int> sides{10};
  const auto rows = banach_density_estimate(a, sides, Box({0}, {999}));
  EXPECT_EQ(rows[0].value, Rational(11, 10));
  EXPECT_EQ(rows[0].best_corner, LatticePoint({0}));
}

TEST(BanachEstimate, EmptySetIsZero) {
  const std::vector<Int> sides{1, 5};
  for (const auto& r : banach_density_estimate(PointSet(2), sides)) EXPECT_EQ(r.value, 0);
}

TEST(BanachEstimate, PrefixSumsMatchNaiveCounting) {
  std::mt19937_64 mt(2);
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(static_cast<std::uint64_t>(trial));
    const std::size_t d = 1 + trial % 3;
    const Int extent = d == 1 ? 60 : (d == 2 ? 24 : 10);
    const PointSet a = bernoulli_set(Box::cube(d, 0, extent), Rational(static_cast<long>(1 + mt() % 9), 10), rng);
    if (a.empty()) continue;
    const Box bounds = bounding_box(a);
    const Int side = 1 + static_cast<Int>(mt() % (d == 3 ? 8 : 32));
    const std::vector<Int> sides{side};
    EXPECT_EQ(banach_density_estimate(a, sides)[0].value, naive_best(a, bounds, side)) << trial;
  }
}

TEST(BanachEstimate, TranslationInvariant) {
  Rng rng(3);
  const PointSet a = bernoulli_set(Box::cube(2, 0, 20), Rational(1, 3), rng);
  const std::vector<Int> sides{3, 7, 12};
  const auto base = banach_density_estimate(a, sides);
  const auto moved = banach_density_estimate(a.translated({-500, 77}), sides);
  for (std::size_t i = 0; i < sides.size(); ++i) EXPECT_EQ(base[i].value, moved[i].value);
}

TEST(BanachEstimate, PathLiftDensityAboveInverseBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const PathLift lift = sequence_to_path(random_gap_sequence(300, Rational(3), rng));
    const std::vector<Int> sides{4, 8, 16, 32};
    for (const auto& row : banach_density_estimate(lift.set, sides, lift.map.window()))
      EXPECT_GE(row.value, Rational(1, 3) - Rational(2, row.side)) << "seed " << seed << " L " << row.side;
  }
}

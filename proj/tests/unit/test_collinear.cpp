#include <gtest/gtest.h>

#include <random>

#include "collinear_lab/collinear.hpp"
#include "collinear_lab/error.hpp"
#include "collinear_lab/generators.hpp"
#include "oracles.hpp"

using namespace clab;

namespace {

std::vector<LatticePoint> random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim, Int range) {
  std::vector<LatticePoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(oracle::random_point(rng, dim, -range, range));
  return pts;
}

}  // namespace

TEST(MaxCollinear, WorkedExamples) {
  const std::vector<LatticePoint> five{{0, 0}, {1, 2}, {2, 4}, {3, 5}, {5, 1}};
  for (const auto& r : {max_collinear_naive(five), max_collinear_hash(five)}) {
    EXPECT_EQ(r.count, 3u);
    ASSERT_TRUE(r.line.has_value());
    EXPECT_EQ(*r.line, canonical_line({0, 0}, {1, 2}));
    EXPECT_EQ(r.points, (std::vector<LatticePoint>{{0, 0}, {1, 2}, {2, 4}}));
  }
  const std::vector<LatticePoint> single{{7, 7}};
  EXPECT_EQ(max_collinear_naive(single).count, 1u);
  EXPECT_FALSE(max_collinear_hash(single).line.has_value());
  const std::vector<LatticePoint> diag{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {5, 0, 0}};
  EXPECT_EQ(max_collinear_hash(diag).count, 3u);
  EXPECT_EQ(*max_collinear_naive(diag).line, canonical_line({0, 0, 0}, {1, 1, 1}));
}

TEST(MaxCollinear, EmptyAndDuplicates) {
  EXPECT_EQ(max_collinear_naive({}).count, 0u);
  EXPECT_EQ(max_collinear_hash({}).count, 0u);
  const std::vector<LatticePoint> same(6, LatticePoint{4, -1, 2});
  EXPECT_EQ(max_collinear_naive(same).count, 1u);
  EXPECT_EQ(max_collinear_hash(same).count, 1u);
  EXPECT_FALSE(max_collinear_hash(same).line.has_value());
  const std::vector<LatticePoint> doubled{{0, 0}, {0, 0}, {1, 1}, {1, 1}, {2, 3}};
  EXPECT_EQ(max_collinear_hash(doubled).count, 2u);
}

TEST(MaxCollinear, MixedDimensionsRejected) {
  const std::vector<LatticePoint> mixed{{0, 0}, {1, 1, 1}};
  EXPECT_THROW(max_collinear_naive(mixed), Error);
  EXPECT_THROW(max_collinear_hash(mixed), Error);
}

TEST(MaxCollinear, EnginesAgreeWithBruteForce) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 2 + trial % 3;
    const auto pts = random_cloud(rng, 5 + rng() % 40, dim, 4);
    const auto naive = max_collinear_naive(pts);
    const auto hash = max_collinear_hash(pts, 1 + trial % 3);
    EXPECT_EQ(naive.count, oracle::max_collinear_brute(pts));
    EXPECT_EQ(hash.count, naive.count);
    EXPECT_EQ(hash.line, naive.line);
    EXPECT_EQ(hash.points, naive.points);
  }
}

TEST(MaxCollinear, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(11);
  const auto pts = random_cloud(rng, 300, 2, 20);
  const auto one = max_collinear_hash(pts, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto many = max_collinear_hash(pts, t);
    EXPECT_EQ(many.count, one.count);
    EXPECT_EQ(many.line, one.line);
  }
}

TEST(MaxCollinear, MonotoneUnderInsertion) {
  std::mt19937_64 rng(12);
  auto pts = random_cloud(rng, 30, 3, 3);
  std::size_t prev = max_collinear_hash(pts).count;
  for (int i = 0; i < 30; ++i) {
    pts.push_back(oracle::random_point(rng, 3, -3, 3));
    const std::size_t now = max_collinear_hash(pts).count;
    EXPECT_GE(now, prev);
    prev = now;
  }
}

TEST(MaxCollinear, ShiftAndScaleEquivariance) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_cloud(rng, 40, 2, 5);
    const auto base = max_collinear_hash(pts);
    const LatticePoint v = oracle::random_point(rng, 2, -100, 100);
    const Int lambda = 1 + static_cast<Int>(rng() % 5);
    std::vector<LatticePoint> moved;
    for (const auto& p : pts) moved.push_back(p.scaled(lambda) + v);
    const auto r = max_collinear_hash(moved);
    EXPECT_EQ(r.count, base.count);
    ASSERT_TRUE(r.line && base.line);
    const LatticePoint a = base.points[0].scaled(lambda) + v, b = base.points[1].scaled(lambda) + v;
    // Positive scaling and translation keep the point order, so the same pair wins.
    EXPECT_EQ(*r.line, canonical_line(a, b));
    EXPECT_EQ(r.line->direction(), base.line->direction());
  }
}

TEST(MaxCollinear, WalkSubsampleAgreesWithNaive) {
  Rng rng(14);
  const LipschitzMap w = walk_map(Box({1}, {10000}), rng);
  std::vector<LatticePoint> images;
  for (std::size_t i = 0; i < w.window().size(); ++i) images.push_back(w.value_at_index(i));
  EXPECT_GE(max_collinear_hash(images).count, 5u);
  std::vector<LatticePoint> sub(images.begin(), images.begin() + 200);
  EXPECT_EQ(max_collinear_hash(sub).count, max_collinear_naive(sub).count);
}

TEST(FindK, FlatGraphTakesEverything) {
  const Box w({0}, {9});
  const LipschitzMap f = graph_embed(ScalarField{w, std::vector<Int>(10, 0)}, Rational(0));
  const PointSet a = full_set(w);
  const KCollinearResult r = find_k_collinear(f, a, 10);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.domain, std::vector<LatticePoint>(a.begin(), a.end()));
  EXPECT_FALSE(find_k_collinear(f, a, 11).found);
}

TEST(FindK, TwoPointsAreLeastPair) {
  Rng rng(15);
  const LipschitzMap f = affine_map(Box::cube(2, 0, 4), std::vector<Int>{1, 2});
  const PointSet a(2, {{3, 3}, {1, 4}, {2, 0}});
  const KCollinearResult r = find_k_collinear(f, a, 2);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.domain, (std::vector<LatticePoint>{{1, 4}, {2, 0}}));
}

TEST(FindK, StaircaseEvensAgainstOracle) {
  const Box w({0}, {100});
  const LipschitzMap f = staircase_map(w);
  std::vector<LatticePoint> evens;
  for (Int n = 0; n <= 100; n += 2) evens.emplace_back(std::vector<Int>{n});
  const PointSet a(1, evens);
  std::vector<LatticePoint> images;
  for (const auto& x : a) images.push_back(f(x));
  const std::size_t expected = oracle::max_collinear_brute(images);
  const KCollinearResult r = find_k_collinear(f, a, 4);
  EXPECT_EQ(r.max_count, expected);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.domain, (std::vector<LatticePoint>{{0}, {2}, {4}, {6}}));
  for (std::size_t i = 2; i < r.domain.size(); ++i)
    EXPECT_TRUE(collinear3(f(r.domain[0]), f(r.domain[1]), f(r.domain[i])));
}

TEST(FindK, SucceedsIffCountReachesK) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Box w = Box::cube(2, 1, 5);
    const LipschitzMap f = generate_map("random", w, 1, 0, rng);
    const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
    std::vector<LatticePoint> images;
    for (const auto& x : a) images.push_back(f(x));
    const std::size_t count = oracle::max_collinear_brute(images);
    for (std::size_t k = 1; k <= count + 1; ++k) {
      const KCollinearResult r = find_k_collinear(f, a, k);
      EXPECT_EQ(r.found, k <= count) << "seed " << seed << " k " << k;
      if (!r.found) continue;
      EXPECT_EQ(r.domain.size(), k);
      for (std::size_t i = 2; i < r.domain.size(); ++i)
        EXPECT_TRUE(collinear3(f(r.domain[0]), f(r.domain[1]), f(r.domain[i])));
    }
  }
}

TEST(FindK, LexicographicallyLeastWitness) {
  // Brute force over all k-subsets of a small set.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    const Box w({1}, {9});
    const LipschitzMap f = walk_map(w, rng);
    const PointSet a = full_set(w);
    const std::size_t k = 3;
    std::optional<std::vector<LatticePoint>> best;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        for (std::size_t l = j + 1; l < a.size(); ++l) {
          const LatticePoint p = f(a[i]), q = f(a[j]), r = f(a[l]);
          if (p == q || p == r || q == r || !collinear3(p, q, r)) continue;
          std::vector<LatticePoint> x{a[i], a[j], a[l]};
          if (!best || x < *best) best = x;
        }
    const KCollinearResult r = find_k_collinear(f, a, k);
    ASSERT_EQ(r.found, best.has_value()) << seed;
    if (best) EXPECT_EQ(r.domain, *best) << seed;
  }
}

TEST(FindK, Errors) {
  const LipschitzMap f = flat_map(Box({0}, {3}));
  EXPECT_THROW(find_k_collinear(f, PointSet(1, {{0}}), 0), Error);
  try {
    find_k_collinear(f, PointSet(1, {{7}}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfWindow);
  }
}

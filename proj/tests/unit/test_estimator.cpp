#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "collinear_lab/error.hpp"
#include "collinear_lab/estimator.hpp"
#include "collinear_lab/generators.hpp"
#include "oracles.hpp"

using namespace clab;

namespace {

EstimateWitness path_witness(const std::vector<std::pair<Int, Int>>& images, std::size_t k) {
  const Int side = static_cast<Int>(images.size());
  const Box w({1}, {side});
  std::vector<Int> values;
  for (const auto& [x, y] : images) {
    values.push_back(x);
    values.push_back(y);
  }
  EstimateWitness wit{1, k, Rational(1), Rational(1), side, full_set(w), LipschitzMap(w, 1, Rational(1), values), 0,
                      "manual"};
  return wit;
}

// Walks in Z^2 with steps of length at most 1, as image lists with multiplicity.
bool some_walk_avoids(std::size_t length, std::size_t k, std::vector<LatticePoint>& walk) {
  if (walk.size() == length) return oracle::max_collinear_brute_weighted(walk) < k;
  static const Int steps[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& s : steps) {
    walk.push_back(walk.back() + LatticePoint{s[0], s[1]});
    // Prune as soon as a prefix already has k on a line.
    if (oracle::max_collinear_brute_weighted(walk) < k && some_walk_avoids(length, k, walk)) {
      walk.pop_back();
      return true;
    }
    walk.pop_back();
  }
  return false;
}

}  // namespace

TEST(VerifyNoCollinear, SquareAndLine) {
  const EstimateWitness square = path_witness({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 3);
  EXPECT_TRUE(verify_witness(square));
  const auto cert = verify_no_k_collinear(square.map, square.set, 3);
  EXPECT_TRUE(cert.holds);
  EXPECT_EQ(cert.max_count, 2u);

  const EstimateWitness bent = path_witness({{0, 0}, {1, 0}, {2, 0}, {2, 1}}, 3);
  EXPECT_FALSE(verify_witness(bent));
  const auto bad = verify_no_k_collinear(bent.map, bent.set, 3);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.max_count, 3u);
  EXPECT_EQ(bad.domain, (std::vector<LatticePoint>{{1}, {2}, {3}}));
}

TEST(VerifyNoCollinear, RepeatedImagesCountWithMultiplicity) {
  const EstimateWitness stay = path_witness({{0, 0}, {0, 0}, {1, 0}}, 3);
  EXPECT_FALSE(verify_witness(stay));
  EXPECT_EQ(verify_no_k_collinear(stay.map, stay.set, 3).max_count, 3u);
  const EstimateWitness same = path_witness({{0, 0}, {0, 0}}, 3);
  EXPECT_TRUE(verify_witness(same));
}

TEST(VerifyWitness, RejectsLowDensityAndSteepSteps) {
  EstimateWitness sparse = path_witness({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 3);
  sparse.set = PointSet(1, {{1}, {2}});
  EXPECT_FALSE(verify_witness(sparse));
  sparse.delta = Rational(1, 2);
  EXPECT_TRUE(verify_witness(sparse));

  const EstimateWitness steep = path_witness({{0, 0}, {2, 0}, {2, 1}}, 3);
  EXPECT_FALSE(verify_witness(steep));
}

TEST(Estimate, PairsAreAlwaysCollinear) {
  for (std::size_t d = 1; d <= 3; ++d) {
    EstimateOptions opts;
    opts.budget = 200;
    opts.max_side = 4;
    const Rational delta = Rational(1, 1 << d) + Rational(1, 100);
    const EstimateResult r = estimate_l_lower(d, 2, delta, Rational(1), opts);
    EXPECT_EQ(r.l_lower, 1) << d;
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->method, "trivial");
  }
}

TEST(Estimate, ExactUnitStepCase) {
  EstimateOptions opts;
  opts.max_side = 10;
  const EstimateResult r = estimate_l_lower(1, 3, Rational(1), Rational(1), opts);
  EXPECT_EQ(r.l_lower, 4);
  EXPECT_TRUE(r.exact);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(verify_witness(*r.witness));
  EXPECT_EQ(r.levels.back().side, 5);
  EXPECT_FALSE(r.levels.back().found);

  // Independent enumeration of unit-step walks.
  for (std::size_t len = 1; len <= 6; ++len) {
    std::vector<LatticePoint> walk{LatticePoint{0, 0}};
    EXPECT_EQ(some_walk_avoids(len, 3, walk), len <= 4) << len;
  }
}

TEST(Estimate, HillClimbWitnessesReverify) {
  EstimateOptions opts;
  opts.budget = 4000;
  opts.restarts = 4;
  opts.max_side = 14;
  opts.seed = 3;
  const EstimateResult r = estimate_l_lower(1, 4, Rational(1, 2), Rational(2), opts);
  EXPECT_GE(r.l_lower, 6);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(verify_witness(*r.witness));
  EXPECT_EQ(r.witness->side, r.l_lower);
  EXPECT_GE(r.witness->set.size() * 2, static_cast<std::size_t>(r.l_lower));
}

TEST(Estimate, TwoDimensionalWitness) {
  EstimateOptions opts;
  opts.budget = 3000;
  opts.restarts = 3;
  opts.max_side = 4;
  const EstimateResult r = estimate_l_lower(2, 4, Rational(1, 2), Rational(1), opts);
  EXPECT_GE(r.l_lower, 2);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(verify_witness(*r.witness));
}

TEST(Estimate, PriorWitnessesKeepMonotonicity) {
  EstimateOptions opts;
  opts.budget = 2000;
  opts.restarts = 2;
  opts.max_side = 10;
  const EstimateResult k3 = estimate_l_lower(1, 3, Rational(1, 2), Rational(1), opts);
  ASSERT_TRUE(k3.witness.has_value());
  EstimateOptions with_prior = opts;
  with_prior.prior = {*k3.witness};
  with_prior.budget = 1;
  with_prior.restarts = 1;
  const EstimateResult k4 = estimate_l_lower(1, 4, Rational(1, 2), Rational(1), with_prior);
  EXPECT_GE(k4.l_lower, k3.l_lower);
  // A smaller delta is also dominated.
  const EstimateResult thinner = estimate_l_lower(1, 3, Rational(1, 3), Rational(1), with_prior);
  EXPECT_GE(thinner.l_lower, k3.l_lower);
}

TEST(Estimate, ThreadCountDoesNotChangeResult) {
  EstimateOptions one;
  one.budget = 3000;
  one.restarts = 6;
  one.max_side = 12;
  one.seed = 11;
  EstimateOptions three = one;
  three.threads = 3;
  const EstimateResult a = estimate_l_lower(1, 4, Rational(2, 3), Rational(2), one);
  const EstimateResult b = estimate_l_lower(1, 4, Rational(2, 3), Rational(2), three);
  EXPECT_EQ(a.l_lower, b.l_lower);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) EXPECT_EQ(a.levels[i].evaluations, b.levels[i].evaluations);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_TRUE(std::ranges::equal(a.witness->map.raw_values(), b.witness->map.raw_values()));
  EXPECT_TRUE(std::ranges::equal(a.witness->set.points(), b.witness->set.points()));
}

TEST(Estimate, ArchiveRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "clab_archive_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  EstimateOptions opts;
  opts.max_side = 10;
  const EstimateResult r = estimate_l_lower(1, 3, Rational(1), Rational(1), opts);
  ASSERT_TRUE(r.witness.has_value());
  save_witness(*r.witness, (dir / "d1k3").string(), opts.budget);
  const auto loaded = load_witness_archive(dir.string());
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].side, 4);
  EXPECT_EQ(loaded[0].k, 3u);
  EXPECT_EQ(loaded[0].delta, Rational(1));
  EXPECT_EQ(loaded[0].method, "exhaustive");
  EXPECT_TRUE(verify_witness(loaded[0]));

  EstimateOptions reuse;
  reuse.prior = loaded;
  reuse.max_side = 4;
  const EstimateResult again = estimate_l_lower(1, 3, Rational(1), Rational(1), reuse);
  EXPECT_EQ(again.l_lower, 4);
  EXPECT_EQ(again.witness->method, "archive");
  std::filesystem::remove_all(dir);
}

TEST(Estimate, ParameterErrors) {
  auto code = [](std::size_t d, std::size_t k, Rational delta, Rational m) {
    try {
      estimate_l_lower(d, k, delta, m, EstimateOptions{});
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  EXPECT_EQ(code(1, 3, Rational(3, 2), Rational(1)), ErrorCode::Infeasible);
  EXPECT_EQ(code(1, 3, Rational(0), Rational(1)), ErrorCode::InvalidArgument);
  EXPECT_EQ(code(1, 1, Rational(1, 2), Rational(1)), ErrorCode::InvalidArgument);
  EXPECT_EQ(code(4, 3, Rational(1, 2), Rational(1)), ErrorCode::InvalidArgument);
  EXPECT_EQ(code(1, 3, Rational(1, 2), Rational(9)), ErrorCode::InvalidArgument);
}

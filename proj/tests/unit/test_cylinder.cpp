#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "collinear_lab/cylinder.hpp"
#include "collinear_lab/error.hpp"
#include "collinear_lab/generators.hpp"

using namespace clab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Internal;
}

double to_d(const Rational& q) { return q.get_d(); }

}  // namespace

TEST(MeanSlope, Examples) {
  const std::vector<Int> g{1, 2};
  const LipschitzMap f = affine_map(Box::cube(2, 0, 10), g);
  EXPECT_EQ(mean_slope(f, GeneralizedSegment(LatticePoint{0, 0}, LatticePoint{3, 1})), LatticePoint({3, 1, 5}));
  EXPECT_EQ(mean_slope(f, GeneralizedSegment(parse_rational_point("1/2,1/2"), parse_rational_point("5/2,1/2"))),
            LatticePoint({2, 0, 2}));
  EXPECT_EQ(code_of([&] { mean_slope(f, GeneralizedSegment(LatticePoint{2, 2}, LatticePoint{2, 2})); }),
            ErrorCode::DegenerateSlope);
}

TEST(BuildCylinder, RadiusAndMembership) {
  const GeneralizedSegment seg(LatticePoint{0, 0}, LatticePoint{100, 0});
  const Cylinder cyl = build_cylinder(seg, Rational(1, 5));
  EXPECT_TRUE(cyl.radius_squared() == 400);
  EXPECT_TRUE(cyl.contains({50, 20}));
  EXPECT_FALSE(cyl.contains({50, 21}));
  EXPECT_TRUE(cyl.contains({-20, 0}));
  EXPECT_FALSE(cyl.contains({-15, 15}));
  EXPECT_TRUE(std::is_sorted(cyl.points().begin(), cyl.points().end()));
}

TEST(BuildCylinder, MatchesDistanceToPath) {
  std::mt19937_64 rng(1);
  int built = 0;
  for (int trial = 0; trial < 40 && built < 8; ++trial) {
    const std::size_t d = 2 + trial % 2;
    std::vector<Rational> s(d), e(d);
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = Rational(static_cast<long>(rng() % 30), 3);
      e[i] = s[i] + Rational(static_cast<long>(rng() % 100) + 20, 3);
    }
    const GeneralizedSegment seg{RationalPoint(s), RationalPoint(e)};
    const Rational eps(3, 4);
    if (!thick_enough(seg, eps)) continue;
    ++built;
    const Cylinder cyl = build_cylinder(seg, eps);
    const auto path = segment_points(seg);
    const Box b = cyl.bounds();
    std::size_t inside = 0;
    b.for_each([&](const LatticePoint& p) {
      Wide best = -1;
      for (const auto& q : path) {
        const Wide d2 = distance_squared(p, q);
        if (best < 0 || d2 < best) best = d2;
      }
      const bool expected = best <= cyl.radius_squared();
      inside += expected;
      EXPECT_EQ(cyl.contains(p), expected);
    });
    EXPECT_EQ(inside, cyl.size());
  }
  EXPECT_GE(built, 4);
}

TEST(BuildCylinder, ThinSegmentsRejected) {
  const GeneralizedSegment seg(LatticePoint{0, 0}, LatticePoint{10, 0});
  EXPECT_FALSE(thick_enough(seg, Rational(1, 5)));
  EXPECT_EQ(code_of([&] { build_cylinder(seg, Rational(1, 5)); }), ErrorCode::ThinCylinder);
  EXPECT_EQ(code_of([&] { build_cylinder(seg, Rational(0)); }), ErrorCode::InvalidArgument);
}

TEST(CheckConditions, FlatMapAlongAxis) {
  const Box w = Box::cube(2, 0, 140);
  const LipschitzMap f = flat_map(w);
  const PointSet a = full_set(w);
  const GeneralizedSegment seg(LatticePoint{20, 50}, LatticePoint{120, 50});
  const ConditionReport r =
      check_conditions(f, a, seg, {Rational(1, 5), Rational(1, 4), parse_rational_point("1,0,0")});
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.z_i.margin.exact());
  EXPECT_EQ(r.z_i.margin.lo, Rational(1, 5));
  // Piece closures overlap the next lattice step, so one unit of lag shows.
  EXPECT_EQ(r.z_ii.worst_sq, 1);
  EXPECT_EQ(r.z_ii.bound_sq, Rational(400));
  EXPECT_EQ(r.z_iii.hits, r.z_iii.size);

  const ConditionReport off =
      check_conditions(f, a, seg, {Rational(1, 5), Rational(1, 4), parse_rational_point("0,1,0")});
  EXPECT_FALSE(off.z_i.pass);
  EXPECT_TRUE(off.z_ii.pass);
  EXPECT_LT(off.z_i.margin.hi, 0);
  EXPECT_LE(off.z_i.margin.lo, Rational(1, 5) - Rational(141421, 100000));
}

TEST(CheckConditions, SparseSetFailsDensity) {
  const Box w = Box::cube(2, 0, 120);
  const LipschitzMap f = flat_map(w);
  const PointSet a(2, {{60, 50}});
  const GeneralizedSegment seg(LatticePoint{10, 50}, LatticePoint{110, 50});
  const ConditionReport r =
      check_conditions(f, a, seg, {Rational(1, 5), Rational(1, 4), parse_rational_point("1,0,0")});
  EXPECT_FALSE(r.z_iii.pass);
  EXPECT_EQ(r.z_iii.hits, 1u);
}

TEST(CheckSlope, MarginAgreesWithFloatingPoint) {
  std::mt19937_64 rng(2);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<Int> s(n);
    std::vector<Rational> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<Int>(rng() % 21) - 10;
      w[i] = Rational(static_cast<long>(rng() % 21) - 10, static_cast<long>(1 + rng() % 4));
    }
    const LatticePoint slope(s);
    if (slope.is_zero() || std::all_of(w.begin(), w.end(), [](const Rational& q) { return q == 0; })) continue;
    const Rational eps(static_cast<long>(1 + rng() % 20), 10);
    const SlopeCondition c = check_slope(slope, {eps, Rational(1, 2), RationalPoint(w)});
    double sn = 0, wn = 0, dot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sn += double(s[i]) * double(s[i]);
      wn += to_d(w[i]) * to_d(w[i]);
      dot += double(s[i]) * to_d(w[i]);
    }
    const double dist = std::sqrt(std::max(0.0, 2 - 2 * dot / std::sqrt(sn * wn)));
    const double margin = to_d(eps) - dist;
    EXPECT_LE(to_d(c.margin.lo), margin + 1e-9);
    EXPECT_GE(to_d(c.margin.hi), margin - 1e-9);
    EXPECT_LE(to_d(c.margin.width()), 1e-6);
    if (std::abs(margin) > 1e-9) {
      EXPECT_EQ(c.pass, margin > 0) << slope.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(CheckLine, AffineDeviationBoundedByFloorError) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Int> g{static_cast<Int>(rng() % 5) - 2, static_cast<Int>(rng() % 5) - 2};
    const Box w = Box::cube(2, 0, 60);
    const LipschitzMap f = affine_map(w, g);
    const LatticePoint s = LatticePoint{static_cast<Int>(rng() % 61), static_cast<Int>(rng() % 61)};
    const LatticePoint e = LatticePoint{static_cast<Int>(rng() % 61), static_cast<Int>(rng() % 61)};
    if (s == e) continue;
    const LineCondition c = check_line(f, GeneralizedSegment(s, e), Rational(1, 2));
    EXPECT_LE(c.worst_sq, Rational(2 * (1 + g[0] * g[0] + g[1] * g[1])));
    EXPECT_GE(c.worst_sq, 0);
  }
}

TEST(Scan, EmptySetHasNoWitness) {
  const Box w = Box::cube(2, 0, 100);
  const ScanOutcome out = scan_for_witness(flat_map(w), PointSet(2), Rational(1, 2), Rational(1, 4),
                                           sign_pattern_directions(3), ScanOptions{});
  EXPECT_FALSE(out.witness.has_value());
  EXPECT_EQ(out.candidates, 0u);
}

TEST(Scan, SignPatternDirections) {
  const auto dirs = sign_pattern_directions(3);
  EXPECT_EQ(dirs.size(), 26u);
  EXPECT_EQ(dirs.front(), parse_rational_point("-1,-1,-1"));
  EXPECT_EQ(dirs.back(), parse_rational_point("1,1,1"));
}

TEST(Scan, FindsWitnessForAffineMapAndItReverifies) {
  const Box w = Box::cube(2, 0, 100);
  const std::vector<Int> g{1, 1};
  const LipschitzMap f = affine_map(w, g);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed);
    const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
    ScanOptions opts;
    opts.seed = seed;
    const ScanOutcome out = scan_for_witness(f, a, Rational(1, 2), Rational(1, 4), sign_pattern_directions(3), opts);
    ASSERT_TRUE(out.witness.has_value()) << seed;
    const Witness& wit = *out.witness;
    const ConditionReport again = check_conditions(f, a, wit.segment, {Rational(1, 2), Rational(1, 4), wit.w});
    EXPECT_TRUE(again.all_pass());
    EXPECT_EQ(again.z_iii.hits, wit.report.z_iii.hits);
    EXPECT_GE(out.slope_pass, out.line_pass);
  }
}

TEST(Scan, ThreadCountDoesNotChangeWitness) {
  const Box w = Box::cube(2, 0, 100);
  Rng rng(4);
  const LipschitzMap f = surface_map(w, rng);
  const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
  ScanOptions one;
  one.seed = 9;
  one.budget = 3000;
  ScanOptions many = one;
  many.threads = 3;
  const auto dirs = sign_pattern_directions(3);
  const ScanOutcome r1 = scan_for_witness(f, a, Rational(1, 2), Rational(1, 4), dirs, one);
  const ScanOutcome r3 = scan_for_witness(f, a, Rational(1, 2), Rational(1, 4), dirs, many);
  EXPECT_EQ(r1.candidates, r3.candidates);
  EXPECT_EQ(r1.witness.has_value(), r3.witness.has_value());
  if (r1.witness) EXPECT_EQ(r1.witness->segment.to_string(), r3.witness->segment.to_string());
}

TEST(Scan, TranslationEquivariant) {
  const std::vector<Int> g{1, 0};
  const Box w = Box::cube(2, 0, 100);
  const Box moved_w = Box::cube(2, 37, 137);
  Rng rng(5);
  const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
  const LatticePoint v{37, 37};
  ScanOptions opts;
  opts.seed = 2;
  const auto dirs = sign_pattern_directions(3);
  const ScanOutcome base = scan_for_witness(affine_map(w, g), a, Rational(1, 2), Rational(1, 4), dirs, opts);
  const ScanOutcome moved =
      scan_for_witness(affine_map(moved_w, g), a.translated(v), Rational(1, 2), Rational(1, 4), dirs, opts);
  ASSERT_TRUE(base.witness && moved.witness);
  EXPECT_EQ(moved.witness->segment.first(), base.witness->segment.first() + v);
  EXPECT_EQ(moved.witness->segment.last(), base.witness->segment.last() + v);
  EXPECT_EQ(moved.candidates, base.candidates);
}

#include <gtest/gtest.h>

#include <random>

#include "collinear_lab/covering.hpp"
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

// Smallest b by direct rational arithmetic; a_l is the nearest integer.
std::pair<Int, std::vector<Int>> dirichlet_brute(const std::vector<Rational>& u, Int n) {
  for (Int b = 1;; ++b) {
    std::vector<Int> a;
    bool ok = true;
    for (const auto& x : u) {
      const Rational bx = x * static_cast<long>(b);
      const BigInt fl = floor_of(bx);
      const Rational frac = bx - Rational(fl);
      const bool up = frac * 2 >= 1;
      const Rational dist = up ? 1 - frac : frac;
      ok = ok && dist * static_cast<long>(n) < 1;
      a.push_back(to_int(fl) + (up ? 1 : 0));
    }
    if (ok) return {b, a};
  }
}

struct FlatRow {
  Box window = Box::cube(2, 0, 140);
  LipschitzMap f = flat_map(Box::cube(2, 0, 140));
  PointSet a = full_set(Box::cube(2, 0, 140));
  Cylinder cyl = build_cylinder(GeneralizedSegment(LatticePoint{20, 50}, LatticePoint{120, 50}), Rational(1, 5));
};

}  // namespace

TEST(Dirichlet, Examples) {
  const std::vector<Rational> half{Rational(1, 2)};
  const auto c = dirichlet_approx(half, 2);
  EXPECT_EQ(c.b, 2);
  EXPECT_EQ(c.a, std::vector<Int>{1});
  EXPECT_EQ(c.max_error(), 0);
  EXPECT_EQ(c.bound(), Rational(1, 4));

  const std::vector<Rational> three{Rational(3)};
  const auto c3 = dirichlet_approx(three, 7);
  EXPECT_EQ(c3.b, 1);
  EXPECT_EQ(c3.a, std::vector<Int>{3});

  const std::vector<Rational> root2{Rational(239, 169)};
  const auto cr = dirichlet_approx(root2, 5);
  EXPECT_EQ(cr.b, 2);
  EXPECT_EQ(cr.a, std::vector<Int>{3});
  EXPECT_EQ(cr.max_error(), Rational(29, 338));
  EXPECT_LE(cr.max_error(), cr.bound());
  EXPECT_TRUE(cr.verify());
}

TEST(Dirichlet, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const Int n = 2 + static_cast<Int>(rng() % 9);
    std::vector<Rational> u;
    for (std::size_t l = 0; l < d; ++l) {
      Rational q(static_cast<long>(rng() % 20001) - 10000, static_cast<long>(1 + rng() % 997));
      q.canonicalize();
      u.push_back(q);
    }
    const auto cert = dirichlet_approx(u, n);
    const auto [b, a] = dirichlet_brute(u, n);
    EXPECT_EQ(cert.b, b);
    EXPECT_EQ(cert.a, a);
    EXPECT_TRUE(cert.verify());
    Int limit = 1;
    for (std::size_t l = 0; l < d; ++l) limit *= n;
    EXPECT_LE(cert.b, limit);
  }
}

TEST(Dirichlet, Errors) {
  const std::vector<Rational> u{Rational(1, 3)};
  EXPECT_EQ(code_of([&] { dirichlet_approx(u, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { dirichlet_approx(std::vector<Rational>{}, 3); }), ErrorCode::InvalidArgument);
}

TEST(Projection, Examples) {
  EXPECT_EQ(project_along(parse_rational_point("2,1"), parse_rational_point("1,4")), parse_rational_point("7/2"));
  EXPECT_EQ(project_along(parse_rational_point("1,0,0"), parse_rational_point("5,6,7")), parse_rational_point("6,7"));
  EXPECT_EQ(code_of([] { project_along(parse_rational_point("0,1"), parse_rational_point("1,1")); }),
            ErrorCode::NonTransverse);
}

TEST(Projection, IntegerPointsLandOnFinerLatticeAndInUnion) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + trial % 3;
    std::vector<Int> s(d + 1), x(d + 1);
    s[0] = 1 + static_cast<Int>(rng() % 12);
    for (std::size_t i = 1; i <= d; ++i) s[i] = static_cast<Int>(rng() % 31) - 15;
    for (auto& c : x) c = static_cast<Int>(rng() % 2001) - 1000;
    const RationalPoint p = project_along(RationalPoint(LatticePoint(s)), RationalPoint(LatticePoint(x)));
    for (std::size_t i = 0; i < d; ++i) EXPECT_EQ(Rational(p[i] * s[0]).get_den(), 1);
    EXPECT_TRUE(trace_in_lattice_union(p, LatticePoint(s)));
  }
  // A point off every translate.
  EXPECT_FALSE(trace_in_lattice_union(parse_rational_point("1/3"), LatticePoint{2, 1}));
}

TEST(LineFamily, FlatMapAlongFirstAxis) {
  FlatRow st;
  const LineFamily fam = build_line_family(st.f, st.cyl, LatticePoint{1, 0, 0});
  // One line per cylinder row.
  EXPECT_EQ(fam.size(), 41u);
  for (const auto& z : st.cyl.points()) {
    const LatticePoint y = st.f(z);
    const auto it = fam.line_of_point.find(y);
    ASSERT_NE(it, fam.line_of_point.end());
    EXPECT_TRUE(fam.lines[it->second].contains(y));
    EXPECT_TRUE(fam.lines[it->second].contains(y - LatticePoint{1, 0, 0}.scaled(3)));
  }
  for (const auto& t : fam.traces) EXPECT_TRUE(trace_in_lattice_union(t, fam.s));
  EXPECT_EQ(code_of([&] { build_line_family(st.f, st.cyl, LatticePoint{0, 1, 0}); }), ErrorCode::NonTransverse);
}

TEST(LineFamily, CoversRandomSurfaceImages) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const Box w = Box::cube(2, 0, 140);
    const LipschitzMap f = surface_map(w, rng);
    const Cylinder cyl = build_cylinder(GeneralizedSegment(LatticePoint{20, 40}, LatticePoint{110, 90}), Rational(1, 5));
    const LatticePoint s{3, -1, 2};
    const LineFamily fam = build_line_family(f, cyl, s, 2);
    std::size_t hits = 0;
    for (const auto& z : cyl.points()) {
      const auto it = fam.line_of_point.find(f(z));
      ASSERT_NE(it, fam.line_of_point.end());
      EXPECT_TRUE(fam.lines[it->second].contains(f(z)));
      ++hits;
    }
    EXPECT_EQ(hits, cyl.size());
    EXPECT_LE(fam.size(), cyl.size());
    for (const auto& t : fam.traces) EXPECT_TRUE(trace_in_lattice_union(t, s));
  }
}

TEST(Extract, CentralRowWins) {
  FlatRow st;
  const LineFamily fam = build_line_family(st.f, st.cyl, LatticePoint{1, 0, 0});
  const Extraction ex = extract_line(st.f, st.a, st.cyl, fam, 100);
  ASSERT_TRUE(ex.found);
  EXPECT_EQ(ex.best_bucket, 141u);
  EXPECT_EQ(ex.hits, st.cyl.size());
  ASSERT_EQ(ex.domain.size(), 100u);
  for (Int i = 0; i < 100; ++i) EXPECT_EQ(ex.domain[static_cast<std::size_t>(i)], LatticePoint({i, 50}));
  EXPECT_FALSE(extract_line(st.f, st.a, st.cyl, fam, 142).found);
}

TEST(Extract, PigeonholeGuaranteesBucket) {
  std::mt19937_64 mt(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Box w = Box::cube(2, 0, 140);
    const LipschitzMap f = surface_map(w, rng);
    const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
    const Cylinder cyl = build_cylinder(GeneralizedSegment(LatticePoint{20, 50}, LatticePoint{120, 60}), Rational(1, 5));
    const LatticePoint s{1, static_cast<Int>(mt() % 3) - 1, static_cast<Int>(mt() % 3) - 1};
    const LineFamily fam = build_line_family(f, cyl, s);
    const std::size_t k = 1 + mt() % 6;
    const Extraction ex = extract_line(f, a, cyl, fam, k);
    if (ex.hits > k * fam.size()) EXPECT_TRUE(ex.found);
    EXPECT_EQ(ex.found, ex.best_bucket >= k);
    if (!ex.found) continue;
    ASSERT_TRUE(ex.line.has_value());
    for (const auto& x : ex.domain) {
      EXPECT_TRUE(a.contains(x));
      EXPECT_TRUE(cyl.contains(x));
      EXPECT_TRUE(ex.line->contains(f(x)));
    }
  }
}

TEST(Pipeline, AffineMapSucceedsAndVerifies) {
  const Box w = Box::cube(2, 0, 100);
  const std::vector<Int> g{1, 1};
  const LipschitzMap f = affine_map(w, g);
  Rng rng(4);
  const PointSet a = bernoulli_set(w, Rational(1, 2), rng);
  PipelineOptions opts;
  const PipelineReport r = full_pipeline(f, a, 4, 2, opts);
  EXPECT_EQ(r.stage, PipelineStage::Done);
  EXPECT_TRUE(r.verified);
  ASSERT_EQ(r.extraction.domain.size(), 4u);
  ASSERT_TRUE(r.line.has_value());
  for (const auto& x : r.extraction.domain) {
    EXPECT_TRUE(a.contains(x));
    EXPECT_TRUE(r.line->contains(f(x)));
  }
  EXPECT_TRUE(r.dirichlet->verify());
  EXPECT_EQ(r.epsilon, r.dirichlet->bound());
}

TEST(Pipeline, EmptySetStopsAtWitness) {
  const LipschitzMap f = flat_map(Box::cube(2, 0, 50));
  const PipelineReport r = full_pipeline(f, PointSet(2), 3, 4, PipelineOptions{});
  EXPECT_EQ(r.stage, PipelineStage::Witness);
  EXPECT_FALSE(r.verified);
  EXPECT_EQ(r.reason, "none (z-iii unsatisfiable)");
  EXPECT_STREQ(stage_name(r.stage), "witness");
}

TEST(Pipeline, FamilyCapReportsFamilyStage) {
  const Box w = Box::cube(2, 0, 100);
  const std::vector<Int> g{1, 1};
  PipelineOptions opts;
  opts.max_family = 1;
  const PipelineReport r = full_pipeline(affine_map(w, g), full_set(w), 4, 2, opts);
  EXPECT_EQ(r.stage, PipelineStage::Family);
  EXPECT_NE(r.reason.find("exceeds the cap"), std::string::npos);
}

TEST(Pipeline, RejectsHigherCodimension) {
  Rng rng(5);
  const Box w = Box::cube(1, 0, 20);
  const LipschitzMap f = random_map(w, 2, rng);
  EXPECT_EQ(code_of([&] { full_pipeline(f, full_set(w), 3, 2, PipelineOptions{}); }), ErrorCode::InvalidArgument);
}

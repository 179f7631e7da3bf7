#include "collinear_lab/generators.hpp"

#include <algorithm>

#include "collinear_lab/error.hpp"

namespace clab {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

Int Rng::uniform(Int lo, Int hi) {
  if (lo > hi) fail(ErrorCode::InvalidArgument, "empty sampling range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<Int>(engine_());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r;
  do r = engine_();
  while (r >= limit);
  return lo + static_cast<Int>(r % span);
}

bool Rng::bernoulli(const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  const BigInt& den = p.get_den();
  if (!den.fits_slong_p()) fail(ErrorCode::InvalidArgument, "probability denominator too large");
  return uniform(0, den.get_si() - 1) < p.get_num().get_si();
}

namespace {

// A walk along one axis of the window: offsets[i] is the position after the
// steps taken from lo to lo + i.
template <class Step>
std::vector<std::vector<Int>> axis_walk(Int extent, std::size_t width, Step&& step) {
  std::vector<std::vector<Int>> out{std::vector<Int>(width, 0)};
  for (Int i = 1; i < extent; ++i) {
    auto next = out.back();
    step(next);
    out.push_back(std::move(next));
  }
  return out;
}

void walk_step(std::vector<Int>& pos, Rng& rng) {
  // {0, +e1, -e1, +e2, -e2}, uniformly.
  switch (rng.uniform(0, 4)) {
    case 1: ++pos[0]; break;
    case 2: --pos[0]; break;
    case 3: ++pos[1]; break;
    case 4: --pos[1]; break;
    default: break;
  }
}

LipschitzMap tabulate(const Box& window, std::size_t codim, Rational m2,
                      const std::function<void(const LatticePoint&, std::vector<Int>&)>& fn) {
  std::vector<Int> values;
  values.reserve(window.size() * (window.dim() + codim));
  std::vector<Int> v;
  for (std::size_t idx = 0; idx < window.size(); ++idx) {
    v.clear();
    fn(window.point_at(idx), v);
    values.insert(values.end(), v.begin(), v.end());
  }
  return LipschitzMap(window, codim, std::move(m2), std::move(values));
}

void require_dim(const Box& window, std::size_t dim, const char* kind) {
  if (window.dim() != dim)
    fail(ErrorCode::InvalidArgument, std::string(kind) + " maps need d = " + std::to_string(dim));
}

}  // namespace

LipschitzMap flat_map(const Box& window) {
  return tabulate(window, 1, Rational(1), [](const LatticePoint& x, std::vector<Int>& v) {
    v.assign(x.coords().begin(), x.coords().end());
    v.push_back(0);
  });
}

LipschitzMap affine_map(const Box& window, std::span<const Int> slopes) {
  if (slopes.size() != window.dim()) fail(ErrorCode::DimensionMismatch, "one slope per domain axis expected");
  Int steepest = 0;
  for (Int c : slopes) steepest = std::max(steepest, c < 0 ? -c : c);
  return tabulate(window, 1, Rational(1 + steepest * steepest), [&](const LatticePoint& x, std::vector<Int>& v) {
    v.assign(x.coords().begin(), x.coords().end());
    Int g = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) g += slopes[i] * x[i];
    v.push_back(g);
  });
}

LipschitzMap surface_map(const Box& window, Rng& rng) {
  std::vector<std::vector<std::vector<Int>>> walks;
  for (std::size_t axis = 0; axis < window.dim(); ++axis)
    walks.push_back(axis_walk(window.extent(axis), 1, [&](std::vector<Int>& p) { p[0] += rng.uniform(0, 1) ? 1 : -1; }));
  return tabulate(window, 1, Rational(2), [&](const LatticePoint& x, std::vector<Int>& v) {
    v.assign(x.coords().begin(), x.coords().end());
    Int g = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) g += walks[i][static_cast<std::size_t>(x[i] - window.lo(i))][0];
    v.push_back(g);
  });
}

LipschitzMap walk_map(const Box& window, Rng& rng) {
  require_dim(window, 1, "walk");
  const auto walk = axis_walk(window.extent(0), 2, [&](std::vector<Int>& p) { walk_step(p, rng); });
  return tabulate(window, 1, Rational(1), [&](const LatticePoint& x, std::vector<Int>& v) {
    v = walk[static_cast<std::size_t>(x[0] - window.lo(0))];
  });
}

LipschitzMap walk_lift_map(const Box& window, Rng& rng) {
  const auto walk = axis_walk(window.extent(0), 2, [&](std::vector<Int>& p) { walk_step(p, rng); });
  return tabulate(window, 1, Rational(1), [&](const LatticePoint& x, std::vector<Int>& v) {
    v = walk[static_cast<std::size_t>(x[0] - window.lo(0))];
    v.insert(v.end(), x.coords().begin() + 1, x.coords().end());
  });
}

LipschitzMap staircase_map(const Box& window) {
  require_dim(window, 1, "staircase");
  auto floor_half = [](Int n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); };
  return tabulate(window, 1, Rational(1), [&](const LatticePoint& x, std::vector<Int>& v) {
    v = {floor_half(x[0] + 1), floor_half(x[0])};
  });
}

LipschitzMap random_map(const Box& window, std::size_t codim, Rng& rng) {
  if (codim < 1) fail(ErrorCode::InvalidArgument, "codimension h must be at least 1");
  const std::size_t n = window.dim() + codim;
  std::vector<std::vector<std::vector<Int>>> walks;
  for (std::size_t axis = 0; axis < window.dim(); ++axis)
    walks.push_back(axis_walk(window.extent(axis), n, [&](std::vector<Int>& p) {
      for (auto& c : p) c += rng.uniform(-1, 1);
    }));
  return tabulate(window, codim, Rational(static_cast<long>(n)), [&](const LatticePoint& x, std::vector<Int>& v) {
    v.assign(n, 0);
    for (std::size_t i = 0; i < x.dim(); ++i) {
      const auto& w = walks[i][static_cast<std::size_t>(x[i] - window.lo(i))];
      for (std::size_t j = 0; j < n; ++j) v[j] += w[j];
    }
  });
}

LipschitzMap generate_map(std::string_view kind, const Box& window, std::size_t codim, Int slope, Rng& rng) {
  const bool graph_kind = kind != "random";
  if (graph_kind && codim != 1)
    fail(ErrorCode::InvalidArgument, "map kind '" + std::string(kind) + "' has codimension 1");
  if (kind == "flat") return flat_map(window);
  if (kind == "affine") {
    const std::vector<Int> slopes(window.dim(), slope);
    return affine_map(window, slopes);
  }
  if (kind == "surface") return surface_map(window, rng);
  if (kind == "walk") return walk_map(window, rng);
  if (kind == "walk-lift") return walk_lift_map(window, rng);
  if (kind == "staircase") return staircase_map(window);
  if (kind == "random") return random_map(window, codim, rng);
  fail(ErrorCode::InvalidArgument, "unknown map kind '" + std::string(kind) + "'");
}

PointSet full_set(const Box& window) {
  std::vector<LatticePoint> pts;
  pts.reserve(window.size());
  window.for_each([&](const LatticePoint& x) { pts.push_back(x); });
  return PointSet(window.dim(), std::move(pts));
}

PointSet coset_set(const Box& window, Int stride) {
  if (stride < 1) fail(ErrorCode::InvalidArgument, "coset stride must be positive");
  std::vector<LatticePoint> pts;
  window.for_each([&](const LatticePoint& x) {
    for (Int c : x.coords())
      if (c % stride != 0) return;
    pts.push_back(x);
  });
  return PointSet(window.dim(), std::move(pts));
}

PointSet bernoulli_set(const Box& window, const Rational& p, Rng& rng) {
  if (p < 0 || p > 1) fail(ErrorCode::InvalidArgument, "probability must lie in [0, 1]");
  std::vector<LatticePoint> pts;
  window.for_each([&](const LatticePoint& x) {
    if (rng.bernoulli(p)) pts.push_back(x);
  });
  return PointSet(window.dim(), std::move(pts));
}

PointSet generate_set(std::string_view kind, const Box& window, Int stride, const Rational& p, Rng& rng) {
  if (kind == "all") return full_set(window);
  if (kind == "coset") return coset_set(window, stride);
  if (kind == "bernoulli") return bernoulli_set(window, p, rng);
  fail(ErrorCode::InvalidArgument, "unknown set kind '" + std::string(kind) + "'");
}

GapSequence random_gap_sequence(std::size_t length, const Rational& max_gap, Rng& rng) {
  if (length < 1) fail(ErrorCode::InvalidArgument, "empty sequence");
  if (max_gap < 1) fail(ErrorCode::InvalidArgument, "gap bound must be at least 1");
  const Int r = to_int(floor_of(max_gap));
  const Rational r2 = max_gap * max_gap;
  std::vector<LatticePoint> steps;
  for (Int x = -r; x <= r; ++x)
    for (Int y = -r; y <= r; ++y)
      if ((x != 0 || y != 0) && Rational(x * x + y * y) <= r2) steps.push_back(LatticePoint{x, y});
  std::vector<LatticePoint> pts{LatticePoint{0, 0}};
  while (pts.size() < length) pts.push_back(pts.back() + steps[rng.below(steps.size())]);
  return GapSequence(std::move(pts), max_gap);
}

}  // namespace clab

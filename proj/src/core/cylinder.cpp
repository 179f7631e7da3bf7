#include "collinear_lab/cylinder.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <unordered_set>

#include "collinear_lab/error.hpp"
#include "collinear_lab/generators.hpp"

namespace clab {

namespace {

constexpr std::size_t kMaxCylinderBox = std::size_t{1} << 28;

Rational dot_rational(const LatticePoint& a, const RationalPoint& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += b[i] * static_cast<long>(a[i]);
  return s;
}

Rational norm_sq_rational(const RationalPoint& v) {
  Rational s = 0;
  for (const auto& c : v.coords()) s += c * c;
  return s;
}

Int isqrt_wide(Wide x) {
  BigInt r;
  const BigInt big = to_big(x);
  mpz_sqrt(r.get_mpz_t(), big.get_mpz_t());
  return to_int(r);
}

// Offsets of the closed lattice ball of squared radius r2.
std::vector<std::vector<Int>> ball_offsets(std::size_t d, Wide r2) {
  const Int r = isqrt_wide(r2);
  std::vector<std::vector<Int>> out;
  std::vector<Int> v(d, -r);
  while (true) {
    Wide s = 0;
    for (Int c : v) s += static_cast<Wide>(c) * c;
    if (s <= r2) out.push_back(v);
    std::size_t axis = d;
    while (axis-- > 0) {
      if (v[axis] < r) {
        ++v[axis];
        break;
      }
      v[axis] = -r;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace

bool Cylinder::contains(const LatticePoint& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

Box Cylinder::bounds() const {
  std::vector<Int> lo(points_.front().coords().begin(), points_.front().coords().end()), hi = lo;
  for (const auto& p : points_)
    for (std::size_t i = 0; i < p.dim(); ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return Box(std::move(lo), std::move(hi));
}

bool thick_enough(const GeneralizedSegment& seg, const Rational& epsilon) {
  return epsilon * epsilon * to_rational(seg.m_ell_squared()) > Rational(196 * static_cast<long>(seg.dim()));
}

Cylinder build_cylinder(const GeneralizedSegment& seg, const Rational& epsilon) {
  if (epsilon <= 0) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!thick_enough(seg, epsilon))
    fail(ErrorCode::ThinCylinder, "cylinder too thin: eps^2 m^2 = " +
                                      format_rational(epsilon * epsilon * to_rational(seg.m_ell_squared())) +
                                      " must exceed 196 d = " + std::to_string(196 * seg.dim()));
  const std::size_t d = seg.dim();
  const BigInt r2_big = floor_of(epsilon * epsilon * to_rational(seg.m_ell_squared()));
  const Wide r2 = static_cast<Wide>(to_int(r2_big));
  const Int r = isqrt_wide(r2);
  const auto path = segment_points(seg);

  std::vector<Int> lo(path.front().coords().begin(), path.front().coords().end()), hi = lo;
  for (const auto& p : path)
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] -= r;
    hi[i] += r;
  }
  const Box box(lo, hi);
  if (box.size() > kMaxCylinderBox) fail(ErrorCode::InvalidArgument, "cylinder too large to materialize");
  std::vector<bool> inside(box.size(), false);
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t i = d - 1; i-- > 0;) stride[i] = stride[i + 1] * static_cast<std::size_t>(box.extent(i + 1));
  // Ball offsets as index deltas relative to the centre.
  std::vector<std::ptrdiff_t> deltas;
  for (const auto& off : ball_offsets(d, r2)) {
    std::ptrdiff_t delta = 0;
    for (std::size_t i = 0; i < d; ++i) delta += static_cast<std::ptrdiff_t>(off[i]) * static_cast<std::ptrdiff_t>(stride[i]);
    deltas.push_back(delta);
  }
  for (const auto& p : path) {
    const auto centre = static_cast<std::ptrdiff_t>(box.index_of(p));
    for (auto delta : deltas) inside[static_cast<std::size_t>(centre + delta)] = true;
  }
  std::vector<LatticePoint> points;
  for (std::size_t idx = 0; idx < inside.size(); ++idx)
    if (inside[idx]) points.push_back(box.point_at(idx));
  return Cylinder(seg, epsilon, r2, std::move(points));
}

LatticePoint mean_slope(const LipschitzMap& f, const GeneralizedSegment& seg) {
  const LatticePoint delta = f(seg.last()) - f(seg.first());
  if (delta.is_zero()) fail(ErrorCode::DegenerateSlope, "f takes the same value at both ends of the segment");
  return delta;
}

SlopeCondition check_slope(const LatticePoint& slope, const WitnessParams& params) {
  if (params.w.dim() != slope.dim()) fail(ErrorCode::DimensionMismatch, "w must have the image dimension");
  const Rational w2 = norm_sq_rational(params.w);
  if (w2 == 0) fail(ErrorCode::InvalidArgument, "direction w must be nonzero");
  // |v - w|^2 = 2 - 2 cos, cos = P / sqrt(Q2).
  const Rational p = dot_rational(slope, params.w);
  const Rational q2 = to_rational(norm_squared(slope)) * w2;
  const Rational c = 1 - params.epsilon * params.epsilon / 2;  // pass iff cos > c
  SlopeCondition out;
  const int sp = sgn(p), sc = sgn(c);
  if (sp >= 0 && sc < 0)
    out.pass = true;
  else if (sp < 0 && sc >= 0)
    out.pass = false;
  else if (sp >= 0)
    out.pass = p * p > c * c * q2 && !(sp == 0 && sc == 0);
  else
    out.pass = p * p < c * c * q2;

  // Margin eps - sqrt(2 - 2 P / sqrt(Q2)).
  if (is_rational_square(q2)) {
    const Rational cos = p / rational_sqrt(q2);
    const Rational dist2 = std::max(Rational(0), Rational(2 - 2 * cos));
    if (is_rational_square(dist2)) {
      const Rational m = params.epsilon - rational_sqrt(dist2);
      out.margin = {m, m};
      return out;
    }
    const Interval d = sqrt_bracket(dist2, 48);
    out.margin = {params.epsilon - d.hi, params.epsilon - d.lo};
    return out;
  }
  const Interval q = sqrt_bracket(q2, 48);
  // cos lies between p / q.hi and p / q.lo.
  Rational cos_lo = p / q.hi, cos_hi = p / q.lo;
  if (cos_lo > cos_hi) std::swap(cos_lo, cos_hi);
  const Rational d2_lo = std::max(Rational(0), Rational(2 - 2 * cos_hi));
  const Rational d2_hi = std::max(Rational(0), Rational(2 - 2 * cos_lo));
  out.margin = {params.epsilon - sqrt_bracket(d2_hi, 48).hi, params.epsilon - sqrt_bracket(d2_lo, 48).lo};
  return out;
}

LineCondition check_line(const LipschitzMap& f, const GeneralizedSegment& seg, const Rational& epsilon) {
  const LatticePoint f0 = f(seg.first());
  const LatticePoint f1 = f(seg.last());
  const LatticePoint delta = f1 - f0;
  LineCondition out;
  out.bound_sq = epsilon * epsilon * f.lipschitz_squared() * to_rational(seg.m_ell_squared());
  out.worst_sq = -1;
  for (const auto& piece : segment_pieces(seg)) {
    const LatticePoint c = f(piece.point) - f0;
    for (const Rational* t : {&piece.t_lo, &piece.t_hi}) {
      Rational s = 0;
      for (std::size_t i = 0; i < c.dim(); ++i) {
        const Rational diff = Rational(static_cast<long>(c[i])) - *t * static_cast<long>(delta[i]);
        s += diff * diff;
      }
      if (s > out.worst_sq) {
        out.worst_sq = s;
        out.worst_t = *t;
      }
    }
  }
  out.pass = out.worst_sq < out.bound_sq;
  return out;
}

DensityCondition check_density(const PointSet& a, const Cylinder& cyl, const Rational& delta) {
  DensityCondition out;
  out.size = cyl.size();
  if (a.size() < cyl.size()) {
    for (const auto& p : a) out.hits += cyl.contains(p) ? 1 : 0;
  } else {
    for (const auto& p : cyl.points()) out.hits += a.contains(p) ? 1 : 0;
  }
  out.ratio = Rational(static_cast<unsigned long>(out.hits), static_cast<unsigned long>(out.size));
  out.ratio.canonicalize();
  out.pass = out.ratio > delta;
  return out;
}

ConditionReport check_conditions(const LipschitzMap& f, const PointSet& a, const GeneralizedSegment& seg,
                                 const WitnessParams& params) {
  if (seg.dim() != f.domain_dim()) fail(ErrorCode::DimensionMismatch, "segment and map dimensions differ");
  if (params.epsilon <= 0 || params.delta <= 0) fail(ErrorCode::InvalidArgument, "epsilon and delta must be positive");
  ConditionReport report;
  report.slope = mean_slope(f, seg);
  const Cylinder cyl = build_cylinder(seg, params.epsilon);
  report.z_i = check_slope(report.slope, params);
  report.z_ii = check_line(f, seg, params.epsilon);
  report.z_iii = check_density(a, cyl, params.delta);
  return report;
}

std::vector<RationalPoint> sign_pattern_directions(std::size_t image_dim) {
  std::vector<RationalPoint> out;
  std::vector<Int> v(image_dim, -1);
  while (true) {
    if (std::any_of(v.begin(), v.end(), [](Int c) { return c != 0; })) {
      std::vector<Rational> q(v.begin(), v.end());
      out.emplace_back(std::move(q));
    }
    std::size_t axis = image_dim;
    while (axis-- > 0) {
      if (v[axis] < 1) {
        ++v[axis];
        break;
      }
      v[axis] = -1;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

struct Candidate {
  LatticePoint start;
  LatticePoint end;
};

// Primitive vectors of [-2, 2]^d with positive leading entry.
std::vector<LatticePoint> domain_directions(std::size_t d) {
  std::vector<LatticePoint> out;
  std::vector<Int> v(d, -2);
  while (true) {
    Int g = 0;
    for (Int c : v) g = gcd(g, c);
    if (g == 1) {
      const LatticePoint p(v);
      if (primitive_direction(p) == p) out.push_back(p);
    }
    std::size_t axis = d;
    while (axis-- > 0) {
      if (v[axis] < 2) {
        ++v[axis];
        break;
      }
      v[axis] = -2;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

// Candidate segments of one coarse-to-fine level, in shuffled order.
class CandidateStream {
 public:
  CandidateStream(const Box& window, const Rational& epsilon, std::uint64_t seed)
      : window_(window), seed_(seed), dirs_(domain_directions(window.dim())) {
    const std::size_t d = window.dim();
    const Rational need = Rational(196 * static_cast<long>(d)) / (epsilon * epsilon);
    Int longest = 0;
    for (std::size_t i = 0; i < d; ++i) longest = std::max(longest, window.extent(i));
    for (std::size_t u = 0; u < dirs_.size(); ++u) {
      const Rational u2 = to_rational(norm_squared(dirs_[u]));
      // Smallest lambda with lambda^2 |u|^2 > need.
      Int lambda = to_int(floor_of(sqrt_bracket(need / u2, 8).lo));
      lambda = std::max<Int>(lambda, 1);
      while (Rational(lambda) * lambda * u2 <= need) ++lambda;
      for (; lambda < longest; lambda *= 2) {
        const Rational m2 = Rational(lambda) * lambda * u2;
        const Int r = to_int(floor_of(sqrt_bracket(floor_of(epsilon * epsilon * m2), 8).hi));
        shapes_.push_back({u, lambda, r});
      }
    }
    Int stride = 1;
    while (stride * 2 < longest) stride *= 2;
    stride_ = stride;
  }

  /// Fills `out` with the next level; false once the finest level is done.
  bool next_level(std::vector<Candidate>& out) {
    out.clear();
    if (stride_ == 0) return false;
    const std::size_t d = window_.dim();
    for (const auto& shape : shapes_) {
      const LatticePoint step = dirs_[shape.dir].scaled(shape.lambda);
      // Start range keeping start, end and the radius-r margin in the window.
      std::vector<Int> lo(d), hi(d);
      bool empty = false;
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = window_.lo(i) + shape.radius - std::min<Int>(0, step[i]);
        hi[i] = window_.hi(i) - shape.radius - std::max<Int>(0, step[i]);
        if (lo[i] > hi[i]) empty = true;
      }
      if (empty) continue;
      std::vector<Int> x = lo;
      while (true) {
        bool fresh = false;
        for (std::size_t i = 0; i < d; ++i) fresh = fresh || ((x[i] - lo[i]) % (2 * stride_)) != 0;
        if (fresh || level_ == 0) {
          LatticePoint s(x);
          out.push_back({s, s + step});
        }
        std::size_t axis = d;
        while (axis-- > 0) {
          if (x[axis] + stride_ <= hi[axis]) {
            x[axis] += stride_;
            break;
          }
          x[axis] = lo[axis];
        }
        if (axis == static_cast<std::size_t>(-1)) break;
      }
    }
    Rng rng(derive_seed(seed_, 0x5ca1ab1e, level_));
    rng.shuffle(out.begin(), out.end());
    ++level_;
    stride_ /= 2;
    return true;
  }

 private:
  struct Shape {
    std::size_t dir;
    Int lambda;
    Int radius;
  };
  Box window_;
  std::uint64_t seed_;
  std::vector<LatticePoint> dirs_;
  std::vector<Shape> shapes_;
  Int stride_ = 0;
  std::uint64_t level_ = 0;
};

enum class Verdict { SlopeFail, LineFail, DensityFail, Pass };

Verdict evaluate(const LipschitzMap& f, const PointSet& a, const Candidate& c, const WitnessParams& params,
                 std::optional<Witness>& witness) {
  const GeneralizedSegment seg(c.start, c.end);
  const LatticePoint slope = f(seg.last()) - f(seg.first());
  if (slope.is_zero()) return Verdict::SlopeFail;
  SlopeCondition z_i = check_slope(slope, params);
  if (!z_i.pass) return Verdict::SlopeFail;
  LineCondition z_ii = check_line(f, seg, params.epsilon);
  if (!z_ii.pass) return Verdict::LineFail;
  Cylinder cyl = build_cylinder(seg, params.epsilon);
  DensityCondition z_iii = check_density(a, cyl, params.delta);
  if (!z_iii.pass) return Verdict::DensityFail;
  witness = Witness{seg, params.w, ConditionReport{slope, z_i, z_ii, z_iii}, std::move(cyl)};
  return Verdict::Pass;
}

}  // namespace

ScanOutcome scan_for_witness(const LipschitzMap& f, const PointSet& a, const Rational& epsilon,
                             const Rational& delta, const std::vector<RationalPoint>& directions,
                             const ScanOptions& options) {
  if (epsilon <= 0 || delta <= 0) fail(ErrorCode::InvalidArgument, "epsilon and delta must be positive");
  for (const auto& w : directions)
    if (w.dim() != f.image_dim()) fail(ErrorCode::DimensionMismatch, "direction w must have the image dimension");
  ScanOutcome outcome;
  if (a.empty()) return outcome;  // the density condition cannot hold
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t batch = 32 * threads;

  for (const auto& w : directions) {
    ++outcome.directions_tried;
    const WitnessParams params{epsilon, delta, w};
    CandidateStream stream(f.window(), epsilon, options.seed);
    std::vector<Candidate> level;
    std::size_t used = 0;
    while (used < options.budget && stream.next_level(level)) {
      for (std::size_t pos = 0; pos < level.size() && used < options.budget;) {
        const std::size_t n = std::min({batch, level.size() - pos, options.budget - used});
        std::vector<Verdict> verdicts(n, Verdict::SlopeFail);
        std::vector<std::optional<Witness>> found(n);
        std::vector<std::exception_ptr> errors(threads);
        auto work = [&](unsigned t) {
          try {
            for (std::size_t i = t; i < n; i += threads)
              verdicts[i] = evaluate(f, a, level[pos + i], params, found[i]);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        };
        if (threads == 1) {
          work(0);
        } else {
          std::vector<std::thread> pool;
          for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
          for (auto& th : pool) th.join();
        }
        for (const auto& e : errors)
          if (e) std::rethrow_exception(e);
        // Tally up to the first pass so counts do not depend on the batch size.
        for (std::size_t i = 0; i < n; ++i) {
          ++outcome.candidates;
          if (verdicts[i] != Verdict::SlopeFail) ++outcome.slope_pass;
          if (verdicts[i] == Verdict::DensityFail || verdicts[i] == Verdict::Pass) ++outcome.line_pass;
          if (verdicts[i] == Verdict::Pass) {
            outcome.witness = std::move(found[i]);
            return outcome;
          }
        }
        pos += n;
        used += n;
      }
    }
  }
  return outcome;
}

}  // namespace clab

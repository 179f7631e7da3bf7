#include "collinear_lab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "collinear_lab/error.hpp"

namespace clab {

// ----------------------------------------------------------------- Dirichlet

Rational DirichletCertificate::max_error() const {
  Rational worst = 0;
  for (std::size_t l = 0; l < u.size(); ++l) {
    const Rational e = abs(u[l] - Rational(static_cast<long>(a[l]), static_cast<long>(b)));
    worst = std::max(worst, e);
  }
  return worst;
}

Rational DirichletCertificate::bound() const {
  Rational q(1, BigInt(static_cast<long>(b)) * static_cast<long>(n));
  q.canonicalize();
  return q;
}

bool DirichletCertificate::verify() const {
  if (b < 1 || n < 1 || a.size() != u.size()) return false;
  BigInt limit = 1;
  for (std::size_t i = 0; i < u.size(); ++i) limit *= static_cast<long>(n);
  if (BigInt(static_cast<long>(b)) > limit) return false;
  return max_error() <= bound();
}

DirichletCertificate dirichlet_approx(std::span<const Rational> u, Int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "N must be a positive integer");
  if (u.empty()) fail(ErrorCode::InvalidArgument, "u must have at least one coordinate");
  Wide limit = 1;
  for (std::size_t i = 0; i < u.size(); ++i) {
    limit *= n;
    if (limit > (Wide{1} << 40)) fail(ErrorCode::InvalidArgument, "N^d too large for an exhaustive search");
  }
  // Work with u_l = p_l / q_l in 128-bit integers when the parts fit.
  bool small = true;
  std::vector<Wide> p(u.size()), q(u.size());
  for (std::size_t l = 0; l < u.size(); ++l) {
    if (!u[l].get_num().fits_slong_p() || !u[l].get_den().fits_slong_p()) {
      small = false;
      break;
    }
    p[l] = u[l].get_num().get_si();
    q[l] = u[l].get_den().get_si();
  }
  DirichletCertificate cert{0, std::vector<Int>(u.size()), n, std::vector<Rational>(u.begin(), u.end())};
  for (Int b = 1; b <= limit; ++b) {
    bool ok = true;
    for (std::size_t l = 0; l < u.size() && ok; ++l) {
      if (small) {  // |b p| < 2^103 fits a Wide
        const Wide bp = static_cast<Wide>(b) * p[l];
        Wide fl = bp / q[l], m = bp % q[l];
        if (m < 0) {
          m += q[l];
          --fl;
        }
        // Distance from b u_l to its nearest integer is min(m, q - m) / q.
        const Wide near = std::min(m, q[l] - m);
        ok = near * n < q[l];
        cert.a[l] = static_cast<Int>(2 * m >= q[l] ? fl + 1 : fl);
      } else {
        const Rational r = u[l] * static_cast<long>(b);
        const BigInt rounded = round_of(r);
        ok = abs(r - Rational(rounded)) * static_cast<long>(n) < 1;
        cert.a[l] = to_int(rounded);
      }
    }
    if (ok) {
      cert.b = b;
      if (!cert.verify()) fail(ErrorCode::Internal, "Dirichlet certificate failed verification");
      return cert;
    }
  }
  fail(ErrorCode::Internal, "no Dirichlet denominator up to N^d");
}

// ---------------------------------------------------------------- projection

RationalPoint project_along(const RationalPoint& u, const RationalPoint& x) {
  if (u.dim() != x.dim()) fail(ErrorCode::DimensionMismatch, "direction and point dimensions differ");
  if (u.dim() < 2) fail(ErrorCode::InvalidArgument, "projection needs dimension at least 2");
  if (u[0] == 0) fail(ErrorCode::NonTransverse, "direction has zero first coordinate");
  const Rational ratio = x[0] / u[0];
  std::vector<Rational> out(u.dim() - 1);
  for (std::size_t i = 1; i < u.dim(); ++i) out[i - 1] = x[i] - ratio * u[i];
  return RationalPoint(std::move(out));
}

// ------------------------------------------------------------------- family

LineFamily build_line_family(const LipschitzMap& f, const Cylinder& cyl, const LatticePoint& s, unsigned threads) {
  if (s.dim() != f.image_dim()) fail(ErrorCode::DimensionMismatch, "s must have the image dimension");
  if (s[0] == 0) fail(ErrorCode::NonTransverse, "s has zero first coordinate");
  std::vector<LatticePoint> images;
  images.reserve(cyl.size());
  for (const auto& z : cyl.points()) {
    if (!f.window().contains(z))
      fail(ErrorCode::OutOfWindow, "cylinder point (" + z.to_string() + ") outside the map window");
    images.push_back(f(z));
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());

  std::vector<CanonicalLine> keys(images.size());
  threads = std::max(1u, threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < images.size(); i += threads) keys[i] = line_through(images[i], s);
  };
  if (threads == 1 || images.size() < 1024) {
    for (std::size_t i = 0; i < images.size(); ++i) keys[i] = line_through(images[i], s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  LineFamily family;
  family.s = s;
  family.lines = keys;
  std::sort(family.lines.begin(), family.lines.end());
  family.lines.erase(std::unique(family.lines.begin(), family.lines.end()), family.lines.end());
  const RationalPoint sr(s);
  family.traces.resize(family.lines.size());
  std::vector<bool> traced(family.lines.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto it = std::lower_bound(family.lines.begin(), family.lines.end(), keys[i]);
    const auto idx = static_cast<std::size_t>(it - family.lines.begin());
    family.line_of_point.emplace(images[i], idx);
    if (!traced[idx]) {
      family.traces[idx] = project_along(sr, RationalPoint(images[i]));
      traced[idx] = true;
    }
  }
  return family;
}

bool trace_in_lattice_union(const RationalPoint& trace, const LatticePoint& s) {
  if (trace.dim() + 1 != s.dim()) fail(ErrorCode::DimensionMismatch, "trace and direction dimensions differ");
  const Int b = s[0] < 0 ? -s[0] : s[0];
  if (b == 0) fail(ErrorCode::NonTransverse, "s has zero first coordinate");
  const RationalPoint sr(s);
  for (Int l = 0; l < b; ++l) {
    std::vector<Rational> base(s.dim(), Rational(0));
    base[0] = l;
    const RationalPoint shift = project_along(sr, RationalPoint(std::move(base)));
    bool integral = true;
    for (std::size_t i = 0; i < trace.dim() && integral; ++i) integral = Rational(trace[i] - shift[i]).get_den() == 1;
    if (integral) return true;
  }
  return false;
}

// --------------------------------------------------------------- extraction

Extraction extract_line(const LipschitzMap& f, const PointSet& a, const Cylinder& cyl, const LineFamily& family,
                        std::size_t k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  Extraction out;
  std::vector<std::vector<LatticePoint>> buckets(family.size());
  for (const auto& x : a) {
    if (!cyl.contains(x)) continue;
    const auto it = family.line_of_point.find(f(x));
    if (it == family.line_of_point.end()) fail(ErrorCode::Internal, "family does not cover the cylinder image");
    buckets[it->second].push_back(x);
    ++out.hits;
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    if (!buckets[i].empty()) ++out.histogram[buckets[i].size()];
    if (buckets[i].size() > buckets[best].size()) best = i;
  }
  if (buckets.empty()) return out;
  out.best_bucket = buckets[best].size();
  if (out.best_bucket >= k && out.best_bucket > 0) {
    out.found = true;
    out.domain.assign(buckets[best].begin(), buckets[best].begin() + static_cast<std::ptrdiff_t>(k));
    out.line = family.lines[best];
  }
  return out;
}

// ----------------------------------------------------------------- pipeline

const char* stage_name(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::Witness: return "witness";
    case PipelineStage::Family: return "family";
    case PipelineStage::Extract: return "extract";
    case PipelineStage::Done: return "done";
  }
  return "unknown";
}

namespace {

std::vector<std::size_t> leading_permutation(const RationalPoint& w) {
  std::size_t lead = 0;
  for (std::size_t i = 1; i < w.dim(); ++i)
    if (abs(w[i]) > abs(w[lead])) lead = i;
  std::vector<std::size_t> perm{lead};
  for (std::size_t i = 0; i < w.dim(); ++i)
    if (i != lead) perm.push_back(i);
  return perm;
}

// Every image of X on one line, checked with collinear3 only.
bool images_collinear(const LipschitzMap& f, std::span<const LatticePoint> x) {
  if (x.empty()) return false;
  const LatticePoint p = f(x[0]);
  std::optional<LatticePoint> q;
  for (const auto& z : x) {
    const LatticePoint fz = f(z);
    if (!q && fz != p) q = fz;
  }
  if (!q) return true;
  return std::all_of(x.begin(), x.end(), [&](const LatticePoint& z) { return collinear3(p, *q, f(z)); });
}

}  // namespace

PipelineReport full_pipeline(const LipschitzMap& f, const PointSet& a, std::size_t k, Int n,
                             const PipelineOptions& options) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  if (n < 1) fail(ErrorCode::InvalidArgument, "N must be a positive integer");
  if (f.codim() != 1) fail(ErrorCode::InvalidArgument, "the pipeline needs a map into Z^{d+1}; project first");
  if (!a.empty() && a.dim() != f.domain_dim()) fail(ErrorCode::DimensionMismatch, "set and map dimensions differ");
  for (const auto& x : a)
    if (!f.window().contains(x)) fail(ErrorCode::OutOfWindow, "point (" + x.to_string() + ") outside the map window");

  PipelineReport best;
  best.reason = "none (z-iii unsatisfiable)";
  if (a.empty()) return best;

  const std::vector<RationalPoint> directions =
      options.directions.empty() ? sign_pattern_directions(f.image_dim()) : options.directions;
  std::size_t total_candidates = 0, tried = 0;
  bool have_failure = false;
  auto record = [&](PipelineReport&& r) {
    if (!have_failure || static_cast<int>(r.stage) > static_cast<int>(best.stage)) {
      best = std::move(r);
      have_failure = true;
    }
  };

  for (const auto& w : directions) {
    if (w.dim() != f.image_dim()) fail(ErrorCode::DimensionMismatch, "direction w must have the image dimension");
    ++tried;
    PipelineReport r;
    r.w = w;
    r.permutation = leading_permutation(w);
    const LipschitzMap fp = permute_image(f, r.permutation);
    std::vector<Rational> wp(w.dim());
    for (std::size_t i = 0; i < w.dim(); ++i) wp[i] = w[r.permutation[i]];
    std::vector<Rational> ratios;
    for (std::size_t l = 1; l < wp.size(); ++l) ratios.push_back(wp[l] / wp[0]);
    r.dirichlet = dirichlet_approx(ratios, n);
    r.epsilon = r.dirichlet->bound();

    ScanOutcome scan = scan_for_witness(fp, a, r.epsilon, options.delta, {RationalPoint(wp)}, options.scan);
    total_candidates += scan.candidates;
    r.candidates = scan.candidates;
    if (!scan.witness) {
      r.stage = PipelineStage::Witness;
      r.reason = "none within budget (" + std::to_string(scan.candidates) + " segments, " +
                 std::to_string(scan.slope_pass) + " passed z-i, " + std::to_string(scan.line_pass) +
                 " passed z-ii)";
      record(std::move(r));
      continue;
    }
    const Witness& wit = *scan.witness;
    r.segment = wit.segment;
    r.conditions = wit.report;
    r.cylinder_size = wit.cylinder.size();

    std::vector<Int> s{r.dirichlet->b};
    s.insert(s.end(), r.dirichlet->a.begin(), r.dirichlet->a.end());
    const LineFamily family = build_line_family(fp, wit.cylinder, LatticePoint(s), options.scan.threads);
    r.family_size = family.size();
    if (options.max_family > 0 && family.size() > options.max_family) {
      r.stage = PipelineStage::Family;
      r.reason = "|E| = " + std::to_string(family.size()) + " exceeds the cap " + std::to_string(options.max_family);
      record(std::move(r));
      continue;
    }
    r.extraction = extract_line(fp, a, wit.cylinder, family, k);
    if (!r.extraction.found) {
      r.stage = PipelineStage::Extract;
      r.reason = "bucket too small (" + std::to_string(r.extraction.best_bucket) + " < k = " + std::to_string(k) +
                 ", |A cap K| = " + std::to_string(r.extraction.hits) + ", |E| = " +
                 std::to_string(family.size()) + ")";
      record(std::move(r));
      continue;
    }

    r.stage = PipelineStage::Done;
    r.verified = images_collinear(f, r.extraction.domain);
    // The family line mapped back to the original image coordinates.
    std::vector<Int> s_orig(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) s_orig[r.permutation[i]] = s[i];
    r.line = line_through(f(r.extraction.domain.front()), LatticePoint(s_orig));
    r.reason = r.verified ? "success" : "extracted points failed re-verification";
    r.directions_tried = tried;
    r.candidates = total_candidates;
    return r;
  }
  best.directions_tried = tried;
  best.candidates = total_candidates;
  return best;
}

double family_scaling_ratio(std::size_t family_size, Int b, Int n, Wide m_sq, std::size_t d) {
  const double m = std::sqrt(static_cast<double>(m_sq));
  return static_cast<double>(family_size) * std::pow(static_cast<double>(b), static_cast<double>(d) - 1) *
         std::pow(static_cast<double>(n), static_cast<double>(d)) / std::pow(m, static_cast<double>(d));
}

}  // namespace clab

#include "collinear_lab/collinear.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "collinear_lab/error.hpp"

namespace clab {

namespace {

std::vector<LatticePoint> sorted_distinct(std::span<const LatticePoint> points) {
  std::vector<LatticePoint> out(points.begin(), points.end());
  for (const auto& p : out) require_same_dim(p, out.front());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// All 2x2 minors of [q - p; r - p] vanish; no allocation.
bool collinear_raw(std::span<const Int> p, std::span<const Int> q, std::span<const Int> r) {
  const std::size_t n = p.size();
  for (std::size_t a = 0; a < n; ++a) {
    const Wide qa = static_cast<Wide>(q[a]) - p[a], ra = static_cast<Wide>(r[a]) - p[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const Wide qb = static_cast<Wide>(q[b]) - p[b], rb = static_cast<Wide>(r[b]) - p[b];
      if (qa * rb != qb * ra) return false;
    }
  }
  return true;
}

CollinearResult finish(const std::vector<LatticePoint>& pts, std::size_t score, std::size_t i, std::size_t j) {
  CollinearResult out;
  out.count = score;
  out.line = canonical_line(pts[i], pts[j]);
  for (const auto& p : pts)
    if (out.line->contains(p)) out.points.push_back(p);
  return out;
}

// Best line found by a share of the base points: higher score wins, then
// smaller base, then smaller second point.
struct Best {
  std::size_t score = 0;
  std::size_t i = 0;
  std::size_t j = 0;

  bool improves_on(const Best& o) const {
    if (score != o.score) return score > o.score;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

// Scratch space for one worker: flattened primitive directions to the later
// points and an open-addressing table over them.
class DirectionTable {
 public:
  explicit DirectionTable(std::size_t dim) : dim_(dim) {}

  Best scan_base(const std::vector<LatticePoint>& pts, std::span<const std::size_t> weights, std::size_t i) {
    const std::size_t later = pts.size() - i - 1;
    Best best;
    if (later == 0) return best;
    dirs_.resize(later * dim_);
    std::size_t cap = 16;
    while (cap < 2 * later) cap <<= 1;
    slots_.assign(cap, kEmpty);
    buckets_.clear();
    const auto base = pts[i].coords();
    for (std::size_t t = 0; t < later; ++t) {
      const auto q = pts[i + 1 + t].coords();
      Int* dir = dirs_.data() + t * dim_;
      Int g = 0;
      for (std::size_t a = 0; a < dim_; ++a) {
        dir[a] = q[a] - base[a];
        g = gcd(g, dir[a]);
      }
      // Later points in sorted order already have a positive leading entry.
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (std::size_t a = 0; a < dim_; ++a) {
        dir[a] /= g;
        h = (h ^ static_cast<std::uint64_t>(dir[a])) * 0x100000001b3ULL;
        h ^= h >> 29;
      }
      std::size_t slot = h & (cap - 1);
      while (true) {
        const std::uint32_t b = slots_[slot];
        if (b == kEmpty) {
          slots_[slot] = static_cast<std::uint32_t>(buckets_.size());
          buckets_.push_back({t, weights[i + 1 + t]});
          break;
        }
        const Int* other = dirs_.data() + buckets_[b].first * dim_;
        if (std::equal(dir, dir + dim_, other)) {
          buckets_[b].weight += weights[i + 1 + t];
          break;
        }
        slot = (slot + 1) & (cap - 1);
      }
    }
    for (const auto& b : buckets_) {
      const Best cand{weights[i] + b.weight, i, i + 1 + b.first};
      if (best.score == 0 || cand.improves_on(best)) best = cand;
    }
    return best;
  }

 private:
  static constexpr std::uint32_t kEmpty = UINT32_MAX;
  struct Bucket {
    std::size_t first;
    std::size_t weight;
  };
  std::size_t dim_;
  std::vector<Int> dirs_;
  std::vector<std::uint32_t> slots_;
  std::vector<Bucket> buckets_;
};

Best parallel_best(const std::vector<LatticePoint>& pts, std::span<const std::size_t> weights, unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pts.size())));
  std::vector<Best> partial(threads);
  auto work = [&](unsigned w) {
    DirectionTable table(pts.front().dim());
    Best best;
    for (std::size_t i = w; i + 1 < pts.size(); i += threads) {
      const Best cand = table.scan_base(pts, weights, i);
      if (cand.score > 0 && (best.score == 0 || cand.improves_on(best))) best = cand;
    }
    partial[w] = best;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  Best best;
  for (const auto& b : partial)
    if (b.score > 0 && (best.score == 0 || b.improves_on(best))) best = b;
  return best;
}

}  // namespace

CollinearResult max_collinear_naive(std::span<const LatticePoint> points) {
  if (points.empty()) return {};
  const auto pts = sorted_distinct(points);
  if (pts.size() == 1) return {1, std::nullopt, pts};
  std::size_t best = 0, bi = 0, bj = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::size_t count = 0;
      for (const auto& r : pts)
        if (collinear_raw(pts[i].coords(), pts[j].coords(), r.coords())) ++count;
      if (count > best) {
        best = count;
        bi = i;
        bj = j;
      }
    }
  }
  return finish(pts, best, bi, bj);
}

CollinearResult max_collinear_hash(std::span<const LatticePoint> points, unsigned threads) {
  if (points.empty()) return {};
  const auto pts = sorted_distinct(points);
  if (pts.size() == 1) return {1, std::nullopt, pts};
  const std::vector<std::size_t> ones(pts.size(), 1);
  const Best best = parallel_best(pts, ones, threads);
  return finish(pts, best.score, best.i, best.j);
}

CollinearResult max_collinear_weighted(std::span<const LatticePoint> points, std::span<const std::size_t> weights,
                                       unsigned threads) {
  if (points.size() != weights.size()) fail(ErrorCode::InvalidArgument, "one weight per point expected");
  if (points.empty()) return {};
  const std::vector<LatticePoint> pts(points.begin(), points.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    require_same_dim(pts[i], pts.front());
    if (i > 0 && !(pts[i - 1] < pts[i])) fail(ErrorCode::InvalidArgument, "weighted points must be sorted and distinct");
  }
  if (pts.size() == 1) return {weights[0], std::nullopt, pts};
  const Best best = parallel_best(pts, weights, threads);
  return finish(pts, best.score, best.i, best.j);
}

KCollinearResult find_k_collinear(const LipschitzMap& f, const PointSet& a, std::size_t k, unsigned threads) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  if (!a.empty() && a.dim() != f.domain_dim()) fail(ErrorCode::DimensionMismatch, "set and map dimensions differ");
  for (const auto& x : a)
    if (!f.window().contains(x)) fail(ErrorCode::OutOfWindow, "point (" + x.to_string() + ") outside the map window");

  KCollinearResult out;
  if (a.empty()) return out;

  // Distinct images, each with its preimages in A (sorted, since A is).
  std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
  pairs.reserve(a.size());
  for (const auto& x : a) pairs.emplace_back(f(x), x);
  std::sort(pairs.begin(), pairs.end());
  std::vector<LatticePoint> images;
  std::vector<LatticePoint> least_preimage;
  std::vector<std::size_t> multiplicity;
  for (const auto& [img, x] : pairs) {
    if (images.empty() || images.back() != img) {
      images.push_back(img);
      least_preimage.push_back(x);
      multiplicity.push_back(0);
    }
    ++multiplicity.back();
  }
  out.max_count = max_collinear_hash(images, threads).count;
  if (out.max_count < k) return out;
  out.found = true;

  auto domain_on = [&](const CanonicalLine& line) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < images.size(); ++i)
      if (line.contains(images[i])) total += multiplicity[i];
    return total;
  };

  if (k == 1) {
    out.domain = {a[0]};
    out.domain_count = 1;
    return out;
  }
  if (k == 2) {
    const LatticePoint& x0 = a[0];
    const LatticePoint y0 = f(x0);
    for (const auto& x : a) {
      if (f(x) != y0) {
        out.domain = {x0, x};
        out.line = canonical_line(y0, f(x));
        out.domain_count = domain_on(*out.line);
        return out;
      }
    }
    fail(ErrorCode::Internal, "two distinct images expected");
  }

  // Every line with at least k distinct image points, reached from its least
  // image point; on each, the least preimages of its k best images.
  const std::size_t n = images.size();
  std::vector<LatticePoint> best_x;
  std::optional<CanonicalLine> best_line;
  std::unordered_map<LatticePoint, std::vector<std::size_t>, LatticePointHash> buckets;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    buckets.clear();
    for (std::size_t j = i + 1; j < n; ++j) buckets[primitive_direction(images[j] - images[i])].push_back(j);
    for (const auto& [dir, members] : buckets) {
      if (members.size() + 1 < k) continue;
      std::vector<LatticePoint> cand{least_preimage[i]};
      for (auto j : members) cand.push_back(least_preimage[j]);
      std::sort(cand.begin(), cand.end());
      cand.resize(k);
      if (best_x.empty() || cand < best_x) {
        best_x = std::move(cand);
        best_line = line_through(images[i], dir);
      }
    }
  }
  out.domain = std::move(best_x);
  out.line = best_line;
  out.domain_count = domain_on(*out.line);
  return out;
}

}  // namespace clab

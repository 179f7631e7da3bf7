#include "collinear_lab/density.hpp"

#include <algorithm>

#include "collinear_lab/error.hpp"

namespace clab {

namespace {

constexpr std::size_t kMaxPrefixCells = std::size_t{1} << 27;

Rational side_power(Int side, std::size_t d) {
  BigInt p = 1;
  for (std::size_t i = 0; i < d; ++i) p *= static_cast<long>(side);
  return Rational(p);
}

// d-dimensional inclusive prefix counts over a box, padded by one zero layer
// in front of every axis.
class PrefixCounts {
 public:
  PrefixCounts(const PointSet& a, const Box& box) : box_(box) {
    const std::size_t d = box.dim();
    stride_.assign(d, 1);
    std::size_t cells = 1;
    for (std::size_t i = d; i-- > 0;) {
      stride_[i] = cells;
      const auto ext = static_cast<std::size_t>(box.extent(i)) + 1;
      if (ext > kMaxPrefixCells / cells) fail(ErrorCode::InvalidArgument, "bounding box too large for prefix sums");
      cells *= ext;
    }
    sums_.assign(cells, 0);
    for (const auto& p : a) {
      if (!box.contains(p)) continue;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d; ++i) idx += static_cast<std::size_t>(p[i] - box.lo(i) + 1) * stride_[i];
      ++sums_[idx];
    }
    for (std::size_t axis = 0; axis < d; ++axis) {
      const std::size_t ext = static_cast<std::size_t>(box.extent(axis)) + 1;
      for (std::size_t idx = 0; idx < cells; ++idx) {
        if ((idx / stride_[axis]) % ext != 0) sums_[idx] += sums_[idx - stride_[axis]];
      }
    }
  }

  /// Points of A in prod [lo_i, hi_i] intersected with the box.
  std::size_t count(std::span<const Int> lo, std::span<const Int> hi) const {
    const std::size_t d = box_.dim();
    std::vector<std::size_t> a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
      const Int l = std::max(lo[i], box_.lo(i)), h = std::min(hi[i], box_.hi(i));
      if (l > h) return 0;
      a[i] = static_cast<std::size_t>(l - box_.lo(i));      // exclusive lower prefix index
      b[i] = static_cast<std::size_t>(h - box_.lo(i) + 1);  // inclusive upper prefix index
    }
    long long total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::size_t idx = 0;
      int sign = 1;
      for (std::size_t i = 0; i < d; ++i) {
        if (mask >> i & 1) {
          idx += a[i] * stride_[i];
          sign = -sign;
        } else {
          idx += b[i] * stride_[i];
        }
      }
      total += sign * static_cast<long long>(sums_[idx]);
    }
    return static_cast<std::size_t>(total);
  }

 private:
  Box box_;
  std::vector<std::size_t> stride_;
  std::vector<std::uint32_t> sums_;
};

}  // namespace

Rational window_density(const PointSet& a, const LatticePoint& corner, Int side) {
  if (side <= 0) fail(ErrorCode::InvalidArgument, "window side L must be positive");
  if (!a.empty()) require_same_dim(a[0], corner);
  std::size_t count = 0;
  for (const auto& p : a) {
    bool inside = true;
    for (std::size_t i = 0; i < p.dim() && inside; ++i) inside = p[i] >= corner[i] && p[i] <= corner[i] + side;
    count += inside ? 1 : 0;
  }
  return Rational(static_cast<unsigned long>(count)) / side_power(side, corner.dim());
}

Box bounding_box(const PointSet& a) {
  if (a.empty()) fail(ErrorCode::InvalidArgument, "bounding box of an empty set");
  std::vector<Int> lo(a[0].coords().begin(), a[0].coords().end()), hi = lo;
  for (const auto& p : a)
    for (std::size_t i = 0; i < p.dim(); ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return Box(std::move(lo), std::move(hi));
}

std::vector<DensityReport> banach_density_estimate(const PointSet& a, std::span<const Int> sides,
                                                   const std::optional<Box>& bounds) {
  for (Int s : sides)
    if (s <= 0) fail(ErrorCode::InvalidArgument, "window side L must be positive");
  std::vector<DensityReport> out;
  if (bounds && !a.empty() && bounds->dim() != a.dim())
    fail(ErrorCode::DimensionMismatch, "bounds and set dimensions differ");
  if (a.empty()) {
    const std::size_t d = bounds ? bounds->dim() : a.dim();
    for (Int s : sides) {
      std::vector<Int> c(d, 0);
      for (std::size_t i = 0; bounds && i < d; ++i) c[i] = bounds->lo(i);
      LatticePoint corner(std::move(c));
      out.push_back(DensityReport{s, std::move(corner), 0, Rational(0)});
    }
    return out;
  }
  const Box box = bounds ? *bounds : bounding_box(a);
  const PrefixCounts prefix(a, box);
  const std::size_t d = box.dim();
  for (Int s : sides) {
    // Corner ranges per axis.
    std::vector<Int> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = box.lo(i);
      hi[i] = std::max(box.lo(i), box.hi(i) - s);
    }
    DensityReport best{s, LatticePoint(lo), 0, Rational(0)};
    std::vector<Int> corner = lo, upper(d);
    bool first = true;
    while (true) {
      for (std::size_t i = 0; i < d; ++i) upper[i] = corner[i] + s;
      const std::size_t c = prefix.count(corner, upper);
      if (first || c > best.count) {
        best.count = c;
        best.best_corner = LatticePoint(corner);
        first = false;
      }
      std::size_t axis = d;
      while (axis-- > 0) {
        if (corner[axis] < hi[axis]) {
          ++corner[axis];
          break;
        }
        corner[axis] = lo[axis];
      }
      if (axis == static_cast<std::size_t>(-1)) break;
    }
    best.value = Rational(static_cast<unsigned long>(best.count)) / side_power(s, d);
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace clab

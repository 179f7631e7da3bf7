#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collinear_lab/exact.hpp"

namespace clab {

/// Integer vector of fixed dimension.  Coordinates are bounded by
/// kCoordinateLimit so every derived product is exact in a Wide.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<Int> coords);
  LatticePoint(std::initializer_list<Int> coords);

  static LatticePoint zero(std::size_t dim);
  static LatticePoint unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return coords_.size(); }
  Int operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Int> coords() const { return coords_; }
  bool is_zero() const;

  LatticePoint operator+(const LatticePoint& other) const;
  LatticePoint operator-(const LatticePoint& other) const;
  LatticePoint scaled(Int factor) const;

  std::string to_string() const;  // space separated

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  std::vector<Int> coords_;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

Wide dot(const LatticePoint& a, const LatticePoint& b);
Wide norm_squared(const LatticePoint& v);
Wide distance_squared(const LatticePoint& a, const LatticePoint& b);

void require_same_dim(const LatticePoint& a, const LatticePoint& b);

/// Vector of reduced rationals.
class RationalPoint {
 public:
  RationalPoint() = default;
  explicit RationalPoint(std::vector<Rational> coords);
  explicit RationalPoint(const LatticePoint& p);

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Rational> coords() const { return coords_; }

  LatticePoint floor() const;
  std::string to_string() const;  // space separated, num/den where needed

  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;

 private:
  std::vector<Rational> coords_;
};

RationalPoint parse_rational_point(std::string_view text);  // "1/2,3" or "1/2 3"

/// Primitive direction of a nonzero vector: divided by the gcd of its entries
/// and sign-normalised so the first nonzero entry is positive.
LatticePoint primitive_direction(const LatticePoint& delta);

/// Exact key for a line through lattice points: primitive direction plus the
/// Pluecker moments p_i v_j - p_j v_i (i < j) of any point p on the line.
class CanonicalLine {
 public:
  const LatticePoint& direction() const { return direction_; }
  std::span<const Wide> anchor() const { return anchor_; }
  std::size_t dim() const { return direction_.dim(); }

  bool contains(const LatticePoint& p) const;
  /// A rational point of the line (the one whose pivot coordinate is zero).
  RationalPoint point_on_line() const;
  std::string to_string() const;

  friend bool operator==(const CanonicalLine&, const CanonicalLine&) = default;
  friend std::strong_ordering operator<=>(const CanonicalLine& a, const CanonicalLine& b);

  friend CanonicalLine canonical_line(const LatticePoint& p, const LatticePoint& q);
  friend CanonicalLine line_through(const LatticePoint& p, const LatticePoint& direction);

 private:
  LatticePoint direction_;
  std::vector<Wide> anchor_;
};

struct CanonicalLineHash {
  std::size_t operator()(const CanonicalLine& line) const noexcept;
};

/// Throws DegenerateLine when p == q.
CanonicalLine canonical_line(const LatticePoint& p, const LatticePoint& q);
/// Line through p with the given (not necessarily primitive) direction.
CanonicalLine line_through(const LatticePoint& p, const LatticePoint& direction);

/// True iff every 2x2 minor of [q - p; r - p] vanishes.
bool collinear3(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r);

/// l(t) = floor((1 - t) start + t end) for rational endpoints.
class GeneralizedSegment {
 public:
  GeneralizedSegment(RationalPoint start, RationalPoint end);
  GeneralizedSegment(const LatticePoint& start, const LatticePoint& end);

  const RationalPoint& start() const { return start_; }
  const RationalPoint& end() const { return end_; }
  std::size_t dim() const { return start_.dim(); }

  LatticePoint first() const { return first_; }  // l(0)
  LatticePoint last() const { return last_; }    // l(1)
  /// m_l^2 = |l(1) - l(0)|^2, kept squared so it stays an integer.
  Wide m_ell_squared() const { return distance_squared(first_, last_); }
  bool degenerate() const { return first_ == last_; }

  RationalPoint real_point(const Rational& t) const;  // (1 - t) start + t end
  LatticePoint at(const Rational& t) const;           // l(t)

  std::string to_string() const;

 private:
  RationalPoint start_;
  RationalPoint end_;
  LatticePoint first_;
  LatticePoint last_;
};

/// A maximal run of parameters on which l(t) is constant.  The closure of
/// the run is [t_lo, t_hi]; `witness` is a parameter inside the run.
struct SegmentPiece {
  LatticePoint point;
  Rational t_lo;
  Rational t_hi;
  Rational witness;
};

/// Distinct values of l(t) in increasing t, located exactly through the
/// rational parameters at which some coordinate crosses an integer.
std::vector<SegmentPiece> segment_pieces(const GeneralizedSegment& seg);
std::vector<LatticePoint> segment_points(const GeneralizedSegment& seg);

/// A finite set of lattice points, kept sorted and duplicate-free.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<LatticePoint> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const LatticePoint> points() const { return points_; }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool contains(const LatticePoint& p) const;
  PointSet translated(const LatticePoint& offset) const;

 private:
  std::size_t dim_ = 0;
  std::vector<LatticePoint> points_;
};

/// Point-set text format: one point per line, space separated integers,
/// '#' comment lines; the first data line fixes the dimension.
PointSet parse_point_set(std::string_view text);
PointSet read_point_set(std::istream& in);
PointSet load_point_set(const std::string& path);
std::string format_point_set(const PointSet& set);
void save_point_set(const PointSet& set, const std::string& path, std::string_view header = {});

}  // namespace clab

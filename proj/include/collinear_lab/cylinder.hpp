#pragma once

// Discrete cylinders around generalized segments and the three witness
// conditions on a segment: slope close to w, image close to a line, and
// A dense in the cylinder.

#include <optional>
#include <vector>

#include "collinear_lab/maps.hpp"

namespace clab {

struct WitnessParams {
  Rational epsilon;
  Rational delta;
  RationalPoint w;  // direction in R^{d+1}; used unnormalized
};

/// Lattice points within distance eps * m of some point of the segment path.
class Cylinder {
 public:
  Cylinder(GeneralizedSegment segment, Rational epsilon, Wide radius_sq, std::vector<LatticePoint> points)
      : segment_(std::move(segment)), epsilon_(std::move(epsilon)), radius_sq_(radius_sq), points_(std::move(points)) {}

  const GeneralizedSegment& segment() const { return segment_; }
  const Rational& epsilon() const { return epsilon_; }
  /// floor(eps^2 m^2): a lattice point is inside iff its squared distance to
  /// the path is at most this.
  Wide radius_squared() const { return radius_sq_; }
  std::span<const LatticePoint> points() const { return points_; }  // sorted
  std::size_t size() const { return points_.size(); }
  bool contains(const LatticePoint& p) const;
  Box bounds() const;

 private:
  GeneralizedSegment segment_;
  Rational epsilon_;
  Wide radius_sq_ = 0;
  std::vector<LatticePoint> points_;
};

/// True iff eps^2 m^2 > 196 d, the thickness a cylinder needs.
bool thick_enough(const GeneralizedSegment& seg, const Rational& epsilon);

/// Throws ThinCylinder unless thick_enough().
Cylinder build_cylinder(const GeneralizedSegment& seg, const Rational& epsilon);

/// (f o l)(1) - (f o l)(0); throws DegenerateSlope when zero.
LatticePoint mean_slope(const LipschitzMap& f, const GeneralizedSegment& seg);

struct SlopeCondition {
  bool pass = false;
  /// eps - |v - w|, exact when rational, otherwise a certified bracket.
  Interval margin;
};

struct LineCondition {
  bool pass = false;
  Rational worst_t;
  Rational worst_sq;  // largest |(f o l)(t) - chord(t)|^2 over the checked t
  Rational bound_sq;  // eps^2 M^2 m^2
  Rational margin_sq() const { return bound_sq - worst_sq; }
};

struct DensityCondition {
  bool pass = false;
  std::size_t hits = 0;  // |A ∩ K|
  std::size_t size = 0;  // |K|
  Rational ratio;
};

struct ConditionReport {
  LatticePoint slope;  // mean slope, unnormalized
  SlopeCondition z_i;
  LineCondition z_ii;
  DensityCondition z_iii;
  bool all_pass() const { return z_i.pass && z_ii.pass && z_iii.pass; }
};

SlopeCondition check_slope(const LatticePoint& slope, const WitnessParams& params);
/// Checks both ends of every constant piece of l (the deviation is convex in
/// t on a piece, so the ends bound it).
LineCondition check_line(const LipschitzMap& f, const GeneralizedSegment& seg, const Rational& epsilon);
DensityCondition check_density(const PointSet& a, const Cylinder& cyl, const Rational& delta);

/// Evaluates all three conditions.  Throws DegenerateSlope, ThinCylinder, or
/// OutOfWindow when the segment leaves f's window.
ConditionReport check_conditions(const LipschitzMap& f, const PointSet& a, const GeneralizedSegment& seg,
                                 const WitnessParams& params);

struct ScanOptions {
  std::size_t budget = 20000;  // candidate segments per direction
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Witness {
  GeneralizedSegment segment;
  RationalPoint w;
  ConditionReport report;
  Cylinder cylinder;
};

struct ScanOutcome {
  std::optional<Witness> witness;
  std::size_t directions_tried = 0;
  std::size_t candidates = 0;   // segments evaluated
  std::size_t slope_pass = 0;   // of which passed z-i
  std::size_t line_pass = 0;    // of which also passed z-ii
};

/// The 3^{d+1} - 1 nonzero vectors of {-1, 0, 1}^{d+1}, lexicographic.
std::vector<RationalPoint> sign_pattern_directions(std::size_t image_dim);

/// Searches lattice-endpoint segments whose cylinders fit in f's window,
/// shortest first and coarse-to-fine over start points (shuffled by seed
/// within each level), trying each direction of `directions` in order.
/// params.w is ignored.  The first witness in scan order wins regardless of
/// the thread count.
ScanOutcome scan_for_witness(const LipschitzMap& f, const PointSet& a, const Rational& epsilon,
                             const Rational& delta, const std::vector<RationalPoint>& directions,
                             const ScanOptions& options);

}  // namespace clab

#pragma once

// Tabulated Lipschitz maps Z^d -> Z^{d+h} on box windows, their validators,
// and the reductions between formulations (sequences to paths, codimension
// projection, gluing finite instances, rescaling).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collinear_lab/lattice.hpp"

namespace clab {

/// Closed integer box prod [lo_i, hi_i].  Points are indexed in
/// lexicographic order (last coordinate fastest).
class Box {
 public:
  Box() = default;
  Box(std::vector<Int> lo, std::vector<Int> hi);
  static Box cube(std::size_t dim, Int lo, Int hi);

  std::size_t dim() const { return lo_.size(); }
  Int lo(std::size_t i) const { return lo_[i]; }
  Int hi(std::size_t i) const { return hi_[i]; }
  Int extent(std::size_t i) const { return hi_[i] - lo_[i] + 1; }
  std::size_t size() const { return size_; }

  bool contains(const LatticePoint& p) const;
  bool contains(const Box& other) const;
  std::size_t index_of(const LatticePoint& p) const;  // requires contains(p)
  LatticePoint point_at(std::size_t index) const;
  void for_each(const std::function<void(const LatticePoint&)>& fn) const;

  std::string to_string() const;  // "lo1:hi1 lo2:hi2"
  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Int> lo_;
  std::vector<Int> hi_;
  std::size_t size_ = 0;
};

/// Parses "lo:hi" per axis, separated by ',' or ' '; a single "lo:hi" with
/// `dim` > 1 is repeated on every axis.
Box parse_box(std::string_view text, std::size_t dim);

/// Integer-valued function on a box (the g of a graph x -> (x, g(x))).
struct ScalarField {
  Box window;
  std::vector<Int> values;  // indexed like window

  Int operator()(const LatticePoint& x) const { return values.at(window.index_of(x)); }
};

/// Finite table of a map from a box window in Z^d into Z^{d+h}, together with
/// its declared Lipschitz constant M, stored exactly as M^2.  The table is not
/// validated on construction; validate_lipschitz() certifies it.
class LipschitzMap {
 public:
  LipschitzMap() = default;
  LipschitzMap(Box window, std::size_t codim, Rational lipschitz_squared, std::vector<Int> values);

  const Box& window() const { return window_; }
  std::size_t domain_dim() const { return window_.dim(); }
  std::size_t codim() const { return codim_; }
  std::size_t image_dim() const { return window_.dim() + codim_; }
  const Rational& lipschitz_squared() const { return lipschitz_sq_; }
  /// M itself when M^2 is a rational square.
  std::optional<Rational> lipschitz_constant() const;

  /// Throws OutOfWindow outside the window.
  LatticePoint operator()(const LatticePoint& x) const;
  LatticePoint value_at_index(std::size_t index) const;
  std::span<const Int> raw_value(std::size_t index) const {
    return {values_.data() + index * image_dim(), image_dim()};
  }
  std::span<const Int> raw_values() const { return values_; }

  /// Images of the points of `domain` (all must lie in the window), in order.
  std::vector<LatticePoint> image_of(const PointSet& domain) const;

  friend bool operator==(const LipschitzMap&, const LipschitzMap&) = default;

 private:
  Box window_;
  std::size_t codim_ = 1;
  Rational lipschitz_sq_{1};
  std::vector<Int> values_;
};

/// Map text format: header "d h M_num M_den lo_1 hi_1 ... lo_d hi_d", then one
/// line "x_1 .. x_d y_1 .. y_{d+h}" per window point in lexicographic order.
/// Leading '#' lines are comments.
LipschitzMap parse_map(std::string_view text);
LipschitzMap load_map(const std::string& path);
/// When M^2 is not a rational square the header carries a rational upper
/// bound of M (certified bracket, 2^-32 relative resolution).
std::string format_map(const LipschitzMap& map);
void save_map(const LipschitzMap& map, const std::string& path, std::string_view header = {});

enum class ValidationMode { Neighbors, AllPairs };

struct LipschitzViolation {
  LatticePoint x;
  LatticePoint y;
  Wide image_distance_sq;   // |f(x) - f(y)|^2
  Rational allowed_sq;      // M^2 |x - y|^2
};

struct ValidationReport {
  ValidationMode mode = ValidationMode::Neighbors;
  bool valid = true;
  std::size_t pairs_checked = 0;
  /// Squared Lipschitz constant certified for all pairs: M^2 d in neighbour
  /// mode (path argument), M^2 in all-pairs mode.
  Rational certified_global_sq;
  std::optional<LipschitzViolation> first_violation;
};

ValidationReport validate_lipschitz(const LipschitzMap& map, ValidationMode mode);

/// f(x) = (x, g(x)) with M^2 = 1 + M_g^2.  Throws InvalidArgument if g is not
/// M_g-Lipschitz across unit steps.
LipschitzMap graph_embed(const ScalarField& g, const Rational& slope_bound);

/// Points of Z^n (n >= 2) whose consecutive gaps are bounded on average by
/// `average_bound`.
class GapSequence {
 public:
  /// Throws InvalidArgument if the average l2 gap exceeds the bound.
  GapSequence(std::vector<LatticePoint> points, Rational average_bound);

  std::span<const LatticePoint> points() const { return points_; }
  const Rational& average_bound() const { return average_bound_; }
  std::size_t dim() const { return points_.empty() ? 0 : points_.front().dim(); }

 private:
  std::vector<LatticePoint> points_;
  Rational average_bound_;
};

/// Certified check of (1/m) sum |u_{i+1} - u_i|_2 <= bound over the m stored gaps.
bool average_gap_within(std::span<const LatticePoint> points, const Rational& bound);

struct PathLift {
  LipschitzMap map;            // on [1, a_m], unit steps, M = 1
  PointSet set;                // {a_i}
  std::vector<Int> positions;  // a_i for each sequence element
};

/// Strings minimal l1 paths between consecutive points (axis 1 first, then
/// axis 2, ...) into a 1-Lipschitz map with f(a_i) = u_i, a_1 = 1 and
/// a_{i+1} = a_i + |u_{i+1} - u_i|_1.
PathLift sequence_to_path(const GapSequence& sequence);

/// An h-dimensional affine subspace of Z^{d+h}: base + span(spanning).
struct AffineSubspace {
  RationalPoint base;
  std::vector<LatticePoint> spanning;
};

struct ProjectedMap {
  LipschitzMap map;             // into Z^{d+1}
  std::size_t dropped = 0;      // number of trailing coordinates removed (h - 1)

  /// Pre-image under the projection of a line of Z^{d+1}.
  AffineSubspace preimage(const CanonicalLine& line) const;
};

ProjectedMap project_codim(const LipschitzMap& map);

/// Reorders image coordinates: new coordinate i is old coordinate perm[i].
LipschitzMap permute_image(const LipschitzMap& map, std::span<const std::size_t> perm);

/// V(x) = (f(floor(r x) + z) - f(z)) / (M r).  Requires a rational M.
RationalPoint rescale_map(const LipschitzMap& map, Int r, const LatticePoint& base, const RationalPoint& x);

// ------------------------------------------------------------------ gluing

struct Instance {
  PointSet set;      // inside [1, L]^d
  LipschitzMap map;  // window exactly [1, L]^d, codim 1
};

struct BlockOffset {
  Int side = 0;              // L
  LatticePoint image_shift;  // N_L in Z^{d+1}
  LatticePoint domain_shift; // M_L in Z^d
};

struct GlueResult {
  PointSet set;
  LipschitzMap map;
  std::vector<BlockOffset> blocks;

  Box block_box(std::size_t block) const;
};

/// Places the instances side by side along the first domain axis, shifting
/// each image so it avoids every line through two earlier image points, and
/// fills the gaps with an M-Lipschitz interpolation.
GlueResult glue_instances(const std::vector<Instance>& family);

struct GlueAudit {
  bool ok = true;
  std::size_t lines_checked = 0;
  std::size_t image_points = 0;
  std::string violation;
};

/// Exhaustive check over every line through two glued block-image points: a
/// line whose latest block is B holds at most one point of blocks before B.
GlueAudit audit_glue(const GlueResult& glued);

/// Manifest: one "map_file set_file" pair per line, relative to the manifest.
std::vector<Instance> load_family_manifest(const std::string& path);

}  // namespace clab

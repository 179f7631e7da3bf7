#pragma once

// Window densities |A ∩ prod [N_i, N_i + L]| / L^d and their finite-scale
// suprema over corners.

#include <optional>
#include <span>
#include <vector>

#include "collinear_lab/maps.hpp"

namespace clab {

/// Exact count over the closed box of side L at `corner`, divided by L^d.
/// The closed box holds (L + 1)^d lattice points, so values can exceed 1.
Rational window_density(const PointSet& a, const LatticePoint& corner, Int side);

struct DensityReport {
  Int side = 0;
  LatticePoint best_corner;
  std::size_t count = 0;
  Rational value;
};

/// For each L, the best window density over corners whose window fits inside
/// `bounds` (default: the bounding box of A).  When a window does not fit
/// along some axis, that axis uses the lower bound as its only corner.  Ties
/// go to the lexicographically least corner.  Empty A reports zeros.
std::vector<DensityReport> banach_density_estimate(const PointSet& a, std::span<const Int> sides,
                                                   const std::optional<Box>& bounds = std::nullopt);

/// Bounding box of a nonempty set.
Box bounding_box(const PointSet& a);

}  // namespace clab

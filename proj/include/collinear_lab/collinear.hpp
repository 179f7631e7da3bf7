#pragma once

// Maximal collinear subsets of finite lattice point sets: an exhaustive
// oracle, a direction-hashing engine, and k-collinearity queries on f(A).

#include <optional>
#include <span>
#include <vector>

#include "collinear_lab/maps.hpp"

namespace clab {

/// `count` distinct input points lie on `line`.  When several lines reach the
/// maximum, the witness is the one whose two least points are least.
struct CollinearResult {
  std::size_t count = 0;
  std::optional<CanonicalLine> line;   // present when count >= 2
  std::vector<LatticePoint> points;    // the points on the line, sorted
};

/// Every pair's line tested against every point; duplicates count once.
CollinearResult max_collinear_naive(std::span<const LatticePoint> points);
/// Per base point, buckets the primitive directions to all later points.
CollinearResult max_collinear_hash(std::span<const LatticePoint> points, unsigned threads = 1);

/// Weighted variant: a line scores the sum of the weights of the distinct
/// points on it; a set with one distinct point scores its weight.  `points`
/// must be sorted and duplicate-free.  `count` holds the best score.
CollinearResult max_collinear_weighted(std::span<const LatticePoint> points, std::span<const std::size_t> weights,
                                       unsigned threads = 1);

struct KCollinearResult {
  bool found = false;
  std::vector<LatticePoint> domain;  // X, sorted, images distinct and collinear
  std::optional<CanonicalLine> line;  // line through f(X) when k >= 2
  std::size_t max_count = 0;          // most distinct collinear points of f(A)
  std::size_t domain_count = 0;       // points of A whose image lies on `line`
};

/// Least X (sorted k-subsets compared lexicographically) among subsets of A
/// with k distinct collinear images.  Throws on k < 1 or A outside the window.
KCollinearResult find_k_collinear(const LipschitzMap& f, const PointSet& a, std::size_t k, unsigned threads = 1);

}  // namespace clab

#pragma once

// Lower bounds on the window size L(d, k, delta, M) beyond which dense sets
// always have k collinear images, by exhibiting verified counterexamples.

#include <optional>
#include <string>
#include <vector>

#include "collinear_lab/collinear.hpp"

namespace clab {

/// Collinearity counted over A with multiplicity: a line scores the number of
/// points of A whose image lies on it.
struct NoCollinearCertificate {
  bool holds = false;  // every line scores below k
  std::size_t max_count = 0;
  std::optional<CanonicalLine> line;   // a line reaching max_count (when images are not all equal)
  std::vector<LatticePoint> domain;    // the points of A mapped onto it
};

NoCollinearCertificate verify_no_k_collinear(const LipschitzMap& f, const PointSet& a, std::size_t k,
                                             unsigned threads = 1);

struct EstimateWitness {
  std::size_t d = 1;
  std::size_t k = 2;
  Rational delta{1};
  Rational m{1};
  Int side = 0;
  PointSet set;
  LipschitzMap map;
  std::uint64_t seed = 0;
  std::string method;  // trivial, exhaustive, hill-climb, archive
};

struct LevelLog {
  Int side = 0;
  std::size_t required = 0;  // ceil(delta L^d)
  bool found = false;
  std::string method;
  std::size_t evaluations = 0;
};

struct EstimateOptions {
  std::size_t budget = 20000;  // objective evaluations per L
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Int max_side = 64;
  std::vector<EstimateWitness> prior;  // reused when their parameters dominate
};

struct EstimateResult {
  Int l_lower = 0;
  std::optional<EstimateWitness> witness;  // at l_lower
  /// True when the first failing side was searched exhaustively, so l_lower
  /// is exact.
  bool exact = false;
  std::vector<LevelLog> levels;
};

/// Walks L = 1, 2, .. until a side admits no witness within budget (or
/// max_side).  A witness has A in [1, L]^d with |A| >= delta L^d and an
/// M-Lipschitz f into Z^{d+1} with every line scoring below k.  Exhaustive
/// for d = 1 while the step tables times subsets stay small.
EstimateResult estimate_l_lower(std::size_t d, std::size_t k, const Rational& delta, const Rational& m,
                                const EstimateOptions& options);

/// Independent re-check of a witness: window, Lipschitz table, density and
/// collinearity.
bool verify_witness(const EstimateWitness& w);

/// Writes "<stem>.map" and "<stem>.set" with a one-line provenance header.
void save_witness(const EstimateWitness& w, const std::string& stem, std::size_t budget);
/// Loads every witness pair in a directory (files ending in .map with a
/// matching .set); provenance headers carry the parameters.
std::vector<EstimateWitness> load_witness_archive(const std::string& dir);

}  // namespace clab

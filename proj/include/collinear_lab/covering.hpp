#pragma once

// Simultaneous rational approximation, projections along a direction, the
// family of parallel lines through f(K), and pigeonhole extraction of k
// points with collinear images.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "collinear_lab/cylinder.hpp"

namespace clab {

struct DirichletCertificate {
  Int b = 0;
  std::vector<Int> a;
  Int n = 0;
  std::vector<Rational> u;

  Rational max_error() const;  // max_l |u_l - a_l / b|
  Rational bound() const;      // 1 / (b N)
  /// b <= N^d and every error within the bound, checked exactly.
  bool verify() const;
};

/// Smallest b in 1..N^d for which a_l = round(b u_l) gives |b u_l - a_l| < 1/N
/// on every coordinate.  Such b exists by the pigeonhole principle; failure to
/// find one is an Internal error.
DirichletCertificate dirichlet_approx(std::span<const Rational> u, Int n);

/// (x_2, .., x_{d+1}) - (x_1 / u_1)(u_2, .., u_{d+1}); NonTransverse if u_1 = 0.
RationalPoint project_along(const RationalPoint& u, const RationalPoint& x);

/// Lines {x - t s} through every image point of a cylinder.
struct LineFamily {
  LatticePoint s;
  std::vector<CanonicalLine> lines;     // sorted
  std::vector<RationalPoint> traces;    // traces[i]: line i meets {x_1 = 0}
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> line_of_point;

  std::size_t size() const { return lines.size(); }
};

/// Throws NonTransverse if s_1 = 0 and OutOfWindow if the cylinder leaves
/// f's window.
LineFamily build_line_family(const LipschitzMap& f, const Cylinder& cyl, const LatticePoint& s, unsigned threads = 1);

/// Whether a trace lies in the union over l in [0, b-1] of P_s(l, 0, .., 0) + Z^d.
bool trace_in_lattice_union(const RationalPoint& trace, const LatticePoint& s);

struct Extraction {
  bool found = false;
  std::vector<LatticePoint> domain;    // X: least k points of the best bucket
  std::optional<CanonicalLine> line;
  std::size_t hits = 0;                // |A ∩ K|
  std::size_t best_bucket = 0;
  std::map<std::size_t, std::size_t, std::greater<>> histogram;  // bucket size -> lines
};

/// Buckets A ∩ K by the family line of each image; the largest bucket (least
/// line on ties) wins when it holds at least k points.
Extraction extract_line(const LipschitzMap& f, const PointSet& a, const Cylinder& cyl, const LineFamily& family,
                        std::size_t k);

struct PipelineOptions {
  Rational delta{1, 4};
  ScanOptions scan;
  std::size_t max_family = 0;  // 0: no cap on |E|
  std::vector<RationalPoint> directions;  // empty: sign-pattern grid
};

enum class PipelineStage { Witness, Family, Extract, Done };

const char* stage_name(PipelineStage stage);

struct PipelineReport {
  PipelineStage stage = PipelineStage::Witness;  // Done on success
  bool verified = false;  // f(X) re-checked with collinear3
  std::string reason;

  // Measurements of the attempt reported (the success, or the failure that
  // got furthest).
  std::size_t directions_tried = 0;
  std::size_t candidates = 0;
  std::optional<RationalPoint> w;
  std::vector<std::size_t> permutation;  // image coordinate i came from perm[i]
  std::optional<DirichletCertificate> dirichlet;
  Rational epsilon;
  std::optional<GeneralizedSegment> segment;
  std::optional<ConditionReport> conditions;
  std::size_t cylinder_size = 0;
  std::size_t family_size = 0;
  Extraction extraction;
  std::optional<CanonicalLine> line;  // in the original image coordinates
};

/// Witness scan per direction w (coordinates permuted so |w_1| is largest),
/// Dirichlet on (w_l / w_1) with this N, eps = 1/(bN), the family along
/// s = (b, a), then extraction.  Failures are report content.
PipelineReport full_pipeline(const LipschitzMap& f, const PointSet& a, std::size_t k, Int n,
                             const PipelineOptions& options);

/// |E| b^{d-1} N^d / m^d, as a measurement.
double family_scaling_ratio(std::size_t family_size, Int b, Int n, Wide m_sq, std::size_t d);

}  // namespace clab

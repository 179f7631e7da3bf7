#pragma once

// Seeded generators for maps, point sets and gap sequences.  Every generator
// draws from Rng only, so a seed reproduces its output on every platform.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "collinear_lab/maps.hpp"

namespace clab {

/// splitmix64 mix of a seed with stream labels; used to give every restart,
/// direction or block its own independent stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi] by rejection (no library distribution, whose
  /// output is implementation defined).
  Int uniform(Int lo, Int hi);
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<Int>(n) - 1)); }
  /// True with probability p (p a rational in [0, 1]).
  bool bernoulli(const Rational& p);

  template <class It>
  void shuffle(It first, It last) {
    for (auto n = last - first; n > 1; --n) std::iter_swap(first + (n - 1), first + below(static_cast<std::size_t>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

// ------------------------------------------------------------------- maps

/// x -> (x, 0): M = 1.
LipschitzMap flat_map(const Box& window);
/// x -> (x, sum c_i x_i): M^2 = 1 + max c_i^2.
LipschitzMap affine_map(const Box& window, std::span<const Int> slopes);
/// x -> (x, g(x)) with g a sum of independent +-1 walks along each axis: M^2 = 2.
LipschitzMap surface_map(const Box& window, Rng& rng);
/// d = 1 walk in Z^2 with steps in {0, +-e1, +-e2}, starting at the origin: M = 1.
LipschitzMap walk_map(const Box& window, Rng& rng);
/// x -> (W(x_1), x_2, .., x_d) with W a walk as above: M = 1.
LipschitzMap walk_lift_map(const Box& window, Rng& rng);
/// d = 1: n -> (floor((n + 1) / 2), floor(n / 2)): M = 1.
LipschitzMap staircase_map(const Box& window);
/// Sum over axes of independent walks with steps in {-1, 0, 1}^{d+h}: M^2 = d + h.
LipschitzMap random_map(const Box& window, std::size_t codim, Rng& rng);

/// Dispatches on a kind name (flat, affine, surface, walk, walk-lift,
/// staircase, random); `slope` feeds the affine kind on every axis.
LipschitzMap generate_map(std::string_view kind, const Box& window, std::size_t codim, Int slope, Rng& rng);

// ------------------------------------------------------------------- sets

PointSet full_set(const Box& window);
/// Points whose coordinates are all divisible by `stride`.
PointSet coset_set(const Box& window, Int stride);
PointSet bernoulli_set(const Box& window, const Rational& p, Rng& rng);

/// Dispatches on a kind name (all, coset, bernoulli).
PointSet generate_set(std::string_view kind, const Box& window, Int stride, const Rational& p, Rng& rng);

// -------------------------------------------------------------- sequences

/// Sequence in Z^2 starting at the origin whose steps are uniform over the
/// nonzero integer vectors of l2 norm at most `max_gap`.  Its average gap is
/// then at most `max_gap`.
GapSequence random_gap_sequence(std::size_t length, const Rational& max_gap, Rng& rng);

}  // namespace clab

#pragma once

// Exact scalar helpers shared by every module: 128-bit integer utilities,
// GMP rationals, and outward-rounded square-root brackets.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace clab {

using Int = std::int64_t;
using Wide = __int128;
using Rational = mpq_class;
using BigInt = mpz_class;

// Lattice coordinates are bounded so that differences, 2x2 minors and squared
// norms of differences always fit in a Wide.
inline constexpr Int kCoordinateLimit = Int{1} << 40;

std::string to_string(Wide value);
BigInt to_big(Wide value);
Rational to_rational(Wide value);

// Always "num/den", including integers ("3/1").
std::string format_fraction(const Rational& q);
// "num" for integers, "num/den" otherwise.
std::string format_rational(const Rational& q);

// Accepts "n", "-n", "n/d"; the denominator must be positive.  Decimal
// notation is rejected on purpose.
Rational parse_rational(std::string_view text);
Int parse_int(std::string_view text);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);
// Floor that must fit in a lattice coordinate.
Int floor_to_int(const Rational& q);
// Nearest integer, ties rounded up.
BigInt round_of(const Rational& q);

Int to_int(const BigInt& z);

Int gcd(Int a, Int b);

// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

// lo <= sqrt(x) <= hi with hi - lo <= 2^-bits / den(x) (for x >= 0).  Exact
// (lo == hi) when x is the square of a rational.
Interval sqrt_bracket(const Rational& x, unsigned bits);

bool is_rational_square(const Rational& x);
// Only valid when is_rational_square(x).
Rational rational_sqrt(const Rational& x);

// Sign of (sum_i sqrt(radicands[i]) - rhs), decided by refining brackets.
// Terminates because a sum of square roots of non-square rationals is
// irrational; all-square inputs are compared exactly.
int compare_sqrt_sum(std::span<const Rational> radicands, const Rational& rhs);

}  // namespace clab

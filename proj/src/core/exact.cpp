#include "collinear_lab/exact.hpp"

#include <algorithm>
#include <charconv>

#include "collinear_lab/error.hpp"

namespace clab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::DegenerateLine: return "degenerate-line";
    case ErrorCode::DegenerateSlope: return "degenerate-slope";
    case ErrorCode::OutOfWindow: return "out-of-window";
    case ErrorCode::ThinCylinder: return "too-thin-cylinder";
    case ErrorCode::NonTransverse: return "non-transverse";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Internal: return "internal-error";
  }
  return "unknown";
}

std::string to_string(Wide value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work with the magnitude in unsigned space so INT128_MIN is handled.
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(value)
                                   : static_cast<unsigned __int128>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt to_big(Wide value) { return BigInt(to_string(value)); }

Rational to_rational(Wide value) { return Rational(to_big(value)); }

std::string format_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return format_fraction(q);
}

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-')
    fail(ErrorCode::Parse, "malformed rational '" + std::string(text) + "' (expected num/den)");
  BigInt d(strip_plus(den));
  if (d == 0) fail(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational q(BigInt(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

Int parse_int(std::string_view text) {
  Int value = 0;
  std::string_view s = text;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail(ErrorCode::Parse, "malformed integer '" + std::string(text) + "'");
  return value;
}

BigInt floor_of(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

BigInt ceil_of(const Rational& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

BigInt round_of(const Rational& q) { return floor_of(q + Rational(1, 2)); }

Int to_int(const BigInt& z) {
  if (!z.fits_slong_p()) fail(ErrorCode::InvalidArgument, "integer " + z.get_str() + " out of 64-bit range");
  return static_cast<Int>(z.get_si());
}

Int floor_to_int(const Rational& q) {
  const BigInt f = floor_of(q);
  if (abs(f) > BigInt(static_cast<long>(kCoordinateLimit)))
    fail(ErrorCode::InvalidArgument, "coordinate " + f.get_str() + " exceeds the lattice coordinate limit");
  return to_int(f);
}

Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_rational_square(const Rational& x) {
  if (x < 0) return false;
  return mpz_perfect_square_p(x.get_num_mpz_t()) != 0 && mpz_perfect_square_p(x.get_den_mpz_t()) != 0;
}

Rational rational_sqrt(const Rational& x) {
  BigInt n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Interval sqrt_bracket(const Rational& x, unsigned bits) {
  require(x >= 0, ErrorCode::InvalidArgument, "square root of a negative rational");
  if (is_rational_square(x)) {
    const Rational r = rational_sqrt(x);
    return {r, r};
  }
  // sqrt(p/q) = sqrt(p*q)/q; bracket sqrt(p*q*4^bits) between consecutive integers.
  BigInt scaled = x.get_num() * x.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  BigInt denom = x.get_den();
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), bits);
  Rational lo(root, denom);
  Rational hi(root + 1, denom);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

int compare_sqrt_sum(std::span<const Rational> radicands, const Rational& rhs) {
  for (unsigned bits = 32; bits <= 8192; bits *= 2) {
    Rational lo = 0, hi = 0;
    for (const auto& r : radicands) {
      const Interval b = sqrt_bracket(r, bits);
      lo += b.lo;
      hi += b.hi;
    }
    if (lo > rhs) return 1;
    if (hi < rhs) return -1;
    if (lo == hi) return 0;  // all exact and equal to rhs
  }
  fail(ErrorCode::Internal, "square-root sum comparison did not separate");
}

}  // namespace clab

#include "collinear_lab/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "collinear_lab/error.hpp"

namespace clab {

namespace {

void check_coordinate(Int c) {
  if (c > kCoordinateLimit || c < -kCoordinateLimit)
    fail(ErrorCode::InvalidArgument, "coordinate " + std::to_string(c) + " exceeds the lattice coordinate limit 2^40");
}

inline void hash_mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_wide(Wide w) {
  const auto u = static_cast<unsigned __int128>(w);
  std::size_t h = std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(u));
  hash_mix(h, std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(u >> 64)));
  return h;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- LatticePoint

LatticePoint::LatticePoint(std::vector<Int> coords) : coords_(std::move(coords)) {
  for (Int c : coords_) check_coordinate(c);
}

LatticePoint::LatticePoint(std::initializer_list<Int> coords) : LatticePoint(std::vector<Int>(coords)) {}

LatticePoint LatticePoint::zero(std::size_t dim) { return LatticePoint(std::vector<Int>(dim, 0)); }

LatticePoint LatticePoint::unit(std::size_t dim, std::size_t axis) {
  std::vector<Int> c(dim, 0);
  c.at(axis) = 1;
  return LatticePoint(std::move(c));
}

bool LatticePoint::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](Int c) { return c == 0; });
}

LatticePoint LatticePoint::operator+(const LatticePoint& other) const {
  require_same_dim(*this, other);
  std::vector<Int> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = coords_[i] + other.coords_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::operator-(const LatticePoint& other) const {
  require_same_dim(*this, other);
  std::vector<Int> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = coords_[i] - other.coords_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::scaled(Int factor) const {
  std::vector<Int> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Wide v = static_cast<Wide>(coords_[i]) * factor;
    if (v > kCoordinateLimit || v < -kCoordinateLimit)
      fail(ErrorCode::InvalidArgument, "scaled coordinate exceeds the lattice coordinate limit");
    c[i] = static_cast<Int>(v);
  }
  return LatticePoint(std::move(c));
}

std::string LatticePoint::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(coords_[i]);
  }
  return out;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::size_t h = p.dim();
  for (Int c : p.coords()) hash_mix(h, std::hash<Int>{}(c));
  return h;
}

void require_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim())
    fail(ErrorCode::DimensionMismatch,
         "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

Wide dot(const LatticePoint& a, const LatticePoint& b) {
  require_same_dim(a, b);
  Wide s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += static_cast<Wide>(a[i]) * b[i];
  return s;
}

Wide norm_squared(const LatticePoint& v) { return dot(v, v); }

Wide distance_squared(const LatticePoint& a, const LatticePoint& b) {
  require_same_dim(a, b);
  Wide s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Wide d = static_cast<Wide>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

// --------------------------------------------------------------- RationalPoint

RationalPoint::RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
  for (auto& c : coords_) c.canonicalize();
}

RationalPoint::RationalPoint(const LatticePoint& p) {
  coords_.reserve(p.dim());
  for (Int c : p.coords()) coords_.emplace_back(static_cast<long>(c));
}

LatticePoint RationalPoint::floor() const {
  std::vector<Int> c;
  c.reserve(coords_.size());
  for (const auto& q : coords_) c.push_back(floor_to_int(q));
  return LatticePoint(std::move(c));
}

std::string RationalPoint::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ' ';
    out += format_rational(coords_[i]);
  }
  return out;
}

RationalPoint parse_rational_point(std::string_view text) {
  std::vector<Rational> coords;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != ' ') ++j;
    if (j > i) coords.push_back(parse_rational(text.substr(i, j - i)));
    i = j + 1;
  }
  if (coords.empty()) fail(ErrorCode::Parse, "empty rational point");
  return RationalPoint(std::move(coords));
}

// ------------------------------------------------------------ lines & minors

LatticePoint primitive_direction(const LatticePoint& delta) {
  if (delta.is_zero()) fail(ErrorCode::DegenerateLine, "zero vector has no direction");
  Int g = 0;
  for (Int c : delta.coords()) g = gcd(g, c);
  Int sign = 1;
  for (Int c : delta.coords()) {
    if (c != 0) {
      sign = c > 0 ? 1 : -1;
      break;
    }
  }
  std::vector<Int> out(delta.dim());
  for (std::size_t i = 0; i < delta.dim(); ++i) out[i] = sign * (delta[i] / g);
  return LatticePoint(std::move(out));
}

namespace {

std::vector<Wide> moments(const LatticePoint& v, const LatticePoint& p) {
  const std::size_t n = v.dim();
  std::vector<Wide> m;
  m.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.push_back(static_cast<Wide>(p[i]) * v[j] - static_cast<Wide>(p[j]) * v[i]);
  return m;
}

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  // position of (i, j), i < j, in row-major enumeration of pairs
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

CanonicalLine line_through(const LatticePoint& p, const LatticePoint& direction) {
  require_same_dim(p, direction);
  CanonicalLine line;
  line.direction_ = primitive_direction(direction);
  line.anchor_ = moments(line.direction_, p);
  return line;
}

CanonicalLine canonical_line(const LatticePoint& p, const LatticePoint& q) {
  require_same_dim(p, q);
  if (p == q) fail(ErrorCode::DegenerateLine, "a line needs two distinct points");
  return line_through(p, q - p);
}

bool CanonicalLine::contains(const LatticePoint& p) const {
  if (p.dim() != dim()) return false;
  return moments(direction_, p) == anchor_;
}

RationalPoint CanonicalLine::point_on_line() const {
  const std::size_t n = dim();
  std::size_t k = 0;
  while (direction_[k] == 0) ++k;
  std::vector<Rational> c(n);
  const Rational vk(static_cast<long>(direction_[k]));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    if (k < j)
      c[j] = -to_rational(anchor_[pair_index(n, k, j)]) / vk;
    else
      c[j] = to_rational(anchor_[pair_index(n, j, k)]) / vk;
  }
  return RationalPoint(std::move(c));
}

std::string CanonicalLine::to_string() const {
  std::string out = "direction=(" + direction_.to_string() + ") anchor=(";
  for (std::size_t i = 0; i < anchor_.size(); ++i) {
    if (i) out += ' ';
    out += clab::to_string(anchor_[i]);
  }
  return out + ")";
}

std::strong_ordering operator<=>(const CanonicalLine& a, const CanonicalLine& b) {
  if (auto c = a.direction_ <=> b.direction_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.anchor_.begin(), a.anchor_.end(), b.anchor_.begin(),
                                                b.anchor_.end());
}

std::size_t CanonicalLineHash::operator()(const CanonicalLine& line) const noexcept {
  std::size_t h = LatticePointHash{}(line.direction());
  for (Wide w : line.anchor()) hash_mix(h, hash_wide(w));
  return h;
}

bool collinear3(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r) {
  require_same_dim(p, q);
  require_same_dim(p, r);
  const std::size_t n = p.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Wide a_i = static_cast<Wide>(q[i]) - p[i];
    const Wide b_i = static_cast<Wide>(r[i]) - p[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Wide a_j = static_cast<Wide>(q[j]) - p[j];
      const Wide b_j = static_cast<Wide>(r[j]) - p[j];
      if (a_i * b_j - a_j * b_i != 0) return false;
    }
  }
  return true;
}

// ----------------------------------------------------------------- segments

GeneralizedSegment::GeneralizedSegment(RationalPoint start, RationalPoint end)
    : start_(std::move(start)), end_(std::move(end)) {
  if (start_.dim() != end_.dim())
    fail(ErrorCode::DimensionMismatch, "segment endpoints have different dimensions");
  if (start_.dim() == 0) fail(ErrorCode::InvalidArgument, "segment endpoints must have positive dimension");
  first_ = start_.floor();
  last_ = end_.floor();
}

GeneralizedSegment::GeneralizedSegment(const LatticePoint& start, const LatticePoint& end)
    : GeneralizedSegment(RationalPoint(start), RationalPoint(end)) {}

RationalPoint GeneralizedSegment::real_point(const Rational& t) const {
  std::vector<Rational> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = start_[i] + t * (end_[i] - start_[i]);
  return RationalPoint(std::move(c));
}

LatticePoint GeneralizedSegment::at(const Rational& t) const { return real_point(t).floor(); }

std::string GeneralizedSegment::to_string() const {
  return "(" + start_.to_string() + ") -> (" + end_.to_string() + ")";
}

std::vector<SegmentPiece> segment_pieces(const GeneralizedSegment& seg) {
  std::vector<Rational> breaks{Rational(0), Rational(1)};
  for (std::size_t i = 0; i < seg.dim(); ++i) {
    const Rational& s = seg.start()[i];
    const Rational& e = seg.end()[i];
    if (s == e) continue;
    const Rational lo = s < e ? s : e;
    const Rational hi = s < e ? e : s;
    for (BigInt n = ceil_of(lo); n <= floor_of(hi); ++n) breaks.push_back((Rational(n) - s) / (e - s));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Candidates alternate: breakpoint, open gap, breakpoint, ...
  std::vector<SegmentPiece> pieces;
  auto push = [&](const Rational& witness, const Rational& lo, const Rational& hi) {
    LatticePoint p = seg.at(witness);
    if (!pieces.empty() && pieces.back().point == p) {
      pieces.back().t_hi = hi;
      return;
    }
    pieces.push_back({std::move(p), lo, hi, witness});
  };
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    push(breaks[j], breaks[j], breaks[j]);
    if (j + 1 < breaks.size()) push((breaks[j] + breaks[j + 1]) / 2, breaks[j], breaks[j + 1]);
  }
  return pieces;
}

std::vector<LatticePoint> segment_points(const GeneralizedSegment& seg) {
  std::vector<LatticePoint> out;
  for (auto& piece : segment_pieces(seg)) out.push_back(std::move(piece.point));
  return out;
}

// ----------------------------------------------------------------- PointSet

PointSet::PointSet(std::size_t dim, std::vector<LatticePoint> points) : dim_(dim), points_(std::move(points)) {
  for (const auto& p : points_)
    if (p.dim() != dim_)
      fail(ErrorCode::DimensionMismatch,
           "point of dimension " + std::to_string(p.dim()) + " in a set of dimension " + std::to_string(dim_));
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

bool PointSet::contains(const LatticePoint& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

PointSet PointSet::translated(const LatticePoint& offset) const {
  std::vector<LatticePoint> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p + offset);
  return PointSet(dim_, std::move(out));
}

PointSet parse_point_set(std::string_view text) {
  std::vector<LatticePoint> points;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (dim == 0) dim = tokens.size();
    if (tokens.size() != dim)
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                                 " coordinates, found " + std::to_string(tokens.size()));
    std::vector<Int> coords;
    coords.reserve(dim);
    try {
      for (auto tok : tokens) coords.push_back(parse_int(tok));
      points.emplace_back(std::move(coords));
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return PointSet(dim, std::move(points));
}

PointSet read_point_set(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_point_set(buf.str());
}

PointSet load_point_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open point-set file '" + path + "'");
  return read_point_set(in);
}

std::string format_point_set(const PointSet& set) {
  std::string out;
  for (const auto& p : set) {
    out += p.to_string();
    out += '\n';
  }
  return out;
}

void save_point_set(const PointSet& set, const std::string& path, std::string_view header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  if (!header.empty()) out << "# " << header << '\n';
  out << format_point_set(set);
}

}  // namespace clab

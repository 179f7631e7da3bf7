#include "collinear_lab/maps.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "collinear_lab/error.hpp"

namespace clab {

namespace {

constexpr std::size_t kMaxWindowSize = std::size_t{1} << 31;

std::vector<std::string_view> tokens_of(std::string_view line) {
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

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

// ---------------------------------------------------------------------- Box

Box::Box(std::vector<Int> lo, std::vector<Int> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) fail(ErrorCode::DimensionMismatch, "box bounds have different dimensions");
  if (lo_.empty()) fail(ErrorCode::InvalidArgument, "box must have positive dimension");
  size_ = 1;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (lo_[i] > hi_[i]) fail(ErrorCode::InvalidArgument, "empty box: lo > hi on axis " + std::to_string(i + 1));
    if (lo_[i] < -kCoordinateLimit || hi_[i] > kCoordinateLimit)
      fail(ErrorCode::InvalidArgument, "box exceeds the lattice coordinate limit");
    const auto ext = static_cast<std::size_t>(hi_[i] - lo_[i] + 1);
    if (ext > kMaxWindowSize / size_) fail(ErrorCode::InvalidArgument, "box has too many points for a table");
    size_ *= ext;
  }
}

Box Box::cube(std::size_t dim, Int lo, Int hi) { return Box(std::vector<Int>(dim, lo), std::vector<Int>(dim, hi)); }

bool Box::contains(const LatticePoint& p) const {
  if (p.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (other.lo_[i] < lo_[i] || other.hi_[i] > hi_[i]) return false;
  return true;
}

std::size_t Box::index_of(const LatticePoint& p) const {
  if (!contains(p)) fail(ErrorCode::OutOfWindow, "point (" + p.to_string() + ") outside window " + to_string());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) idx = idx * static_cast<std::size_t>(extent(i)) + (p[i] - lo_[i]);
  return idx;
}

LatticePoint Box::point_at(std::size_t index) const {
  std::vector<Int> c(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    const auto ext = static_cast<std::size_t>(extent(i));
    c[i] = lo_[i] + static_cast<Int>(index % ext);
    index /= ext;
  }
  return LatticePoint(std::move(c));
}

void Box::for_each(const std::function<void(const LatticePoint&)>& fn) const {
  for (std::size_t i = 0; i < size_; ++i) fn(point_at(i));
}

std::string Box::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) out += ' ';
    out += std::to_string(lo_[i]) + ":" + std::to_string(hi_[i]);
  }
  return out;
}

Box parse_box(std::string_view text, std::size_t dim) {
  std::vector<Int> lo, hi;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != ' ') ++j;
    if (j > i) {
      const std::string_view part = text.substr(i, j - i);
      const auto colon = part.find(':', 1);
      if (colon == std::string_view::npos) fail(ErrorCode::Parse, "malformed range '" + std::string(part) + "'");
      lo.push_back(parse_int(part.substr(0, colon)));
      hi.push_back(parse_int(part.substr(colon + 1)));
    }
    i = j + 1;
  }
  if (lo.size() == 1 && dim > 1) {
    lo.assign(dim, lo[0]);
    hi.assign(dim, hi[0]);
  }
  if (lo.size() != dim)
    fail(ErrorCode::DimensionMismatch,
         "window has " + std::to_string(lo.size()) + " ranges, expected " + std::to_string(dim));
  return Box(std::move(lo), std::move(hi));
}

// ------------------------------------------------------------- LipschitzMap

LipschitzMap::LipschitzMap(Box window, std::size_t codim, Rational lipschitz_squared, std::vector<Int> values)
    : window_(std::move(window)), codim_(codim), lipschitz_sq_(std::move(lipschitz_squared)), values_(std::move(values)) {
  if (codim_ < 1) fail(ErrorCode::InvalidArgument, "codimension h must be at least 1");
  if (lipschitz_sq_ <= 0) fail(ErrorCode::InvalidArgument, "Lipschitz constant must be positive");
  if (values_.size() != window_.size() * image_dim())
    fail(ErrorCode::InvalidArgument, "map table has " + std::to_string(values_.size()) + " entries, expected " +
                                         std::to_string(window_.size() * image_dim()));
  for (Int v : values_)
    if (v > kCoordinateLimit || v < -kCoordinateLimit)
      fail(ErrorCode::InvalidArgument, "map value exceeds the lattice coordinate limit");
}

std::optional<Rational> LipschitzMap::lipschitz_constant() const {
  if (!is_rational_square(lipschitz_sq_)) return std::nullopt;
  return rational_sqrt(lipschitz_sq_);
}

LatticePoint LipschitzMap::operator()(const LatticePoint& x) const {
  if (x.dim() != domain_dim())
    fail(ErrorCode::DimensionMismatch, "map expects " + std::to_string(domain_dim()) + "-dimensional arguments");
  return value_at_index(window_.index_of(x));
}

LatticePoint LipschitzMap::value_at_index(std::size_t index) const {
  const auto v = raw_value(index);
  return LatticePoint(std::vector<Int>(v.begin(), v.end()));
}

std::vector<LatticePoint> LipschitzMap::image_of(const PointSet& domain) const {
  std::vector<LatticePoint> out;
  out.reserve(domain.size());
  for (const auto& x : domain) out.push_back((*this)(x));
  return out;
}

LipschitzMap parse_map(std::string_view text) {
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::vector<std::string_view>> {
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      auto toks = tokens_of(line);
      if (toks.empty() || toks[0].front() == '#') continue;
      return toks;
    }
    return std::nullopt;
  };
  auto where = [&] { return "map line " + std::to_string(line_no) + ": "; };

  const auto header = next_line();
  if (!header) fail(ErrorCode::Parse, "map file has no header");
  try {
    if (header->size() < 4) fail(ErrorCode::Parse, "header needs 'd h M_num M_den lo hi ...'");
    const Int d = parse_int((*header)[0]);
    const Int h = parse_int((*header)[1]);
    if (d < 1 || h < 1) fail(ErrorCode::Parse, "d and h must be positive");
    if (header->size() != 4 + 2 * static_cast<std::size_t>(d))
      fail(ErrorCode::Parse, "header has " + std::to_string(header->size()) + " fields, expected " +
                                 std::to_string(4 + 2 * d));
    const Rational m = parse_rational(std::string((*header)[2]) + "/" + std::string((*header)[3]));
    if (m <= 0) fail(ErrorCode::Parse, "Lipschitz constant must be positive");
    std::vector<Int> lo, hi;
    for (Int i = 0; i < d; ++i) {
      lo.push_back(parse_int((*header)[4 + 2 * i]));
      hi.push_back(parse_int((*header)[5 + 2 * i]));
    }
    Box window(lo, hi);
    const std::size_t dd = static_cast<std::size_t>(d), n = dd + static_cast<std::size_t>(h);
    std::vector<Int> values;
    values.reserve(window.size() * n);
    for (std::size_t idx = 0; idx < window.size(); ++idx) {
      const auto row = next_line();
      if (!row) fail(ErrorCode::Parse, "map ends after " + std::to_string(idx) + " of " +
                                           std::to_string(window.size()) + " rows");
      if (row->size() != dd + n)
        fail(ErrorCode::Parse, where() + "expected " + std::to_string(dd + n) + " fields");
      const LatticePoint expected = window.point_at(idx);
      for (std::size_t i = 0; i < dd; ++i)
        if (parse_int((*row)[i]) != expected[i])
          fail(ErrorCode::Parse, where() + "rows must list window points in lexicographic order; expected (" +
                                     expected.to_string() + ")");
      for (std::size_t i = 0; i < n; ++i) values.push_back(parse_int((*row)[dd + i]));
    }
    if (next_line()) fail(ErrorCode::Parse, where() + "trailing data after the last window point");
    return LipschitzMap(std::move(window), static_cast<std::size_t>(h), m * m, std::move(values));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Parse, where() + e.what());
  }
}

LipschitzMap load_map(const std::string& path) { return parse_map(read_file(path, "map file")); }

std::string format_map(const LipschitzMap& map) {
  Rational m;
  if (auto exact = map.lipschitz_constant())
    m = *exact;
  else
    m = sqrt_bracket(map.lipschitz_squared(), 32).hi;
  std::ostringstream out;
  out << map.domain_dim() << ' ' << map.codim() << ' ' << m.get_num().get_str() << ' ' << m.get_den().get_str();
  for (std::size_t i = 0; i < map.domain_dim(); ++i) out << ' ' << map.window().lo(i) << ' ' << map.window().hi(i);
  out << '\n';
  for (std::size_t idx = 0; idx < map.window().size(); ++idx) {
    out << map.window().point_at(idx).to_string();
    for (Int v : map.raw_value(idx)) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

void save_map(const LipschitzMap& map, const std::string& path, std::string_view header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  if (!header.empty()) out << "# " << header << '\n';
  out << format_map(map);
}

// --------------------------------------------------------------- validation

namespace {

Wide raw_distance_sq(std::span<const Int> a, std::span<const Int> b) {
  Wide s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Wide d = static_cast<Wide>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

ValidationReport validate_lipschitz(const LipschitzMap& map, ValidationMode mode) {
  ValidationReport report;
  report.mode = mode;
  const Box& w = map.window();
  const Rational& m2 = map.lipschitz_squared();
  if (mode == ValidationMode::Neighbors) {
    report.certified_global_sq = m2 * static_cast<long>(w.dim());
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      const LatticePoint x = w.point_at(idx);
      std::size_t stride = 1;
      for (std::size_t axis = w.dim(); axis-- > 0;) {
        if (x[axis] < w.hi(axis)) {
          const std::size_t nb = idx + stride;
          ++report.pairs_checked;
          const Wide d2 = raw_distance_sq(map.raw_value(idx), map.raw_value(nb));
          if (to_rational(d2) > m2 && !report.first_violation) {
            report.valid = false;
            report.first_violation = LipschitzViolation{x, w.point_at(nb), d2, m2};
          }
        }
        stride *= static_cast<std::size_t>(w.extent(axis));
      }
      if (report.first_violation) break;
    }
    // The axis loop above visits the last axis first; re-scan the violating
    // point to report its lowest violating axis deterministically.
    if (report.first_violation) {
      const LatticePoint x = report.first_violation->x;
      for (std::size_t axis = 0; axis < w.dim(); ++axis) {
        if (x[axis] >= w.hi(axis)) continue;
        const LatticePoint y = x + LatticePoint::unit(w.dim(), axis);
        const Wide d2 = raw_distance_sq(map.raw_value(w.index_of(x)), map.raw_value(w.index_of(y)));
        if (to_rational(d2) > m2) {
          report.first_violation = LipschitzViolation{x, y, d2, m2};
          break;
        }
      }
    }
    return report;
  }

  report.certified_global_sq = m2;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const LatticePoint x = w.point_at(i);
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      ++report.pairs_checked;
      const LatticePoint y = w.point_at(j);
      const Wide d2 = raw_distance_sq(map.raw_value(i), map.raw_value(j));
      const Rational allowed = m2 * to_rational(distance_squared(x, y));
      if (to_rational(d2) > allowed) {
        report.valid = false;
        report.first_violation = LipschitzViolation{x, y, d2, allowed};
        return report;
      }
    }
  }
  return report;
}

LipschitzMap graph_embed(const ScalarField& g, const Rational& slope_bound) {
  const Box& w = g.window;
  if (g.values.size() != w.size()) fail(ErrorCode::InvalidArgument, "scalar field table does not match its window");
  if (slope_bound < 0) fail(ErrorCode::InvalidArgument, "slope bound must be nonnegative");
  const Rational bound_sq = slope_bound * slope_bound;
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const LatticePoint x = w.point_at(idx);
    for (std::size_t axis = 0; axis < w.dim(); ++axis) {
      if (x[axis] >= w.hi(axis)) continue;
      const LatticePoint y = x + LatticePoint::unit(w.dim(), axis);
      const Int diff = g(y) - g(x);
      if (Rational(static_cast<long>(diff)) * diff > bound_sq)
        fail(ErrorCode::InvalidArgument, "g is not " + format_rational(slope_bound) + "-Lipschitz between (" +
                                             x.to_string() + ") and (" + y.to_string() + ")");
    }
  }
  const std::size_t n = w.dim() + 1;
  std::vector<Int> values;
  values.reserve(w.size() * n);
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const LatticePoint x = w.point_at(idx);
    values.insert(values.end(), x.coords().begin(), x.coords().end());
    values.push_back(g.values[idx]);
  }
  return LipschitzMap(w, 1, 1 + bound_sq, std::move(values));
}

// ------------------------------------------------------------ gap sequences

bool average_gap_within(std::span<const LatticePoint> points, const Rational& bound) {
  if (points.size() < 2) return true;
  std::vector<Rational> squares;
  squares.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    squares.push_back(to_rational(distance_squared(points[i], points[i + 1])));
  const Rational rhs = bound * static_cast<long>(points.size() - 1);
  return compare_sqrt_sum(squares, rhs) <= 0;
}

GapSequence::GapSequence(std::vector<LatticePoint> points, Rational average_bound)
    : points_(std::move(points)), average_bound_(std::move(average_bound)) {
  if (points_.empty()) fail(ErrorCode::InvalidArgument, "empty sequence");
  if (points_.front().dim() < 2) fail(ErrorCode::InvalidArgument, "sequence points must live in Z^n with n >= 2");
  for (const auto& p : points_) require_same_dim(p, points_.front());
  if (average_bound_ < 0) fail(ErrorCode::InvalidArgument, "average gap bound must be nonnegative");
  if (!average_gap_within(points_, average_bound_))
    fail(ErrorCode::InvalidArgument, "average gap exceeds the declared bound " + format_rational(average_bound_));
}

PathLift sequence_to_path(const GapSequence& sequence) {
  const auto pts = sequence.points();
  const std::size_t n = sequence.dim();
  std::vector<Int> positions{1};
  std::vector<Int> values(pts.front().coords().begin(), pts.front().coords().end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::vector<Int> cur(pts[i].coords().begin(), pts[i].coords().end());
    Int steps = 0;
    for (std::size_t axis = 0; axis < n; ++axis) {
      while (cur[axis] != pts[i + 1][axis]) {
        cur[axis] += cur[axis] < pts[i + 1][axis] ? 1 : -1;
        values.insert(values.end(), cur.begin(), cur.end());
        ++steps;
      }
    }
    positions.push_back(positions.back() + steps);
  }
  Box window({1}, {positions.back()});
  std::vector<LatticePoint> a;
  a.reserve(positions.size());
  for (Int p : positions) a.push_back(LatticePoint{p});
  return PathLift{LipschitzMap(std::move(window), n - 1, Rational(1), std::move(values)), PointSet(1, std::move(a)),
                  std::move(positions)};
}

// --------------------------------------------------------------- projection

AffineSubspace ProjectedMap::preimage(const CanonicalLine& line) const {
  const RationalPoint p = line.point_on_line();
  std::vector<Rational> base(p.coords().begin(), p.coords().end());
  base.resize(base.size() + dropped, Rational(0));
  const std::size_t full = line.dim() + dropped;
  AffineSubspace out{RationalPoint(std::move(base)), {}};
  std::vector<Int> dir(line.direction().coords().begin(), line.direction().coords().end());
  dir.resize(full, 0);
  out.spanning.emplace_back(std::move(dir));
  for (std::size_t i = line.dim(); i < full; ++i) out.spanning.push_back(LatticePoint::unit(full, i));
  return out;
}

ProjectedMap project_codim(const LipschitzMap& map) {
  const std::size_t target = map.domain_dim() + 1;
  std::vector<Int> values;
  values.reserve(map.window().size() * target);
  for (std::size_t idx = 0; idx < map.window().size(); ++idx) {
    const auto v = map.raw_value(idx);
    values.insert(values.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(target));
  }
  return ProjectedMap{LipschitzMap(map.window(), 1, map.lipschitz_squared(), std::move(values)), map.codim() - 1};
}

LipschitzMap permute_image(const LipschitzMap& map, std::span<const std::size_t> perm) {
  const std::size_t n = map.image_dim();
  if (perm.size() != n) fail(ErrorCode::DimensionMismatch, "permutation length differs from image dimension");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) fail(ErrorCode::InvalidArgument, "not a permutation");
    seen[p] = true;
  }
  std::vector<Int> values(map.raw_values().size());
  for (std::size_t idx = 0; idx < map.window().size(); ++idx) {
    const auto v = map.raw_value(idx);
    for (std::size_t i = 0; i < n; ++i) values[idx * n + i] = v[perm[i]];
  }
  return LipschitzMap(map.window(), map.codim(), map.lipschitz_squared(), std::move(values));
}

RationalPoint rescale_map(const LipschitzMap& map, Int r, const LatticePoint& base, const RationalPoint& x) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "scale r must be a positive integer");
  const auto m = map.lipschitz_constant();
  if (!m) fail(ErrorCode::InvalidArgument, "rescaling needs a rational Lipschitz constant (M^2 = " +
                                               format_rational(map.lipschitz_squared()) + ")");
  if (x.dim() != map.domain_dim()) fail(ErrorCode::DimensionMismatch, "x has the wrong dimension");
  std::vector<Rational> scaled(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) scaled[i] = x[i] * static_cast<long>(r);
  const LatticePoint arg = RationalPoint(std::move(scaled)).floor() + base;
  const LatticePoint diff = map(arg) - map(base);
  const Rational denom = *m * static_cast<long>(r);
  std::vector<Rational> out(diff.dim());
  for (std::size_t i = 0; i < diff.dim(); ++i) out[i] = Rational(static_cast<long>(diff[i])) / denom;
  return RationalPoint(std::move(out));
}

// ------------------------------------------------------------------ manifest

std::vector<Instance> load_family_manifest(const std::string& path) {
  const std::string text = read_file(path, "family manifest");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::vector<Instance> family;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = tokens_of(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks.size() != 2)
      fail(ErrorCode::Parse, "manifest line " + std::to_string(line_no) + ": expected 'map_file set_file'");
    auto resolve = [&](std::string_view p) {
      std::filesystem::path fp(p);
      return (fp.is_absolute() ? fp : dir / fp).string();
    };
    LipschitzMap map = load_map(resolve(toks[0]));
    PointSet set = load_point_set(resolve(toks[1]));
    family.push_back(Instance{std::move(set), std::move(map)});
  }
  return family;
}

}  // namespace clab

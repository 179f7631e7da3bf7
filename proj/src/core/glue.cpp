#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "collinear_lab/error.hpp"
#include "collinear_lab/maps.hpp"

namespace clab {

namespace {

// One column (fixed x_1) of the glued window.  A column either samples a block
// map at a fixed first coordinate with the cross-section clamped into
// [1, upper], or is constant.
struct Column {
  std::size_t block = 0;
  Int first = 0;             // first coordinate handed to the block map
  std::vector<Int> upper;    // clamp bound per cross-section axis
  bool constant = false;
  LatticePoint value;        // used when constant
};

// Clamp bounds taking a full L-box cross-section down to the single point
// (1, .., 1), one unit per step, axis 2 first.
std::vector<std::vector<Int>> collapse_states(Int side, std::size_t cross_dim) {
  std::vector<std::vector<Int>> states{std::vector<Int>(cross_dim, side)};
  for (std::size_t axis = 0; axis < cross_dim; ++axis) {
    for (Int u = side - 1; u >= 1; --u) {
      auto next = states.back();
      next[axis] = u;
      states.push_back(std::move(next));
    }
  }
  return states;
}

Int l1_norm(const LatticePoint& p) {
  Int s = 0;
  for (Int c : p.coords()) s += c < 0 ? -c : c;
  return s;
}

// True iff no point of `fresh` lies on a line through two distinct points of
// `earlier`.
bool avoids_lines(const std::vector<LatticePoint>& fresh, const std::vector<LatticePoint>& earlier,
                  const std::unordered_set<LatticePoint, LatticePointHash>& earlier_set) {
  for (const auto& p : fresh) {
    if (earlier_set.count(p)) {
      if (earlier.size() >= 2) return false;
      continue;
    }
    std::unordered_set<LatticePoint, LatticePointHash> directions;
    directions.reserve(earlier.size() * 2);
    for (const auto& u : earlier)
      if (!directions.insert(primitive_direction(u - p)).second) return false;
  }
  return true;
}

std::vector<LatticePoint> distinct_block_image(const LipschitzMap& f, const LatticePoint& shift) {
  std::vector<LatticePoint> out;
  out.reserve(f.window().size());
  for (std::size_t idx = 0; idx < f.window().size(); ++idx) out.push_back(f.value_at_index(idx) + shift);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Box GlueResult::block_box(std::size_t block) const {
  const BlockOffset& b = blocks.at(block);
  std::vector<Int> lo(b.domain_shift.dim(), 1), hi(b.domain_shift.dim(), b.side);
  lo[0] = b.domain_shift[0] + 1;
  hi[0] = b.domain_shift[0] + b.side;
  return Box(std::move(lo), std::move(hi));
}

GlueResult glue_instances(const std::vector<Instance>& family) {
  if (family.empty()) fail(ErrorCode::InvalidArgument, "empty instance family");
  const std::size_t d = family.front().map.domain_dim();
  const Rational m2 = family.front().map.lipschitz_squared();
  Int lmax = 0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& inst = family[j];
    const std::string tag = "instance " + std::to_string(j + 1) + ": ";
    if (inst.map.domain_dim() != d) fail(ErrorCode::DimensionMismatch, tag + "domain dimension differs");
    if (inst.map.codim() != 1) fail(ErrorCode::InvalidArgument, tag + "gluing needs maps into Z^{d+1}");
    if (inst.map.lipschitz_squared() != m2) fail(ErrorCode::InvalidArgument, tag + "Lipschitz constant differs");
    const Int side = inst.map.window().extent(0);
    if (!(inst.map.window() == Box::cube(d, 1, side)))
      fail(ErrorCode::InvalidArgument, tag + "window must be [1, L]^d");
    if (!inst.set.empty() && inst.set.dim() != d) fail(ErrorCode::DimensionMismatch, tag + "set dimension differs");
    for (const auto& a : inst.set)
      if (!inst.map.window().contains(a)) fail(ErrorCode::OutOfWindow, tag + "set point outside [1, L]^d");
    lmax = std::max(lmax, side);
  }
  if (family.size() > 1 && m2 < 1)
    fail(ErrorCode::InvalidArgument, "gap filling needs M >= 1 to take unit steps");

  // Image offsets: block 1 stays put, later blocks move along the moment
  // curve until their image avoids every line through two earlier points.
  std::vector<LatticePoint> offsets{LatticePoint::zero(d + 1)};
  std::vector<LatticePoint> earlier = distinct_block_image(family.front().map, offsets.front());
  std::unordered_set<LatticePoint, LatticePointHash> earlier_set(earlier.begin(), earlier.end());
  for (std::size_t j = 1; j < family.size(); ++j) {
    const LipschitzMap& f = family[j].map;
    for (Int t = 0;; ++t) {
      std::vector<Int> c(d + 1);
      Wide power = 1;
      for (std::size_t i = 0; i <= d; ++i) {
        power *= t;
        if (power > kCoordinateLimit / 4) fail(ErrorCode::Internal, "image offset search ran out of range");
        c[i] = static_cast<Int>(power);
      }
      LatticePoint shift(std::move(c));
      auto fresh = distinct_block_image(f, shift);
      if (avoids_lines(fresh, earlier, earlier_set)) {
        offsets.push_back(shift);
        for (auto& p : fresh)
          if (earlier_set.insert(p).second) earlier.push_back(std::move(p));
        break;
      }
    }
  }

  // Column layout along the first axis.
  const std::size_t cross = d - 1;
  std::vector<Column> columns;
  std::vector<BlockOffset> blocks;
  auto block_columns = [&](std::size_t j) {
    const Int side = family[j].map.window().extent(0);
    blocks.push_back(BlockOffset{side, offsets[j], LatticePoint::unit(d, 0).scaled(static_cast<Int>(columns.size()))});
    for (Int c = 1; c <= side; ++c) columns.push_back(Column{j, c, std::vector<Int>(cross, side), false, {}});
  };
  block_columns(0);
  for (std::size_t j = 0; j + 1 < family.size(); ++j) {
    const Int side_a = family[j].map.window().extent(0);
    const Int side_b = family[j + 1].map.window().extent(0);
    std::vector<Int> last_col(d, 1), first_col(d, 1);
    last_col[0] = side_a;
    const LatticePoint p0 = family[j].map(LatticePoint(last_col)) + offsets[j];
    const LatticePoint p_end = family[j + 1].map(LatticePoint(first_col)) + offsets[j + 1];

    std::vector<Column> seq;
    const auto states_a = collapse_states(side_a, cross);
    for (std::size_t s = 1; s < states_a.size(); ++s) seq.push_back(Column{j, side_a, states_a[s], false, {}});
    std::vector<Column> walk;
    std::vector<Int> cur(p0.coords().begin(), p0.coords().end());
    for (std::size_t axis = 0; axis <= d; ++axis) {
      while (cur[axis] != p_end[axis]) {
        cur[axis] += cur[axis] < p_end[axis] ? 1 : -1;
        walk.push_back(Column{0, 0, {}, true, LatticePoint(cur)});
      }
    }
    if (!walk.empty()) walk.pop_back();  // p_end itself is the first expand state
    auto states_b = collapse_states(side_b, cross);
    std::reverse(states_b.begin(), states_b.end());
    std::vector<Column> expand;
    for (std::size_t s = 0; s + 1 < states_b.size(); ++s) expand.push_back(Column{j + 1, 1, states_b[s], false, {}});

    // Distance in x_1 between the last column of block j and the first of block j+1.
    const Int unpadded = static_cast<Int>(seq.size() + walk.size() + expand.size()) + 1;
    const Int pads = std::max<Int>(0, l1_norm(offsets[j + 1]) - unpadded);
    for (const auto& c : seq) columns.push_back(c);
    for (Int i = 0; i < pads; ++i) columns.push_back(Column{0, 0, {}, true, p0});
    for (const auto& c : walk) columns.push_back(c);
    for (const auto& c : expand) columns.push_back(c);
    block_columns(j + 1);
  }

  std::vector<Int> lo(d, 1), hi(d, lmax);
  hi[0] = static_cast<Int>(columns.size());
  Box window(lo, hi);
  std::size_t cross_count = 1;
  for (std::size_t i = 0; i < cross; ++i) cross_count *= static_cast<std::size_t>(lmax);

  std::vector<Int> values;
  values.reserve(window.size() * (d + 1));
  std::vector<Int> arg(d);
  for (const auto& col : columns) {
    for (std::size_t ci = 0; ci < cross_count; ++ci) {
      if (col.constant) {
        values.insert(values.end(), col.value.coords().begin(), col.value.coords().end());
        continue;
      }
      std::size_t rest = ci;
      for (std::size_t i = cross; i-- > 0;) {
        const Int y = 1 + static_cast<Int>(rest % static_cast<std::size_t>(lmax));
        rest /= static_cast<std::size_t>(lmax);
        arg[i + 1] = std::clamp<Int>(y, 1, col.upper[i]);
      }
      arg[0] = col.first;
      const LatticePoint v = family[col.block].map(LatticePoint(arg)) + offsets[col.block];
      values.insert(values.end(), v.coords().begin(), v.coords().end());
    }
  }

  std::vector<LatticePoint> set_points;
  for (std::size_t j = 0; j < family.size(); ++j)
    for (const auto& a : family[j].set) set_points.push_back(a + blocks[j].domain_shift);

  return GlueResult{PointSet(d, std::move(set_points)), LipschitzMap(std::move(window), 1, m2, std::move(values)),
                    std::move(blocks)};
}

GlueAudit audit_glue(const GlueResult& glued) {
  GlueAudit audit;
  // Distinct image points of the block regions, each tagged with the first
  // block that produces it.
  std::map<LatticePoint, std::size_t> owner;
  for (std::size_t j = 0; j < glued.blocks.size(); ++j) {
    const Box box = glued.block_box(j);
    for (std::size_t idx = 0; idx < box.size(); ++idx) owner.emplace(glued.map(box.point_at(idx)), j);
  }
  std::vector<std::pair<LatticePoint, std::size_t>> pts(owner.begin(), owner.end());
  audit.image_points = pts.size();

  std::unordered_map<CanonicalLine, std::vector<std::size_t>, CanonicalLineHash> lines;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      auto& members = lines[canonical_line(pts[i].first, pts[k].first)];
      members.push_back(i);
      members.push_back(k);
    }
  }
  for (auto& [line, members] : lines) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  audit.lines_checked = lines.size();

  std::vector<const CanonicalLine*> order;
  order.reserve(lines.size());
  for (const auto& [line, members] : lines) order.push_back(&line);
  std::sort(order.begin(), order.end(), [](const CanonicalLine* a, const CanonicalLine* b) { return *a < *b; });
  for (const CanonicalLine* line : order) {
    const auto& members = lines.at(*line);
    std::size_t latest = 0;
    for (auto i : members) latest = std::max(latest, pts[i].second);
    std::size_t before = 0;
    for (auto i : members) before += pts[i].second < latest ? 1 : 0;
    if (before > 1) {
      audit.ok = false;
      audit.violation = "line " + line->to_string() + " holds " + std::to_string(before) +
                        " points of blocks before block " + std::to_string(latest + 1);
      break;
    }
  }
  return audit;
}

}  // namespace clab

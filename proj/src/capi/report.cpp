#include "report.hpp"

#include <sstream>

namespace clab::report {

namespace {

std::string join(std::span<const Int> v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string interval_text(const Interval& i) {
  if (i.exact()) return format_fraction(i.lo);
  return "[" + format_fraction(i.lo) + ", " + format_fraction(i.hi) + "]";
}

std::string pass(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string yes(bool ok) { return ok ? "yes" : "no"; }

}  // namespace

const std::string* Report::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

void Report::fields_to_tsv() {
  tsv.clear();
  for (const auto& [k, v] : fields) tsv += k + "\t" + v + "\n";
}

Report validation(const ValidationReport& v) {
  Report r;
  r.found = v.valid;
  r.field("mode", v.mode == ValidationMode::Neighbors ? "neighbors" : "all-pairs");
  r.field("valid", yes(v.valid));
  r.field("pairs_checked", std::to_string(v.pairs_checked));
  r.field("certified_sq", format_rational(v.certified_global_sq));
  if (v.first_violation) {
    const auto& x = *v.first_violation;
    r.field("violation", "(" + x.x.to_string() + ") (" + x.y.to_string() + ") " + to_string(x.image_distance_sq) +
                             " > " + format_rational(x.allowed_sq));
  }
  std::ostringstream out;
  for (const auto& [k, val] : r.fields) out << k << ' ' << val << '\n';
  r.text = out.str();
  r.fields_to_tsv();
  return r;
}

Report collinear(const CollinearResult& c, const std::string& engine) {
  Report r;
  r.found = c.count > 0;
  r.field("engine", engine);
  r.field("count", std::to_string(c.count));
  r.field("line", c.line ? c.line->to_string() : "none");
  std::ostringstream out;
  out << "k " << c.count << '\n';
  for (const auto& p : c.points) out << p.to_string() << '\n';
  out << "line " << r.fields.back().second << '\n';
  r.text = out.str();
  r.fields_to_tsv();
  for (const auto& p : c.points) r.tsv += "point\t" + p.to_string() + "\n";
  return r;
}

Report find_k(const KCollinearResult& c, const LipschitzMap& f, std::size_t k) {
  Report r;
  r.found = c.found;
  r.field("k", std::to_string(k));
  r.field("max_count", std::to_string(c.max_count));
  r.field("found", yes(c.found));
  r.field("domain_count", std::to_string(c.domain_count));
  r.field("line", c.line ? c.line->to_string() : "none");
  std::ostringstream out;
  out << "k " << c.max_count << '\n';
  if (c.found) {
    for (const auto& x : c.domain) out << x.to_string() << " -> " << f(x).to_string() << '\n';
    out << "line " << r.get("line")->c_str() << '\n';
  } else {
    out << "no " << k << " points of A have collinear images\n";
  }
  r.text = out.str();
  r.fields_to_tsv();
  for (const auto& x : c.domain) r.tsv += "point\t" + x.to_string() + "\t" + f(x).to_string() + "\n";
  return r;
}

Report density(const std::vector<DensityReport>& rows) {
  Report r;
  r.found = true;
  std::ostringstream text, tsv;
  text << "L\tsup_density\n";
  tsv << "L\tsup_density\tcount\tcorner\n";
  for (const auto& row : rows) {
    text << row.side << '\t' << format_rational(row.value) << '\n';
    tsv << row.side << '\t' << format_rational(row.value) << '\t' << row.count << '\t'
        << join(row.best_corner.coords(), ',') << '\n';
    r.field("L" + std::to_string(row.side), format_rational(row.value));
  }
  r.text = text.str();
  r.tsv = tsv.str();
  return r;
}

Report conditions(const GeneralizedSegment& seg, const WitnessParams& params, const ConditionReport& c) {
  Report r;
  r.found = c.all_pass();
  r.field("segment", seg.to_string());
  r.field("m_sq", to_string(seg.m_ell_squared()));
  r.field("epsilon", format_rational(params.epsilon));
  r.field("delta", format_rational(params.delta));
  r.field("w", params.w.to_string());
  r.field("slope", c.slope.to_string());
  r.field("z-i", pass(c.z_i.pass));
  r.field("z-i_margin", interval_text(c.z_i.margin));
  r.field("z-ii", pass(c.z_ii.pass));
  r.field("z-ii_margin_sq", format_fraction(c.z_ii.margin_sq()));
  r.field("z-ii_worst_t", format_fraction(c.z_ii.worst_t));
  r.field("z-iii", pass(c.z_iii.pass));
  r.field("z-iii_ratio", format_fraction(c.z_iii.ratio));
  r.field("z-iii_hits", std::to_string(c.z_iii.hits));
  r.field("cylinder_size", std::to_string(c.z_iii.size));
  r.field("all", pass(c.all_pass()));
  std::ostringstream out;
  out << "segment " << seg.to_string() << " m^2=" << to_string(seg.m_ell_squared()) << '\n';
  out << "z-i " << pass(c.z_i.pass) << ' ' << interval_text(c.z_i.margin) << '\n';
  out << "z-ii " << pass(c.z_ii.pass) << ' ' << format_fraction(c.z_ii.margin_sq())
      << " worst_t=" << format_fraction(c.z_ii.worst_t) << '\n';
  out << "z-iii " << pass(c.z_iii.pass) << ' ' << format_fraction(c.z_iii.ratio) << " (" << c.z_iii.hits << '/'
      << c.z_iii.size << ")\n";
  r.text = out.str();
  r.fields_to_tsv();
  return r;
}

Report scan(const ScanOutcome& outcome, const Rational& epsilon, const Rational& delta) {
  Report r;
  r.found = outcome.witness.has_value();
  r.field("directions_tried", std::to_string(outcome.directions_tried));
  r.field("candidates", std::to_string(outcome.candidates));
  r.field("slope_pass", std::to_string(outcome.slope_pass));
  r.field("line_pass", std::to_string(outcome.line_pass));
  std::ostringstream out;
  out << "scanned " << outcome.candidates << " segments over " << outcome.directions_tried << " directions ("
      << outcome.slope_pass << " passed z-i, " << outcome.line_pass << " passed z-ii)\n";
  if (outcome.witness) {
    const Witness& w = *outcome.witness;
    r.field("w", w.w.to_string());
    const Report c = conditions(w.segment, WitnessParams{epsilon, delta, w.w}, w.report);
    for (const auto& f : c.fields) r.fields.push_back(f);
    out << "witness w=(" << w.w.to_string() << ")\n" << c.text;
  } else {
    out << "witness: none within budget\n";
  }
  r.text = out.str();
  r.fields_to_tsv();
  return r;
}

Report dirichlet(const DirichletCertificate& cert) {
  Report r;
  r.found = true;
  r.field("b", std::to_string(cert.b));
  r.field("a", join(cert.a, ','));
  r.field("err", format_fraction(cert.max_error()));
  r.field("bound", format_fraction(cert.bound()));
  r.text = "b=" + *r.get("b") + " a=" + *r.get("a") + " err=" + *r.get("err") + " bound=" + *r.get("bound") + "\n";
  r.fields_to_tsv();
  return r;
}

Report pipeline(const PipelineReport& p, std::size_t k, Int n) {
  Report r;
  r.found = p.stage == PipelineStage::Done && p.verified;
  r.field("k", std::to_string(k));
  r.field("N", std::to_string(n));
  r.field("stage", stage_name(p.stage));
  r.field("verified", yes(p.verified));
  r.field("reason", p.reason);
  r.field("directions_tried", std::to_string(p.directions_tried));
  r.field("candidates", std::to_string(p.candidates));
  std::ostringstream out;
  if (p.w) {
    std::vector<Int> perm(p.permutation.begin(), p.permutation.end());
    r.field("w", p.w->to_string());
    r.field("permutation", join(perm, ','));
    out << "direction w=(" << p.w->to_string() << ") permutation=" << join(perm, ',') << '\n';
  }
  if (p.dirichlet) {
    r.field("b", std::to_string(p.dirichlet->b));
    r.field("a", join(p.dirichlet->a, ','));
    r.field("epsilon", format_fraction(p.epsilon));
    out << "dirichlet b=" << p.dirichlet->b << " a=" << join(p.dirichlet->a, ',')
        << " epsilon=" << format_fraction(p.epsilon) << '\n';
  }
  if (p.segment) {
    r.field("segment", p.segment->to_string());
    r.field("cylinder_size", std::to_string(p.cylinder_size));
    out << "witness: " << p.segment->to_string() << " m^2=" << to_string(p.segment->m_ell_squared())
        << " |K|=" << p.cylinder_size << '\n';
    if (p.conditions) {
      out << "  z-i " << pass(p.conditions->z_i.pass) << ' ' << interval_text(p.conditions->z_i.margin) << '\n';
      out << "  z-ii " << pass(p.conditions->z_ii.pass) << ' ' << format_fraction(p.conditions->z_ii.margin_sq())
          << '\n';
      out << "  z-iii " << pass(p.conditions->z_iii.pass) << ' ' << format_fraction(p.conditions->z_iii.ratio)
          << '\n';
    }
  } else {
    out << "witness: " << p.reason << '\n';
  }
  if (p.stage != PipelineStage::Witness) {
    r.field("hits", std::to_string(p.extraction.hits));
    r.field("family_size", std::to_string(p.family_size));
    out << "family: |A cap K|=" << p.extraction.hits << " |E|=" << p.family_size << '\n';
    if (p.stage == PipelineStage::Family) out << "family: " << p.reason << '\n';
  }
  if (p.stage == PipelineStage::Extract || p.stage == PipelineStage::Done) {
    std::string hist;
    for (const auto& [size, lines] : p.extraction.histogram) {
      if (!hist.empty()) hist += ' ';
      hist += std::to_string(size) + "x" + std::to_string(lines);
    }
    r.field("histogram", hist);
    r.field("best_bucket", std::to_string(p.extraction.best_bucket));
    out << "buckets: " << hist << '\n';
    if (p.stage == PipelineStage::Extract) out << "extract: " << p.reason << '\n';
  }
  if (p.stage == PipelineStage::Done) {
    r.field("line", p.line ? p.line->to_string() : "none");
    out << "X:\n";
    for (const auto& x : p.extraction.domain) out << "  " << x.to_string() << '\n';
    out << "line " << *r.get("line") << '\n';
    out << "verified " << yes(p.verified) << '\n';
  }
  r.text = out.str();
  r.fields_to_tsv();
  for (const auto& x : p.extraction.domain)
    if (p.stage == PipelineStage::Done) r.tsv += "point\t" + x.to_string() + "\n";
  return r;
}

Report estimate(const EstimateResult& e, std::size_t d, std::size_t k, const Rational& delta, const Rational& m) {
  Report r;
  r.found = e.witness.has_value();
  r.field("d", std::to_string(d));
  r.field("k", std::to_string(k));
  r.field("delta", format_rational(delta));
  r.field("M", format_rational(m));
  r.field("L_lower", std::to_string(e.l_lower));
  r.field("exact", yes(e.exact));
  r.field("method", e.witness ? e.witness->method : "none");
  if (e.witness) r.field("witness_size", std::to_string(e.witness->set.size()));
  std::ostringstream out;
  out << "L_lower " << e.l_lower << (e.exact ? " (exact: next side exhausted)" : "") << '\n';
  out << "L\trequired\tfound\tmethod\tevaluations\n";
  std::ostringstream tsv;
  tsv << "L\trequired\tfound\tmethod\tevaluations\n";
  for (const auto& level : e.levels) {
    const std::string row = std::to_string(level.side) + "\t" + std::to_string(level.required) + "\t" +
                            yes(level.found) + "\t" + level.method + "\t" + std::to_string(level.evaluations) + "\n";
    out << row;
    tsv << row;
  }
  if (e.witness) {
    out << "witness A:";
    for (const auto& x : e.witness->set) out << " (" << x.to_string() << ")";
    out << "\nwitness f:";
    const LipschitzMap& f = e.witness->map;
    for (std::size_t i = 0; i < f.window().size(); ++i) out << " (" << f.value_at_index(i).to_string() << ")";
    out << '\n';
  }
  r.text = out.str();
  r.tsv = tsv.str();
  return r;
}

Report glue(const GlueResult& g, const GlueAudit& audit) {
  Report r;
  r.found = audit.ok;
  r.field("blocks", std::to_string(g.blocks.size()));
  r.field("window", g.map.window().to_string());
  r.field("set_size", std::to_string(g.set.size()));
  r.field("lines_checked", std::to_string(audit.lines_checked));
  r.field("image_points", std::to_string(audit.image_points));
  r.field("audit", audit.ok ? "ok" : "violation");
  if (!audit.ok) r.field("violation", audit.violation);
  std::ostringstream out;
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const auto& b = g.blocks[i];
    out << "block " << i << " L=" << b.side << " domain_shift=(" << b.domain_shift.to_string() << ") image_shift=("
        << b.image_shift.to_string() << ")\n";
  }
  out << "window " << g.map.window().to_string() << " |A|=" << g.set.size() << '\n';
  out << "audit " << (audit.ok ? "ok" : "violation") << " lines=" << audit.lines_checked
      << " points=" << audit.image_points << '\n';
  if (!audit.ok) out << "violation " << audit.violation << '\n';
  r.text = out.str();
  r.fields_to_tsv();
  return r;
}

}  // namespace clab::report

#pragma once

// Stable text and TSV renderings of core results, shared by the C layer.

#include <string>
#include <utility>
#include <vector>

#include "collinear_lab/covering.hpp"
#include "collinear_lab/density.hpp"
#include "collinear_lab/estimator.hpp"

namespace clab::report {

struct Report {
  bool found = false;
  std::string text;
  std::string tsv;  // "key\tvalue" per field unless a table is more natural
  std::vector<std::pair<std::string, std::string>> fields;

  void field(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  const std::string* get(const std::string& key) const;
  void fields_to_tsv();
};

Report validation(const ValidationReport& v);
Report collinear(const CollinearResult& r, const std::string& engine);
Report find_k(const KCollinearResult& r, const LipschitzMap& f, std::size_t k);
Report density(const std::vector<DensityReport>& rows);
Report conditions(const GeneralizedSegment& seg, const WitnessParams& params, const ConditionReport& c);
Report scan(const ScanOutcome& outcome, const Rational& epsilon, const Rational& delta);
Report dirichlet(const DirichletCertificate& cert);
Report pipeline(const PipelineReport& r, std::size_t k, Int n);
Report estimate(const EstimateResult& r, std::size_t d, std::size_t k, const Rational& delta, const Rational& m);
Report glue(const GlueResult& g, const GlueAudit& audit);

}  // namespace clab::report

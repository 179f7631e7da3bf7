#include "collinear_lab.h"

#include <filesystem>
#include <new>
#include <string>

#include "collinear_lab/covering.hpp"
#include "collinear_lab/density.hpp"
#include "collinear_lab/error.hpp"
#include "collinear_lab/estimator.hpp"
#include "collinear_lab/generators.hpp"
#include "report.hpp"

struct clab_pointset {
  clab::PointSet set;
};

struct clab_map {
  clab::LipschitzMap map;
};

struct clab_result {
  clab::report::Report report;
};

namespace {

thread_local std::string last_error;

clab_status status_of(clab::ErrorCode code) {
  using clab::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return CLAB_ERR_PARSE;
    case ErrorCode::DimensionMismatch: return CLAB_ERR_DIMENSION;
    case ErrorCode::DegenerateLine: return CLAB_ERR_DEGENERATE_LINE;
    case ErrorCode::DegenerateSlope: return CLAB_ERR_DEGENERATE_SLOPE;
    case ErrorCode::OutOfWindow: return CLAB_ERR_OUT_OF_WINDOW;
    case ErrorCode::ThinCylinder: return CLAB_ERR_THIN_CYLINDER;
    case ErrorCode::NonTransverse: return CLAB_ERR_NON_TRANSVERSE;
    case ErrorCode::Infeasible: return CLAB_ERR_INFEASIBLE;
    case ErrorCode::Internal: return CLAB_ERR_INTERNAL;
  }
  return CLAB_ERR_INTERNAL;
}

clab_status set_error(clab_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Fn>
clab_status guarded(Fn&& body) {
  try {
    last_error.clear();
    body();
    return CLAB_OK;
  } catch (const clab::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(CLAB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CLAB_ERR_INTERNAL, e.what());
  }
}

clab_status null_argument(const char* name) {
  return set_error(CLAB_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

#define CLAB_REQUIRE(ptr) \
  if (!(ptr)) return null_argument(#ptr)

clab_status emit(clab::report::Report&& r, clab_result** out) {
  *out = new clab_result{std::move(r)};
  return CLAB_OK;
}

clab::Rational rational_arg(const char* text, const char* what) {
  if (!text) clab::fail(clab::ErrorCode::InvalidArgument, std::string(what) + " is required");
  return clab::parse_rational(text);
}

clab::PointSet set_of(const clab_pointset* s, std::size_t dim) {
  return s ? s->set : clab::PointSet(dim);
}

}  // namespace

extern "C" {

const char* clab_status_name(clab_status status) {
  switch (status) {
    case CLAB_OK: return "ok";
    case CLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CLAB_ERR_PARSE: return "parse";
    case CLAB_ERR_DIMENSION: return "dimension-mismatch";
    case CLAB_ERR_DEGENERATE_LINE: return "degenerate-line";
    case CLAB_ERR_DEGENERATE_SLOPE: return "degenerate-slope";
    case CLAB_ERR_OUT_OF_WINDOW: return "out-of-window";
    case CLAB_ERR_THIN_CYLINDER: return "thin-cylinder";
    case CLAB_ERR_NON_TRANSVERSE: return "non-transverse";
    case CLAB_ERR_INFEASIBLE: return "infeasible";
    case CLAB_ERR_IO: return "io";
    case CLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* clab_last_error(void) { return last_error.c_str(); }

// ---------------------------------------------------------------- point sets

clab_status clab_pointset_load(const char* path, clab_pointset** out) {
  CLAB_REQUIRE(path);
  CLAB_REQUIRE(out);
  return guarded([&] {
    if (!std::filesystem::is_regular_file(path))
      throw std::filesystem::filesystem_error("cannot read point set", path, std::make_error_code(std::errc::no_such_file_or_directory));
    *out = new clab_pointset{clab::load_point_set(path)};
  });
}

clab_status clab_pointset_parse(const char* text, clab_pointset** out) {
  CLAB_REQUIRE(text);
  CLAB_REQUIRE(out);
  return guarded([&] { *out = new clab_pointset{clab::parse_point_set(text)}; });
}

clab_status clab_pointset_from_coords(size_t dim, size_t count, const int64_t* coords, clab_pointset** out) {
  CLAB_REQUIRE(out);
  if (count > 0 && !coords) return null_argument("coords");
  return guarded([&] {
    if (dim == 0) clab::fail(clab::ErrorCode::InvalidArgument, "dimension must be positive");
    std::vector<clab::LatticePoint> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      pts.emplace_back(std::vector<clab::Int>(coords + i * dim, coords + (i + 1) * dim));
    *out = new clab_pointset{clab::PointSet(dim, std::move(pts))};
  });
}

size_t clab_pointset_size(const clab_pointset* set) { return set ? set->set.size() : 0; }

size_t clab_pointset_dim(const clab_pointset* set) { return set ? set->set.dim() : 0; }

clab_status clab_pointset_get(const clab_pointset* set, size_t index, int64_t* coords) {
  CLAB_REQUIRE(set);
  CLAB_REQUIRE(coords);
  if (index >= set->set.size()) return set_error(CLAB_ERR_INVALID_ARGUMENT, "point index out of range");
  const auto c = set->set[index].coords();
  std::copy(c.begin(), c.end(), coords);
  return CLAB_OK;
}

clab_status clab_pointset_save(const clab_pointset* set, const char* path) {
  CLAB_REQUIRE(set);
  CLAB_REQUIRE(path);
  return guarded([&] { clab::save_point_set(set->set, path); });
}

void clab_pointset_free(clab_pointset* set) { delete set; }

// ---------------------------------------------------------------- maps

clab_status clab_map_load(const char* path, clab_map** out) {
  CLAB_REQUIRE(path);
  CLAB_REQUIRE(out);
  return guarded([&] {
    if (!std::filesystem::is_regular_file(path))
      throw std::filesystem::filesystem_error("cannot read map", path, std::make_error_code(std::errc::no_such_file_or_directory));
    *out = new clab_map{clab::load_map(path)};
  });
}

clab_status clab_map_parse(const char* text, clab_map** out) {
  CLAB_REQUIRE(text);
  CLAB_REQUIRE(out);
  return guarded([&] { *out = new clab_map{clab::parse_map(text)}; });
}

clab_status clab_map_save(const clab_map* map, const char* path) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(path);
  return guarded([&] { clab::save_map(map->map, path); });
}

size_t clab_map_domain_dim(const clab_map* map) { return map ? map->map.domain_dim() : 0; }

size_t clab_map_image_dim(const clab_map* map) { return map ? map->map.image_dim() : 0; }

clab_status clab_map_eval(const clab_map* map, const int64_t* x, int64_t* y) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(x);
  CLAB_REQUIRE(y);
  return guarded([&] {
    const clab::LatticePoint p(std::vector<clab::Int>(x, x + map->map.domain_dim()));
    const clab::LatticePoint image = map->map(p);
    std::copy(image.coords().begin(), image.coords().end(), y);
  });
}

void clab_map_free(clab_map* map) { delete map; }

// ---------------------------------------------------------------- generators

clab_status clab_generate_map(const char* kind, size_t d, size_t codim, int64_t slope, const char* window,
                              uint64_t seed, clab_map** out) {
  CLAB_REQUIRE(kind);
  CLAB_REQUIRE(window);
  CLAB_REQUIRE(out);
  return guarded([&] {
    clab::Rng rng(clab::derive_seed(seed, 0x6d6170));
    *out = new clab_map{clab::generate_map(kind, clab::parse_box(window, d), codim, slope, rng)};
  });
}

clab_status clab_generate_set(const char* kind, size_t d, const char* window, const char* param, uint64_t seed,
                              clab_pointset** out) {
  CLAB_REQUIRE(kind);
  CLAB_REQUIRE(window);
  CLAB_REQUIRE(out);
  return guarded([&] {
    clab::Rng rng(clab::derive_seed(seed, 0x736574));
    const std::string k = kind;
    clab::Int stride = 2;
    clab::Rational p(1, 2);
    if (param && k == "coset") stride = clab::parse_int(param);
    if (param && k == "bernoulli") p = clab::parse_rational(param);
    *out = new clab_pointset{clab::generate_set(k, clab::parse_box(window, d), stride, p, rng)};
  });
}

clab_status clab_generate_walk(size_t length, const char* max_gap, uint64_t seed, int64_t* coords) {
  CLAB_REQUIRE(max_gap);
  if (length > 0 && !coords) return null_argument("coords");
  return guarded([&] {
    clab::Rng rng(clab::derive_seed(seed, 0x77616c6b));
    const clab::GapSequence seq = clab::random_gap_sequence(length, clab::parse_rational(max_gap), rng);
    for (std::size_t i = 0; i < seq.points().size(); ++i) {
      coords[2 * i] = seq.points()[i][0];
      coords[2 * i + 1] = seq.points()[i][1];
    }
  });
}

clab_status clab_sequence_to_path(size_t dim, size_t count, const int64_t* coords, const char* avg_bound,
                                  clab_map** map, clab_pointset** set) {
  CLAB_REQUIRE(avg_bound);
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(set);
  if (count > 0 && !coords) return null_argument("coords");
  return guarded([&] {
    std::vector<clab::LatticePoint> pts;
    for (std::size_t i = 0; i < count; ++i)
      pts.emplace_back(std::vector<clab::Int>(coords + i * dim, coords + (i + 1) * dim));
    const clab::PathLift lift = clab::sequence_to_path(clab::GapSequence(std::move(pts), clab::parse_rational(avg_bound)));
    *map = new clab_map{lift.map};
    *set = new clab_pointset{lift.set};
  });
}

// ---------------------------------------------------------------- results

const char* clab_result_text(const clab_result* result) { return result ? result->report.text.c_str() : ""; }

const char* clab_result_tsv(const clab_result* result) { return result ? result->report.tsv.c_str() : ""; }

int clab_result_found(const clab_result* result) { return result && result->report.found ? 1 : 0; }

const char* clab_result_get(const clab_result* result, const char* key) {
  if (!result || !key) return nullptr;
  const std::string* v = result->report.get(key);
  return v ? v->c_str() : nullptr;
}

void clab_result_free(clab_result* result) { delete result; }

// ---------------------------------------------------------------- operations

clab_status clab_validate(const clab_map* map, const char* mode, clab_result** out) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const std::string m = mode ? mode : "neighbors";
    clab::ValidationMode vm;
    if (m == "neighbors") vm = clab::ValidationMode::Neighbors;
    else if (m == "all-pairs") vm = clab::ValidationMode::AllPairs;
    else clab::fail(clab::ErrorCode::InvalidArgument, "unknown validation mode '" + m + "'");
    emit(clab::report::validation(clab::validate_lipschitz(map->map, vm)), out);
  });
}

clab_status clab_collinear(const clab_pointset* points, const char* engine, unsigned threads, clab_result** out) {
  CLAB_REQUIRE(points);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const std::string e = engine ? engine : "hash";
    const auto pts = points->set.points();
    if (e == "naive") emit(clab::report::collinear(clab::max_collinear_naive(pts), e), out);
    else if (e == "hash") emit(clab::report::collinear(clab::max_collinear_hash(pts, threads), e), out);
    else clab::fail(clab::ErrorCode::InvalidArgument, "unknown engine '" + e + "' (naive or hash)");
  });
}

clab_status clab_find_k(const clab_map* map, const clab_pointset* set, size_t k, unsigned threads, clab_result** out) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const clab::PointSet a = set_of(set, map->map.domain_dim());
    emit(clab::report::find_k(clab::find_k_collinear(map->map, a, k, threads), map->map, k), out);
  });
}

clab_status clab_density(const clab_pointset* set, const int64_t* sides, size_t count, clab_result** out) {
  CLAB_REQUIRE(set);
  CLAB_REQUIRE(out);
  if (count > 0 && !sides) return null_argument("sides");
  return guarded([&] {
    const std::vector<clab::Int> s(sides, sides + count);
    emit(clab::report::density(clab::banach_density_estimate(set->set, s)), out);
  });
}

clab_status clab_cylinder_check(const clab_map* map, const clab_pointset* set, const char* start, const char* end,
                                const char* epsilon, const char* delta, const char* w, clab_result** out) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(start);
  CLAB_REQUIRE(end);
  CLAB_REQUIRE(w);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const clab::GeneralizedSegment seg(clab::parse_rational_point(start), clab::parse_rational_point(end));
    const clab::WitnessParams params{rational_arg(epsilon, "epsilon"), rational_arg(delta, "delta"),
                                     clab::parse_rational_point(w)};
    const clab::PointSet a = set_of(set, map->map.domain_dim());
    emit(clab::report::conditions(seg, params, clab::check_conditions(map->map, a, seg, params)), out);
  });
}

clab_status clab_cylinder_scan(const clab_map* map, const clab_pointset* set, const char* epsilon, const char* delta,
                               const char* w, size_t budget, uint64_t seed, unsigned threads, clab_result** out) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const clab::Rational eps = rational_arg(epsilon, "epsilon"), del = rational_arg(delta, "delta");
    std::vector<clab::RationalPoint> dirs;
    if (w) dirs.push_back(clab::parse_rational_point(w));
    else dirs = clab::sign_pattern_directions(map->map.image_dim());
    const clab::PointSet a = set_of(set, map->map.domain_dim());
    const clab::ScanOutcome outcome = clab::scan_for_witness(map->map, a, eps, del, dirs, {budget, seed, threads});
    emit(clab::report::scan(outcome, eps, del), out);
  });
}

clab_status clab_dirichlet(const char* u, int64_t n, clab_result** out) {
  CLAB_REQUIRE(u);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const clab::RationalPoint v = clab::parse_rational_point(u);
    emit(clab::report::dirichlet(clab::dirichlet_approx(v.coords(), n)), out);
  });
}

clab_status clab_cover(const clab_map* map, const clab_pointset* set, size_t k, int64_t n, const char* delta,
                       size_t budget, uint64_t seed, unsigned threads, clab_result** out) {
  CLAB_REQUIRE(map);
  CLAB_REQUIRE(out);
  return guarded([&] {
    clab::PipelineOptions options;
    if (delta) options.delta = clab::parse_rational(delta);
    options.scan = {budget, seed, threads};
    const clab::PointSet a = set_of(set, map->map.domain_dim());
    emit(clab::report::pipeline(clab::full_pipeline(map->map, a, k, n, options), k, n), out);
  });
}

void clab_estimate_options_init(clab_estimate_options* options) {
  if (!options) return;
  const clab::EstimateOptions defaults;
  options->budget = defaults.budget;
  options->restarts = defaults.restarts;
  options->seed = defaults.seed;
  options->threads = defaults.threads;
  options->max_side = defaults.max_side;
  options->archive_dir = nullptr;
  options->save_stem = nullptr;
}

clab_status clab_estimate_l(size_t d, size_t k, const char* delta, const char* m, const clab_estimate_options* options,
                            clab_result** out) {
  CLAB_REQUIRE(out);
  return guarded([&] {
    clab_estimate_options o;
    clab_estimate_options_init(&o);
    if (options) o = *options;
    clab::EstimateOptions eo;
    eo.budget = o.budget;
    eo.restarts = o.restarts;
    eo.seed = o.seed;
    eo.threads = o.threads;
    eo.max_side = o.max_side;
    if (o.archive_dir && std::filesystem::is_directory(o.archive_dir))
      eo.prior = clab::load_witness_archive(o.archive_dir);
    const clab::Rational del = rational_arg(delta, "delta"), mm = rational_arg(m, "M");
    const clab::EstimateResult result = clab::estimate_l_lower(d, k, del, mm, eo);
    if (o.save_stem && result.witness) clab::save_witness(*result.witness, o.save_stem, o.budget);
    emit(clab::report::estimate(result, d, k, del, mm), out);
  });
}

clab_status clab_glue(const char* manifest, const char* out_map, const char* out_set, clab_result** out) {
  CLAB_REQUIRE(manifest);
  CLAB_REQUIRE(out);
  return guarded([&] {
    const auto family = clab::load_family_manifest(manifest);
    const clab::GlueResult glued = clab::glue_instances(family);
    const clab::GlueAudit audit = clab::audit_glue(glued);
    if (out_map) clab::save_map(glued.map, out_map);
    if (out_set) clab::save_point_set(glued.set, out_set);
    emit(clab::report::glue(glued, audit), out);
  });
}

}  // extern "C"

// collinear-lab: command-line front end over the C interface.
// Exit codes: 0 answer found, 1 search exhausted without an answer, 2 input error.

#include <collinear_lab.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct InputError {
  std::string message;
};

void check(clab_status status) {
  if (status != CLAB_OK) throw InputError{std::string(clab_status_name(status)) + ": " + clab_last_error()};
}

using PointSetPtr = std::unique_ptr<clab_pointset, decltype(&clab_pointset_free)>;
using MapPtr = std::unique_ptr<clab_map, decltype(&clab_map_free)>;
using ResultPtr = std::unique_ptr<clab_result, decltype(&clab_result_free)>;

PointSetPtr load_set(const std::string& path) {
  clab_pointset* s = nullptr;
  check(clab_pointset_load(path.c_str(), &s));
  return {s, clab_pointset_free};
}

PointSetPtr optional_set(const std::string& path) {
  if (path.empty()) return {nullptr, clab_pointset_free};
  return load_set(path);
}

MapPtr load_map(const std::string& path) {
  clab_map* m = nullptr;
  check(clab_map_load(path.c_str(), &m));
  return {m, clab_map_free};
}

ResultPtr adopt(clab_result* r) { return {r, clab_result_free}; }

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string format = "text";
};

int print(const clab_result* r, const Globals& g, bool found) {
  std::cout << (g.format == "tsv" ? clab_result_tsv(r) : clab_result_text(r));
  return found ? 0 : 1;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact search for collinear points in images of Lipschitz maps on lattice windows"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--threads", g.threads, "Worker threads")->envname("COLLINEAR_LAB_THREADS")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "tsv"}));

  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a Lipschitz map and a subset of its window");
  std::string kind = "walk", window, set_kind = "all", set_param, out_map, out_set;
  std::size_t d = 1, codim = 1;
  std::int64_t slope = 1;
  gen->add_option("--kind", kind, "flat, affine, surface, walk, walk-lift, staircase, random")->capture_default_str();
  gen->add_option("--d", d, "Domain dimension")->capture_default_str();
  gen->add_option("--codim", codim, "Codimension h (only random maps go above 1)")->capture_default_str();
  gen->add_option("--slope", slope, "Slope bound for affine maps")->capture_default_str();
  gen->add_option("--window", window, "Window, lo:hi per axis")->required();
  gen->add_option("--set", set_kind, "all, coset, bernoulli")->capture_default_str();
  gen->add_option("--set-param", set_param, "Stride for coset, p = num/den for bernoulli");
  gen->add_option("--out-map", out_map, "Map file to write");
  gen->add_option("--out-set", out_set, "Point-set file to write");
  gen->callback([&] {
    action = [&] {
      clab_map* m = nullptr;
      check(clab_generate_map(kind.c_str(), d, codim, slope, window.c_str(), g.seed, &m));
      MapPtr map(m, clab_map_free);
      clab_pointset* s = nullptr;
      check(clab_generate_set(set_kind.c_str(), d, window.c_str(), set_param.empty() ? nullptr : set_param.c_str(),
                              g.seed, &s));
      PointSetPtr set(s, clab_pointset_free);
      if (!out_map.empty()) check(clab_map_save(map.get(), out_map.c_str()));
      if (!out_set.empty()) check(clab_pointset_save(set.get(), out_set.c_str()));
      clab_result* r = nullptr;
      check(clab_validate(map.get(), "neighbors", &r));
      auto res = adopt(r);
      if (g.format != "tsv") std::cout << "set_size " << clab_pointset_size(set.get()) << '\n';
      return print(res.get(), g, true);
    };
  });

  // collinear
  auto* col = app.add_subcommand("collinear", "Most collinear points of a set, or of f(A)");
  std::string input, map_path, set_path, engine = "hash";
  std::size_t k = 0;
  col->add_option("--input", input, "Point-set file");
  col->add_option("--map", map_path, "Map file (the images of --set are searched)");
  col->add_option("--set", set_path, "Domain point-set file (with --map)");
  col->add_option("--k", k, "Required number of collinear points");
  col->add_option("--engine", engine, "naive or hash")->check(CLI::IsMember({"naive", "hash"}))->capture_default_str();
  col->callback([&] {
    action = [&] {
      if (input.empty() == map_path.empty()) throw InputError{"give exactly one of --input or --map"};
      PointSetPtr pts(nullptr, clab_pointset_free);
      MapPtr map(nullptr, clab_map_free);
      if (!input.empty()) {
        pts = load_set(input);
      } else {
        map = load_map(map_path);
        auto a = optional_set(set_path);
        const std::size_t n = clab_pointset_size(a.get()), dd = clab_map_domain_dim(map.get()),
                          id = clab_map_image_dim(map.get());
        std::vector<std::int64_t> x(dd), images(n * id);
        for (std::size_t i = 0; i < n; ++i) {
          check(clab_pointset_get(a.get(), i, x.data()));
          check(clab_map_eval(map.get(), x.data(), images.data() + i * id));
        }
        clab_pointset* s = nullptr;
        check(clab_pointset_from_coords(id, n, images.data(), &s));
        pts.reset(s);
        if (k > 0) {
          clab_result* r = nullptr;
          check(clab_find_k(map.get(), a.get(), k, g.threads, &r));
          auto res = adopt(r);
          return print(res.get(), g, clab_result_found(res.get()));
        }
      }
      clab_result* r = nullptr;
      check(clab_collinear(pts.get(), engine.c_str(), g.threads, &r));
      auto res = adopt(r);
      const bool found = std::stoul(clab_result_get(res.get(), "count")) >= k;
      return print(res.get(), g, found);
    };
  });

  // density
  auto* den = app.add_subcommand("density", "Best window density per side L");
  std::vector<std::int64_t> sides;
  den->add_option("--input", input, "Point-set file")->required();
  den->add_option("--L", sides, "Window sides")->required();
  den->callback([&] {
    action = [&] {
      auto a = load_set(input);
      clab_result* r = nullptr;
      check(clab_density(a.get(), sides.data(), sides.size(), &r));
      auto res = adopt(r);
      return print(res.get(), g, true);
    };
  });

  // cylinder
  auto* cyl = app.add_subcommand("cylinder", "Witness conditions on generalized segments");
  cyl->require_subcommand(1);
  std::string epsilon, delta = "1/2", w, start, end;
  std::size_t budget = 20000;
  auto* chk = cyl->add_subcommand("check", "Evaluate z-i, z-ii and z-iii on one segment");
  auto* scn = cyl->add_subcommand("scan", "Search segments for a witness");
  for (auto* sub : {chk, scn}) {
    sub->add_option("--map", map_path, "Map file")->required();
    sub->add_option("--set", set_path, "Point-set file (empty when omitted)");
    sub->add_option("--epsilon", epsilon, "epsilon as num/den")->required();
    sub->add_option("--delta", delta, "delta as num/den")->capture_default_str();
  }
  chk->add_option("--w", w, "Direction, rationals separated by commas")->required();
  chk->add_option("--start", start, "Segment start, rational point")->required();
  chk->add_option("--end", end, "Segment end, rational point")->required();
  scn->add_option("--w", w, "Direction (default: the sign-pattern grid)");
  scn->add_option("--budget", budget, "Segments per direction")->capture_default_str();
  chk->callback([&] {
    action = [&] {
      auto map = load_map(map_path);
      auto a = optional_set(set_path);
      clab_result* r = nullptr;
      check(clab_cylinder_check(map.get(), a.get(), start.c_str(), end.c_str(), epsilon.c_str(), delta.c_str(),
                                w.c_str(), &r));
      auto res = adopt(r);
      return print(res.get(), g, clab_result_found(res.get()));
    };
  });
  scn->callback([&] {
    action = [&] {
      auto map = load_map(map_path);
      auto a = optional_set(set_path);
      clab_result* r = nullptr;
      check(clab_cylinder_scan(map.get(), a.get(), epsilon.c_str(), delta.c_str(), w.empty() ? nullptr : w.c_str(),
                               budget, g.seed, g.threads, &r));
      auto res = adopt(r);
      return print(res.get(), g, clab_result_found(res.get()));
    };
  });

  // dirichlet
  auto* dir = app.add_subcommand("dirichlet", "Simultaneous approximation with b <= N^d");
  std::vector<std::string> u;
  std::int64_t n = 0;
  dir->add_option("--u", u, "Rationals num/den (repeat or separate with commas)")->required();
  dir->add_option("--n", n, "N")->required();
  dir->callback([&] {
    action = [&] {
      clab_result* r = nullptr;
      check(clab_dirichlet(join(u).c_str(), n, &r));
      auto res = adopt(r);
      return print(res.get(), g, true);
    };
  });

  // cover
  auto* cov = app.add_subcommand("cover", "Witness, line family and pigeonhole extraction");
  std::string cover_delta = "1/4";
  cov->add_option("--map", map_path, "Map file (codimension 1)")->required();
  cov->add_option("--set", set_path, "Point-set file (empty when omitted)");
  cov->add_option("--k", k, "Number of collinear points wanted")->required();
  cov->add_option("--n", n, "N for the Dirichlet step")->required();
  cov->add_option("--delta", cover_delta, "Density threshold of the witness")->capture_default_str();
  cov->add_option("--budget", budget, "Segments per direction")->capture_default_str();
  cov->callback([&] {
    action = [&] {
      auto map = load_map(map_path);
      auto a = optional_set(set_path);
      clab_result* r = nullptr;
      check(clab_cover(map.get(), a.get(), k, n, cover_delta.c_str(), budget, g.seed, g.threads, &r));
      auto res = adopt(r);
      return print(res.get(), g, clab_result_found(res.get()));
    };
  });

  // estimate-l
  auto* est = app.add_subcommand("estimate-l", "Lower bound on L(d, k, delta, M) from verified counterexamples");
  std::string est_delta, est_m = "1", archive, save;
  clab_estimate_options eo;
  clab_estimate_options_init(&eo);
  std::size_t est_d = 1;
  est->add_option("--d", est_d, "Domain dimension")->capture_default_str();
  est->add_option("--k", k, "Collinear points to avoid")->required();
  est->add_option("--delta", est_delta, "Density, num/den")->required();
  est->add_option("--M", est_m, "Lipschitz constant, num/den")->capture_default_str();
  est->add_option("--budget", eo.budget, "Objective evaluations per side")->capture_default_str();
  est->add_option("--restarts", eo.restarts, "Hill-climbing restarts per side")->capture_default_str();
  est->add_option("--max-side", eo.max_side, "Largest side tried")->capture_default_str();
  est->add_option("--archive", archive, "Directory of earlier witnesses to reuse");
  est->add_option("--save", save, "Write the final witness to <stem>.map and <stem>.set");
  est->callback([&] {
    action = [&] {
      eo.seed = g.seed;
      eo.threads = g.threads;
      eo.archive_dir = archive.empty() ? nullptr : archive.c_str();
      eo.save_stem = save.empty() ? nullptr : save.c_str();
      clab_result* r = nullptr;
      check(clab_estimate_l(est_d, k, est_delta.c_str(), est_m.c_str(), &eo, &r));
      auto res = adopt(r);
      return print(res.get(), g, clab_result_found(res.get()));
    };
  });

  // glue
  auto* glu = app.add_subcommand("glue", "Glue a family of instances and audit the result");
  std::string manifest;
  glu->add_option("--manifest", manifest, "Manifest of 'map set' lines")->required();
  glu->add_option("--out-map", out_map, "Glued map file to write");
  glu->add_option("--out-set", out_set, "Glued point-set file to write");
  glu->callback([&] {
    action = [&] {
      clab_result* r = nullptr;
      check(clab_glue(manifest.c_str(), out_map.empty() ? nullptr : out_map.c_str(),
                      out_set.empty() ? nullptr : out_set.c_str(), &r));
      auto res = adopt(r);
      return print(res.get(), g, clab_result_found(res.get()));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    return action();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

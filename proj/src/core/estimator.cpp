#include "collinear_lab/estimator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "collinear_lab/error.hpp"
#include "collinear_lab/generators.hpp"

namespace clab {

NoCollinearCertificate verify_no_k_collinear(const LipschitzMap& f, const PointSet& a, std::size_t k,
                                             unsigned threads) {
  NoCollinearCertificate cert;
  std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
  for (const auto& x : a) pairs.emplace_back(f(x), x);
  std::sort(pairs.begin(), pairs.end());
  std::vector<LatticePoint> images;
  std::vector<std::size_t> weights;
  for (const auto& [img, x] : pairs) {
    if (images.empty() || images.back() != img) {
      images.push_back(img);
      weights.push_back(0);
    }
    ++weights.back();
  }
  const CollinearResult best = max_collinear_weighted(images, weights, threads);
  cert.max_count = best.count;
  cert.holds = best.count < k;
  cert.line = best.line;
  for (const auto& [img, x] : pairs)
    if (!best.line || best.line->contains(img)) cert.domain.push_back(x);
  std::sort(cert.domain.begin(), cert.domain.end());
  return cert;
}

namespace {

constexpr std::size_t kMaxImageDim = 4;
using Key = std::array<Int, kMaxImageDim>;

struct Score {
  std::size_t max = 0;
  std::size_t ties = 0;
  bool operator<=(const Score& o) const { return max != o.max ? max < o.max : ties <= o.ties; }
};

// Multiplicity-weighted score of a multiset of image points: best line and
// the number of lines reaching it.
class Scorer {
 public:
  Score operator()(std::vector<Key>& pts) {
    std::sort(pts.begin(), pts.end());
    distinct_.clear();
    weight_.clear();
    for (const auto& p : pts) {
      if (distinct_.empty() || distinct_.back() != p) {
        distinct_.push_back(p);
        weight_.push_back(0);
      }
      ++weight_.back();
    }
    const std::size_t n = distinct_.size();
    if (n == 1) return {weight_[0], 1};
    Score s;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      dirs_.clear();
      for (std::size_t j = i + 1; j < n; ++j) {
        Key dk{};
        Int g = 0;
        for (std::size_t a = 0; a < kMaxImageDim; ++a) {
          dk[a] = distinct_[j][a] - distinct_[i][a];
          g = gcd(g, dk[a]);
        }
        for (auto& c : dk) c /= g;
        dirs_.emplace_back(dk, weight_[j]);
      }
      std::sort(dirs_.begin(), dirs_.end());
      for (std::size_t t = 0; t < dirs_.size();) {
        std::size_t total = weight_[i];
        std::size_t u = t;
        for (; u < dirs_.size() && dirs_[u].first == dirs_[t].first; ++u) total += dirs_[u].second;
        if (total > s.max) {
          s.max = total;
          s.ties = 1;
        } else if (total == s.max) {
          ++s.ties;
        }
        t = u;
      }
    }
    return s;
  }

 private:
  std::vector<Key> distinct_;
  std::vector<std::size_t> weight_;
  std::vector<std::pair<Key, std::size_t>> dirs_;
};

Key key_of(std::span<const Int> v) {
  Key k{};
  std::copy(v.begin(), v.end(), k.begin());
  return k;
}

std::vector<Key> allowed_steps(std::size_t n, const Rational& m2) {
  const Int r = to_int(floor_of(sqrt_bracket(m2, 8).hi));
  std::vector<Key> out;
  std::vector<Int> v(n, -r);
  while (true) {
    Int s = 0;
    for (Int c : v) s += c * c;
    if (Rational(s) <= m2) out.push_back(key_of(v));
    std::size_t axis = n;
    while (axis-- > 0) {
      if (v[axis] < r) {
        ++v[axis];
        break;
      }
      v[axis] = -r;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Key add(const Key& a, const Key& b) {
  Key out;
  for (std::size_t i = 0; i < kMaxImageDim; ++i) out[i] = a[i] + b[i];
  return out;
}

Rational dist_sq(const Key& a, const Key& b) {
  Int s = 0;
  for (std::size_t i = 0; i < kMaxImageDim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return Rational(s);
}

struct Problem {
  std::size_t d;
  std::size_t k;
  Rational m2;
  Int side;
  std::size_t required;
  Box window;
  std::vector<Key> steps;
};

EstimateWitness make_witness(const Problem& p, const std::vector<Key>& values, const std::vector<std::size_t>& chosen,
                             const Rational& delta, const Rational& m, std::uint64_t seed, std::string method) {
  std::vector<Int> table;
  table.reserve(values.size() * (p.d + 1));
  for (const auto& v : values) table.insert(table.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p.d + 1));
  std::vector<LatticePoint> pts;
  for (auto idx : chosen) pts.push_back(p.window.point_at(idx));
  return EstimateWitness{p.d, p.k, delta, m, p.side, PointSet(p.d, std::move(pts)),
                         LipschitzMap(p.window, 1, p.m2, std::move(table)), seed, std::move(method)};
}

// Number of k-subsets of n, saturating at `cap`.
std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t cap) {
  double c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c > static_cast<double>(cap) ? cap : static_cast<std::size_t>(c + 0.5);
}

constexpr std::size_t kExhaustiveLimit = 20'000'000;

bool exhaustive_feasible(const Problem& p) {
  if (p.d != 1 || p.side > 8) return false;
  double combos = std::pow(static_cast<double>(p.steps.size()), static_cast<double>(p.side - 1));
  combos *= static_cast<double>(choose_capped(static_cast<std::size_t>(p.side), p.required, kExhaustiveLimit));
  return combos <= static_cast<double>(kExhaustiveLimit);
}

// Every step sequence with f(1) = 0 and every subset of the required size.
std::optional<std::pair<std::vector<Key>, std::vector<std::size_t>>> exhaustive(const Problem& p,
                                                                                std::size_t& evaluations) {
  const std::size_t n = static_cast<std::size_t>(p.side);
  std::vector<std::size_t> digits(n - 1, 0);
  std::vector<Key> values(n);
  std::vector<Key> imgs;
  Scorer score;
  while (true) {
    values[0] = Key{};
    for (std::size_t i = 1; i < n; ++i) values[i] = add(values[i - 1], p.steps[digits[i - 1]]);
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(p.required), true);
    do {
      imgs.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) imgs.push_back(values[i]);
      ++evaluations;
      if (score(imgs).max < p.k) {
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < n; ++i)
          if (mask[i]) chosen.push_back(i);
        return std::make_pair(values, chosen);
      }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    std::size_t pos = digits.size();
    while (pos-- > 0) {
      if (++digits[pos] < p.steps.size()) break;
      digits[pos] = 0;
    }
    if (pos == static_cast<std::size_t>(-1)) break;
  }
  return std::nullopt;
}

// One seeded hill-climbing run; values are indexed like the window.
std::optional<std::pair<std::vector<Key>, std::vector<std::size_t>>> climb(const Problem& p, std::uint64_t seed,
                                                                           std::size_t iterations,
                                                                           std::size_t& evaluations) {
  Rng rng(seed);
  const Box& w = p.window;
  const std::size_t n = w.size();
  const std::size_t d = p.d;

  // Separable start: a sum of one walk per axis keeps every unit step within M.
  std::vector<std::vector<Key>> walks(d);
  for (std::size_t axis = 0; axis < d; ++axis) {
    walks[axis].push_back(Key{});
    for (Int i = 1; i < p.side; ++i) walks[axis].push_back(add(walks[axis].back(), p.steps[rng.below(p.steps.size())]));
  }
  std::vector<Key> values(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const LatticePoint x = w.point_at(idx);
    Key v{};
    for (std::size_t axis = 0; axis < d; ++axis) v = add(v, walks[axis][static_cast<std::size_t>(x[axis] - 1)]);
    values[idx] = v;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  std::vector<bool> in_a(n, false);
  for (std::size_t i = 0; i < p.required; ++i) in_a[order[i]] = true;

  std::vector<std::size_t> stride(d, 1);
  for (std::size_t i = d - 1; i-- > 0;) stride[i] = stride[i + 1] * static_cast<std::size_t>(p.side);

  Scorer scorer;
  std::vector<Key> imgs;
  auto evaluate = [&] {
    imgs.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (in_a[i]) imgs.push_back(values[i]);
    ++evaluations;
    return scorer(imgs);
  };
  auto neighbors = [&](std::size_t idx, std::vector<std::size_t>& out) {
    out.clear();
    const LatticePoint x = w.point_at(idx);
    for (std::size_t axis = 0; axis < d; ++axis) {
      if (x[axis] > 1) out.push_back(idx - stride[axis]);
      if (x[axis] < p.side) out.push_back(idx + stride[axis]);
    }
  };

  Score current = evaluate();
  std::vector<std::size_t> nb;
  const bool can_swap = p.required < n;
  for (std::size_t it = 0; it < iterations && current.max >= p.k; ++it) {
    const bool map_move = !can_swap || rng.uniform(0, 1) == 0;
    if (map_move) {
      const std::size_t idx = rng.below(n);
      neighbors(idx, nb);
      if (nb.empty()) continue;
      const Key candidate = add(values[nb[rng.below(nb.size())]], p.steps[rng.below(p.steps.size())]);
      bool ok = candidate != values[idx];
      for (auto y : nb)
        if (ok && dist_sq(candidate, values[y]) > p.m2) ok = false;
      if (!ok) continue;
      const Key old = values[idx];
      values[idx] = candidate;
      const Score s = evaluate();
      if (s <= current) {
        current = s;
      } else {
        values[idx] = old;
      }
    } else {
      std::size_t in, out;
      do in = rng.below(n);
      while (!in_a[in]);
      do out = rng.below(n);
      while (in_a[out]);
      in_a[in] = false;
      in_a[out] = true;
      const Score s = evaluate();
      if (s <= current) {
        current = s;
      } else {
        in_a[in] = true;
        in_a[out] = false;
      }
    }
  }
  if (current.max >= p.k) return std::nullopt;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i)
    if (in_a[i]) chosen.push_back(i);
  return std::make_pair(values, chosen);
}

std::string today() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

}  // namespace

bool verify_witness(const EstimateWitness& w) {
  if (w.d < 1 || w.side < 1) return false;
  if (!(w.map.window() == Box::cube(w.d, 1, w.side)) || w.map.codim() != 1) return false;
  if (w.map.lipschitz_squared() > w.m * w.m) return false;
  if (!validate_lipschitz(w.map, ValidationMode::Neighbors).valid) return false;
  if (!w.set.empty() && w.set.dim() != w.d) return false;
  for (const auto& x : w.set)
    if (!w.map.window().contains(x)) return false;
  BigInt volume = 1;
  for (std::size_t i = 0; i < w.d; ++i) volume *= static_cast<long>(w.side);
  if (Rational(static_cast<unsigned long>(w.set.size())) < w.delta * Rational(volume)) return false;
  return verify_no_k_collinear(w.map, w.set, w.k).holds;
}

EstimateResult estimate_l_lower(std::size_t d, std::size_t k, const Rational& delta, const Rational& m,
                                const EstimateOptions& options) {
  if (d < 1 || d + 1 > kMaxImageDim) fail(ErrorCode::InvalidArgument, "the estimator supports d = 1, 2, 3");
  if (k < 2) fail(ErrorCode::InvalidArgument, "k must be at least 2");
  if (delta > 1) fail(ErrorCode::Infeasible, "delta > 1: no subset of [L]^d is that dense");
  if (delta <= 0) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (m <= 0) fail(ErrorCode::InvalidArgument, "M must be positive");
  if (m > 8) fail(ErrorCode::InvalidArgument, "M above 8 makes the step table too large");
  const Rational m2 = m * m;
  const auto steps = allowed_steps(d + 1, m2);

  EstimateResult result;
  Int start = 1;
  for (const auto& prior : options.prior) {
    if (prior.d != d || prior.k > k || prior.delta < delta || prior.m > m) continue;
    EstimateWitness as_query = prior;
    as_query.k = k;
    as_query.delta = delta;
    as_query.m = m;
    if (!verify_witness(as_query)) continue;
    if (prior.side >= start) {
      start = prior.side + 1;
      result.l_lower = prior.side;
      result.witness = as_query;
      result.witness->method = "archive";
    }
  }

  const unsigned threads = std::max(1u, options.threads);
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  const std::size_t per_restart = std::max<std::size_t>(1, options.budget / restarts);
  for (Int side = start; side <= options.max_side; ++side) {
    BigInt volume = 1;
    for (std::size_t i = 0; i < d; ++i) volume *= static_cast<long>(side);
    const Problem p{d, k, m2, side, static_cast<std::size_t>(to_int(ceil_of(delta * Rational(volume)))),
                    Box::cube(d, 1, side), steps};
    LevelLog log{side, p.required, false, "", 0};
    std::optional<EstimateWitness> found;

    if (p.required < k) {
      // A constant map puts all of A on one point: fewer than k on any line.
      std::vector<Key> zeros(p.window.size(), Key{});
      std::vector<std::size_t> chosen(p.required);
      for (std::size_t i = 0; i < p.required; ++i) chosen[i] = i;
      found = make_witness(p, zeros, chosen, delta, m, options.seed, "trivial");
      log.method = "trivial";
    } else if (exhaustive_feasible(p)) {
      log.method = "exhaustive";
      if (auto hit = exhaustive(p, log.evaluations))
        found = make_witness(p, hit->first, hit->second, delta, m, options.seed, "exhaustive");
    } else {
      log.method = "hill-climb";
      for (std::size_t first = 0; first < restarts && !found; first += threads) {
        const std::size_t batch = std::min<std::size_t>(threads, restarts - first);
        std::vector<std::optional<std::pair<std::vector<Key>, std::vector<std::size_t>>>> outcomes(batch);
        std::vector<std::size_t> evals(batch, 0);
        auto run = [&](std::size_t b) {
          outcomes[b] = climb(p, derive_seed(options.seed, static_cast<std::uint64_t>(side), first + b), per_restart,
                              evals[b]);
        };
        if (batch == 1) {
          run(0);
        } else {
          std::vector<std::thread> pool;
          for (std::size_t b = 0; b < batch; ++b) pool.emplace_back(run, b);
          for (auto& t : pool) t.join();
        }
        for (std::size_t b = 0; b < batch; ++b) {
          log.evaluations += evals[b];
          if (outcomes[b]) {
            found = make_witness(p, outcomes[b]->first, outcomes[b]->second, delta, m,
                                 derive_seed(options.seed, static_cast<std::uint64_t>(side), first + b), "hill-climb");
            break;
          }
        }
      }
    }

    if (found && !verify_witness(*found)) fail(ErrorCode::Internal, "search produced a witness that fails re-verification");
    log.found = found.has_value();
    result.levels.push_back(log);
    if (!found) {
      result.exact = log.method == "exhaustive";
      break;
    }
    result.l_lower = side;
    result.witness = std::move(found);
  }
  return result;
}

void save_witness(const EstimateWitness& w, const std::string& stem, std::size_t budget) {
  const auto parent = std::filesystem::path(stem).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ostringstream header;
  header << "witness d=" << w.d << " k=" << w.k << " delta=" << format_rational(w.delta)
         << " M=" << format_rational(w.m) << " L=" << w.side << " seed=" << w.seed << " budget=" << budget
         << " method=" << w.method << " date=" << today();
  save_map(w.map, stem + ".map", header.str());
  save_point_set(w.set, stem + ".set", header.str());
}

std::vector<EstimateWitness> load_witness_archive(const std::string& dir) {
  std::vector<EstimateWitness> out;
  std::vector<std::filesystem::path> maps;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".map") maps.push_back(entry.path());
  std::sort(maps.begin(), maps.end());
  for (const auto& path : maps) {
    auto set_path = path;
    set_path.replace_extension(".set");
    if (!std::filesystem::exists(set_path)) continue;
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EstimateWitness w;
    std::istringstream tokens(first);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "d") w.d = static_cast<std::size_t>(parse_int(value));
      else if (key == "k") w.k = static_cast<std::size_t>(parse_int(value));
      else if (key == "delta") w.delta = parse_rational(value);
      else if (key == "M") w.m = parse_rational(value);
      else if (key == "L") w.side = parse_int(value);
      else if (key == "seed") w.seed = std::stoull(value);
      else if (key == "method") w.method = value;
    }
    w.map = load_map(path.string());
    w.set = load_point_set(set_path.string());
    if (w.set.empty()) w.set = PointSet(w.d);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace clab

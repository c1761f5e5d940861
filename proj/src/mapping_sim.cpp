#include "rmap/mapping_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "rmap/error.hpp"

namespace rmap::sim {

namespace {

using u32 = std::uint32_t;

u32 find(std::vector<u32>& parent, u32 x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Roots are always the minimum label of their set.
void unite(std::vector<u32>& parent, u32 x, u32 y) {
  x = find(parent, x);
  y = find(parent, y);
  if (x == y) return;
  if (x < y) parent[y] = x;
  else parent[x] = y;
}

// Union-find over the edges {i, f(i)}; returns the number of sets.
std::size_t build_components(const Mapping& m, std::vector<u32>& parent) {
  const std::size_t n = m.n();
  parent.resize(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<u32>(i);
  for (std::size_t i = 0; i < n; ++i) unite(parent, static_cast<u32>(i), m.image[i]);
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) roots += parent[i] == i;
  return roots;
}

enum Column : std::size_t {
  kLambda1,
  kLambda2,
  kLambda3,
  kLambda4,
  kCyclic,
  kComponents,
  kLargest,
  kDeepest,
  kRichest,
  kInterplay,
  kColumns
};

const char* const kNames[kColumns] = {"lambda1",       "lambda2",           "lambda3",
                                      "lambda4",       "cyclic_points",     "components",
                                      "largest_component", "deepest_cycle", "richest_component",
                                      "interplay"};

// Streaming mean and co-moment matrix, mergeable.
struct Accumulator {
  std::uint64_t count = 0;
  std::vector<double> mean = std::vector<double>(kColumns, 0.0);
  std::vector<double> comoment = std::vector<double>(kColumns * kColumns, 0.0);

  void add(const double* x) {
    ++count;
    double before[kColumns];
    for (std::size_t i = 0; i < kColumns; ++i) {
      before[i] = x[i] - mean[i];
      mean[i] += before[i] / static_cast<double>(count);
    }
    for (std::size_t i = 0; i < kColumns; ++i)
      for (std::size_t j = 0; j < kColumns; ++j) comoment[i * kColumns + j] += before[i] * (x[j] - mean[j]);
  }

  void merge(const Accumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
    const double nt = na + nb;
    std::vector<double> delta(kColumns);
    for (std::size_t i = 0; i < kColumns; ++i) delta[i] = o.mean[i] - mean[i];
    for (std::size_t i = 0; i < kColumns; ++i)
      for (std::size_t j = 0; j < kColumns; ++j)
        comoment[i * kColumns + j] += o.comoment[i * kColumns + j] + delta[i] * delta[j] * na * nb / nt;
    for (std::size_t i = 0; i < kColumns; ++i) mean[i] += delta[i] * nb / nt;
    count += o.count;
  }
};

struct WorkerResult {
  Accumulator acc;
  std::vector<std::uint64_t> ecdf;
  std::uint64_t attempts = 0;
};

std::uint64_t rejection_cap(const SimConfig& cfg) {
  const double p = expected_acceptance(cfg.constraint, cfg.n);
  const double cap = cfg.budget_factor * std::ceil(1.0 / p);
  if (cap >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(cap);
}

void run_worker(const SimConfig& cfg, unsigned w, std::size_t quota, WorkerResult& out) {
  auto rng = worker_stream(cfg.seed, w);
  Workspace ws;
  Mapping m;
  out.ecdf.assign(cfg.ecdf_points.size(), 0);
  const std::size_t need = cfg.constraint.required_components();
  const std::uint64_t cap = rejection_cap(cfg);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
  const double n = static_cast<double>(cfg.n);
  std::uint64_t rejected = 0;
  double x[kColumns];
  for (std::size_t done = 0; done < quota;) {
    sample_mapping(cfg.n, rng, m);
    ++out.attempts;
    if (need != 0 && count_components(m, ws) != need) {
      if (++rejected > cap) {
        throw BudgetExhaustedError("simulate: " + std::to_string(rejected) +
                                   " consecutive rejections for constraint " + cfg.constraint.name());
      }
      continue;
    }
    rejected = 0;
    const auto g = analyze(m, ws);
    for (std::size_t r = 1; r <= 4; ++r) x[kLambda1 + r - 1] = static_cast<double>(g.lambda(r)) / sqrt_n;
    x[kCyclic] = static_cast<double>(g.cyclic_points) / sqrt_n;
    x[kComponents] = static_cast<double>(g.components);
    x[kLargest] = static_cast<double>(g.component_sizes.front()) / n;
    x[kDeepest] = static_cast<double>(g.largest_component_cycle) / sqrt_n;
    x[kRichest] = static_cast<double>(g.longest_cycle_component) / n;
    x[kInterplay] = g.largest_component_contains_longest_cycle ? 1.0 : 0.0;
    out.acc.add(x);
    for (std::size_t k = 0; k < cfg.ecdf_points.size(); ++k) out.ecdf[k] += x[kLambda1] <= cfg.ecdf_points[k];
    ++done;
  }
}

}  // namespace

Mapping Mapping::from_one_based(const std::vector<std::int64_t>& image) {
  if (image.empty()) throw DomainError("Mapping: n must be >= 1");
  const auto n = static_cast<std::int64_t>(image.size());
  if (n > std::numeric_limits<u32>::max()) throw DomainError("Mapping: n too large");
  Mapping m;
  m.image.reserve(image.size());
  for (auto v : image) {
    if (v < 1 || v > n) throw DomainError("Mapping: image entries must lie in [1, n]");
    m.image.push_back(static_cast<u32>(v - 1));
  }
  return m;
}

std::size_t count_components(const Mapping& m, Workspace& ws) { return build_components(m, ws.b); }

GraphSummary analyze(const Mapping& m, Workspace& ws) {
  const std::size_t n = m.n();
  if (n == 0) throw DomainError("analyze: empty mapping");
  auto& indeg = ws.a;
  auto& parent = ws.b;
  auto& scratch = ws.c;
  indeg.assign(n, 0);
  for (auto v : m.image) ++indeg[v];

  // Peel in-degree-zero nodes; what remains is exactly the cyclic points.
  scratch.clear();
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) scratch.push_back(static_cast<u32>(i));
  for (std::size_t head = 0; head < scratch.size(); ++head) {
    const u32 w = m.image[scratch[head]];
    if (--indeg[w] == 0) scratch.push_back(w);
  }

  GraphSummary g;
  g.n = n;
  g.components = build_components(m, parent);

  scratch.assign(n, 0);  // component sizes at the roots
  for (std::size_t i = 0; i < n; ++i) ++scratch[find(parent, static_cast<u32>(i))];

  struct Cycle {
    std::size_t length, size;
    u32 root;
  };
  std::vector<Cycle> cycles;
  cycles.reserve(g.components);
  for (std::size_t v = 0; v < n; ++v) {
    if (indeg[v] == 0) continue;
    std::size_t len = 0;
    u32 u = static_cast<u32>(v);
    do {
      indeg[u] = 0;
      ++len;
      u = m.image[u];
    } while (u != v);
    const u32 root = find(parent, static_cast<u32>(v));
    cycles.push_back({len, scratch[root], root});
    g.cyclic_points += len;
  }
  if (cycles.size() != g.components) {
    throw std::logic_error("analyze: cycle count disagrees with component count");
  }

  g.cycle_lengths.reserve(cycles.size());
  g.component_sizes.reserve(cycles.size());
  for (const auto& c : cycles) {
    g.cycle_lengths.push_back(c.length);
    g.component_sizes.push_back(c.size);
  }
  std::sort(g.cycle_lengths.rbegin(), g.cycle_lengths.rend());
  std::sort(g.component_sizes.rbegin(), g.component_sizes.rend());

  const std::size_t longest = g.cycle_lengths.front();
  const Cycle* largest = &cycles.front();
  const Cycle* richest = nullptr;
  for (const auto& c : cycles) {
    if (c.size > largest->size || (c.size == largest->size && c.length > largest->length) ||
        (c.size == largest->size && c.length == largest->length && c.root < largest->root)) {
      largest = &c;
    }
    if (c.length == longest &&
        (!richest || c.size > richest->size || (c.size == richest->size && c.root < richest->root))) {
      richest = &c;
    }
  }
  g.largest_component_cycle = largest->length;
  g.longest_cycle_component = richest->size;
  g.largest_component_contains_longest_cycle = largest->length == longest;
  return g;
}

GraphSummary analyze(const Mapping& m) {
  Workspace ws;
  return analyze(m, ws);
}

void sample_mapping(std::size_t n, std::mt19937_64& rng, Mapping& out) {
  if (n == 0) throw DomainError("sample_mapping: n must be >= 1");
  if (n > std::numeric_limits<u32>::max()) throw DomainError("sample_mapping: n too large");
  std::uniform_int_distribution<u32> pick(0, static_cast<u32>(n - 1));
  out.image.resize(n);
  for (auto& v : out.image) v = pick(rng);
}

Mapping sample_mapping(std::size_t n, std::mt19937_64& rng) {
  Mapping m;
  sample_mapping(n, rng, m);
  return m;
}

std::mt19937_64 worker_stream(std::uint64_t seed, unsigned worker) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(worker)};
  return std::mt19937_64(seq);
}

Constraint Constraint::components(std::size_t m) {
  if (m < 1) throw DomainError("components constraint: m must be >= 1");
  return {Kind::components, m};
}

Constraint Constraint::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "connected") return connected();
  const std::string prefix = "components=";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw DomainError("constraint: bad component count '" + digits + "'");
    }
    return components(std::stoul(digits));
  }
  throw DomainError("constraint: expected none, connected or components=M");
}

std::string Constraint::name() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::connected: return "connected";
    case Kind::components: return "components=" + std::to_string(m);
  }
  return "none";
}

double expected_acceptance(const Constraint& c, std::size_t n) {
  if (c.kind == Constraint::Kind::none) return 1.0;
  const double nn = static_cast<double>(n);
  const double base = std::sqrt(std::numbers::pi / (2.0 * nn));
  const auto m = static_cast<double>(c.m);
  const double p = base * std::pow(std::log(nn), m - 1.0) / (std::pow(2.0, m - 1.0) * std::tgamma(m));
  // The asymptotic can vanish (m > 1, n = 1) or undershoot badly at small n.
  return std::clamp(p, 1e-12, 1.0);
}

const Statistic& SimStats::get(const std::string& name) const {
  for (const auto& s : stats)
    if (s.name == name) return s;
  throw DomainError("SimStats: unknown statistic " + name);
}

double SimStats::corr(const std::string& a, const std::string& b) const {
  std::size_t i = kColumns, j = kColumns;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    if (stats[k].name == a) i = k;
    if (stats[k].name == b) j = k;
  }
  if (i == kColumns || j == kColumns) throw DomainError("SimStats: unknown statistic");
  return correlation[i][j];
}

SimStats simulate(const SimConfig& cfg) {
  if (cfg.n < 2) throw DomainError("simulate: n must be >= 2");
  if (cfg.trials < 1) throw DomainError("simulate: trials must be >= 1");
  if (cfg.workers < 1) throw DomainError("simulate: workers must be >= 1");
  if (!(cfg.budget_factor > 0.0)) throw DomainError("simulate: budget factor must be positive");
  if (cfg.constraint.kind != Constraint::Kind::none && cfg.constraint.m > cfg.n) {
    throw DomainError("simulate: more components than points");
  }

  const unsigned w_count = cfg.workers;
  std::vector<WorkerResult> results(w_count);
  std::vector<std::exception_ptr> errors(w_count);
  auto quota = [&](unsigned w) -> std::size_t {
    return w < cfg.trials ? (cfg.trials - w + w_count - 1) / w_count : 0;
  };
  auto body = [&](unsigned w) {
    try {
      run_worker(cfg, w, quota(w), results[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (w_count == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w_count);
    for (unsigned w = 0; w < w_count; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Accumulator total;
  std::vector<std::uint64_t> ecdf(cfg.ecdf_points.size(), 0);
  std::uint64_t attempts = 0;
  for (const auto& r : results) {
    total.merge(r.acc);
    attempts += r.attempts;
    for (std::size_t k = 0; k < ecdf.size(); ++k) ecdf[k] += r.ecdf[k];
  }

  SimStats s;
  s.config = cfg;
  s.attempts = attempts;
  s.acceptance_rate = static_cast<double>(total.count) / static_cast<double>(attempts);
  const double k = static_cast<double>(total.count);
  for (std::size_t i = 0; i < kColumns; ++i) {
    Statistic st;
    st.name = kNames[i];
    st.mean = total.mean[i];
    st.variance = total.count > 1 ? std::max(0.0, total.comoment[i * kColumns + i] / (k - 1.0)) : 0.0;
    st.std_error = std::sqrt(st.variance / k);
    s.stats.push_back(st);
  }
  s.correlation.assign(kColumns, std::vector<double>(kColumns, 0.0));
  for (std::size_t i = 0; i < kColumns; ++i) {
    for (std::size_t j = 0; j < kColumns; ++j) {
      const double d = std::sqrt(total.comoment[i * kColumns + i] * total.comoment[j * kColumns + j]);
      double c = i == j ? 1.0 : 0.0;
      if (i != j && d > 0.0) c = std::clamp(total.comoment[i * kColumns + j] / d, -1.0, 1.0);
      s.correlation[i][j] = c;
    }
  }
  for (auto v : ecdf) s.ecdf.push_back(static_cast<double>(v) / k);
  return s;
}

Estimate interplay_estimate(std::size_t n, std::size_t trials, std::uint64_t seed, unsigned workers) {
  SimConfig cfg;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.workers = workers;
  const auto s = simulate(cfg);
  const auto& p = s.get("interplay");
  return {p.mean, p.std_error};
}

}  // namespace rmap::sim

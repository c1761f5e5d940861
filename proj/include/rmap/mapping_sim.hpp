#pragma once

// Monte Carlo over uniform random mappings f: {1..n} -> {1..n} and their
// functional-graph structure.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rmap::sim {

/// image[i] = f(i + 1) - 1, stored zero-based.
struct Mapping {
  std::vector<std::uint32_t> image;

  std::size_t n() const { return image.size(); }
  /// From the one-based form f(1), ..., f(n); throws DomainError on bad entries.
  static Mapping from_one_based(const std::vector<std::int64_t>& image);
};

struct GraphSummary {
  std::size_t n = 0;
  std::size_t components = 0;     // M
  std::size_t cyclic_points = 0;  // N
  std::vector<std::size_t> cycle_lengths;    // descending
  std::vector<std::size_t> component_sizes;  // descending
  // Cycle length inside the largest component (size, then longer cycle, then
  // lower minimum label) and the size of the component holding a longest
  // cycle (larger component first, then lower minimum label).
  std::size_t largest_component_cycle = 0;
  std::size_t longest_cycle_component = 0;
  bool largest_component_contains_longest_cycle = false;

  /// Lambda_r, 0 past the number of cycles.
  std::size_t lambda(std::size_t r) const {
    return r >= 1 && r <= cycle_lengths.size() ? cycle_lengths[r - 1] : 0;
  }
};

/// Scratch arrays reused across trials.
struct Workspace {
  std::vector<std::uint32_t> a, b, c;
};

GraphSummary analyze(const Mapping& m, Workspace& ws);
GraphSummary analyze(const Mapping& m);

/// Component count only (union-find), for cheap rejection.
std::size_t count_components(const Mapping& m, Workspace& ws);

Mapping sample_mapping(std::size_t n, std::mt19937_64& rng);
void sample_mapping(std::size_t n, std::mt19937_64& rng, Mapping& out);

/// The stream used by worker w for a given seed.
std::mt19937_64 worker_stream(std::uint64_t seed, unsigned worker);

struct Constraint {
  enum class Kind { none, connected, components };
  Kind kind = Kind::none;
  std::size_t m = 1;

  static Constraint none() { return {Kind::none, 1}; }
  static Constraint connected() { return {Kind::connected, 1}; }
  static Constraint components(std::size_t m);
  /// "none", "connected" or "components=M".
  static Constraint parse(const std::string& text);
  std::string name() const;
  std::size_t required_components() const { return kind == Kind::none ? 0 : m; }
};

/// Leading-order acceptance probability of a constraint at size n, capped at 1.
double expected_acceptance(const Constraint& c, std::size_t n);

struct SimConfig {
  std::size_t n = 0;
  std::size_t trials = 0;
  Constraint constraint;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double budget_factor = 1e4;      // rejection cap = budget_factor * ceil(1/p)
  std::vector<double> ecdf_points;  // b values for P{Lambda_1 <= b sqrt(n)}
};

struct Statistic {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double std_error = 0.0;
};

struct SimStats {
  SimConfig config;
  std::uint64_t attempts = 0;
  double acceptance_rate = 1.0;
  // lambda1..lambda4, cyclic_points, components, largest_component,
  // deepest_cycle, richest_component, interplay; all per sqrt(n) or n as in
  // the limits except components (raw) and interplay (indicator).
  std::vector<Statistic> stats;
  std::vector<std::vector<double>> correlation;  // over the same order
  std::vector<double> ecdf;

  const Statistic& get(const std::string& name) const;
  double corr(const std::string& a, const std::string& b) const;
};

/// Accepted samples are split as trial t -> worker t mod W; the result depends
/// only on the config. Throws BudgetExhaustedError if a worker sees more than
/// the cap of consecutive rejections.
SimStats simulate(const SimConfig& cfg);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// P{the largest component contains a longest cycle}.
Estimate interplay_estimate(std::size_t n, std::size_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace rmap::sim

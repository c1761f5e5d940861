#include "rmap/exact_enum.hpp"

#include <exception>
#include <thread>
#include <vector>

#include "rmap/error.hpp"
#include "rmap/mapping_sim.hpp"

namespace rmap::exact {

namespace {

void tally_prefix(int n, std::uint32_t first, ExactTables& t) {
  sim::Mapping m;
  m.image.assign(n, 0);
  m.image[0] = first;
  sim::Workspace ws;
  while (true) {
    const auto g = sim::analyze(m, ws);
    const int comps = static_cast<int>(g.components);
    const int cyc = static_cast<int>(g.cyclic_points);
    ++t.counts.a[comps][cyc];
    ++t.joint[{comps, cyc, static_cast<int>(g.lambda(1)), static_cast<int>(g.lambda(2))}];
    if (comps == 1) ++t.connected_count;
    if (g.largest_component_contains_longest_cycle) ++t.interplay_count;
    ++t.total;
    // Odometer over positions 1..n-1.
    int pos = 1;
    while (pos < n && ++m.image[pos] == static_cast<std::uint32_t>(n)) m.image[pos++] = 0;
    if (pos >= n) break;
  }
}

ExactTables empty_tables(int n) {
  ExactTables t;
  t.n = n;
  t.counts.n = n;
  t.counts.a.assign(n + 1, std::vector<std::int64_t>(n + 1, 0));
  return t;
}

void merge(ExactTables& into, const ExactTables& from) {
  for (int m = 0; m <= into.n; ++m)
    for (int l = 0; l <= into.n; ++l) into.counts.a[m][l] += from.counts.a[m][l];
  for (const auto& [k, v] : from.joint) into.joint[k] += v;
  into.connected_count += from.connected_count;
  into.interplay_count += from.interplay_count;
  into.total += from.total;
}

}  // namespace

double ExactTables::mean_lambda1() const {
  double s = 0.0;
  for (const auto& [k, v] : joint) s += static_cast<double>(k[2]) * static_cast<double>(v);
  return s / static_cast<double>(total);
}

double ExactTables::interplay_probability() const {
  return static_cast<double>(interplay_count) / static_cast<double>(total);
}

ExactTables enumerate_all(int n, unsigned workers) {
  if (n < 1 || n > 7) throw DomainError("enumerate_all: n must lie in [1, 7]");
  if (workers < 1) throw DomainError("enumerate_all: workers must be >= 1");
  const unsigned w_count = std::min<unsigned>(workers, n);
  std::vector<ExactTables> parts(w_count, empty_tables(n));
  std::vector<std::exception_ptr> errors(w_count);
  auto body = [&](unsigned w) {
    try {
      for (int first = static_cast<int>(w); first < n; first += static_cast<int>(w_count)) {
        tally_prefix(n, static_cast<std::uint32_t>(first), parts[w]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (w_count == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < w_count; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  ExactTables out = empty_tables(n);
  for (const auto& p : parts) merge(out, p);
  return out;
}

}  // namespace rmap::exact

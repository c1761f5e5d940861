#include "rmap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmap/distributions.hpp"
#include "rmap/error.hpp"
#include "rmap/exact_enum.hpp"
#include "rmap/gfseries.hpp"
#include "rmap/laplace.hpp"
#include "rmap/mapping_sim.hpp"
#include "rmap/moments.hpp"

namespace rmap::cli {

namespace {

using Records = std::vector<OutputRecord>;

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Decimal or p/q.
double parse_number(const std::string& text, const char* what) {
  auto one = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError(std::string(what) + ": not a number: " + text);
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) throw DomainError(std::string(what) + ": zero denominator");
  return one(text.substr(0, slash)) / den;
}

dist::Regime parse_regime(const std::string& name, std::optional<double> c) {
  if (name == "rayleigh") return dist::Regime::rayleigh();
  if (name == "halfnormal") return dist::Regime::halfnormal();
  if (name == "connected") return dist::Regime::connected();
  if (name == "pavlov") {
    if (!c) throw DomainError("regime pavlov needs --c");
    return dist::Regime::pavlov(*c);
  }
  throw DomainError("unknown regime " + name);
}

struct Context {
  bool quiet = false;
  Format format = Format::json;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

// Records of one command, timed as a whole.
class Emitter {
 public:
  explicit Emitter(const Context& ctx) : ctx_(ctx) {}
  void emit(const Records& records, double seconds) {
    std::size_t i = 0;
    if (ctx_.format == Format::csv) *ctx_.out << csv_header();
    for (auto r : records) {
      if (!ctx_.quiet) r.wall_time = seconds;
      *ctx_.out << (ctx_.format == Format::json ? to_json(r) : to_csv(r, i++));
    }
  }

 private:
  const Context& ctx_;
};

OutputRecord make_record(const std::string& command, std::vector<std::pair<std::string, std::string>> params) {
  OutputRecord r;
  r.command = command;
  r.parameters = std::move(params);
  return r;
}

std::string tag(const char* prefix, double v) { return std::string(prefix) + format_number(v); }

}  // namespace

std::string to_json(const OutputRecord& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
  j["values"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.values) j["values"][k] = v;
  j["errors"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.errors) j["errors"][k] = v;
  if (!r.checks.empty()) {
    for (const auto& [k, v] : r.checks) j["checks"][k] = v;
  }
  j["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  j["status"] = r.status;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j.dump() + "\n";
}

std::string csv_header() { return "command,record,field,value\n"; }

std::string to_csv(const OutputRecord& r, std::size_t index) {
  std::ostringstream os;
  const std::string lead = csv_field(r.command) + "," + std::to_string(index) + ",";
  auto row = [&](const std::string& field, const std::string& value) {
    os << lead << csv_field(field) << "," << csv_field(value) << "\n";
  };
  for (const auto& [k, v] : r.parameters) row("param." + k, v);
  for (const auto& [k, v] : r.values) row("value." + k, format_number(v));
  for (const auto& [k, v] : r.errors) row("error." + k, format_number(v));
  for (const auto& [k, v] : r.checks) row("check." + k, v ? "true" : "false");
  if (r.seed) row("seed", std::to_string(*r.seed));
  if (r.wall_time) row("wall_time", format_number(*r.wall_time));
  row("status", r.status);
  if (!r.reason.empty()) row("reason", r.reason);
  return os.str();
}

unsigned default_workers() {
  const char* env = std::getenv("RMAP_WORKERS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) return 1;
  return static_cast<unsigned>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycles and components of random mappings: limit laws, transforms, simulation"};
  app.name("rmap");
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", ctx.quiet, "Omit wall time so output is byte-reproducible");

  std::function<Records()> action;
  std::string command;
  std::vector<std::pair<std::string, std::string>> echo;  // parameters kept for error records
  std::optional<std::uint64_t> echo_seed;
  auto record = [&echo](const std::string& cmd, std::vector<std::pair<std::string, std::string>> params) {
    echo = params;
    return make_record(cmd, std::move(params));
  };

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a delay-equation solution");
  std::string fn, x_text;
  std::optional<int> rank;
  std::optional<std::string> theta_text;
  double tol = 1e-12;
  eval->add_option("--fn", fn)->required()->check(CLI::IsMember({"rho", "sigma", "sigma-tilde", "rho-r", "g"}));
  eval->add_option("--x", x_text)->required();
  eval->add_option("--r", rank, "Rank for rho-r");
  eval->add_option("--theta", theta_text, "Parameter for g");
  eval->add_option("--tol", tol, "Solver tolerance");
  eval->callback([&] {
    command = "eval";
    action = [&]() -> Records {
      const double x = parse_number(x_text, "--x");
      if (!std::isfinite(x)) throw DomainError("eval: x must be finite");
      auto rec = record("eval", {{"fn", fn}, {"x", x_text}, {"tol", format_number(tol)}});
      const double x_max = std::max(1.0, std::ceil(x));
      double value = 0.0, resid = std::nan("");
      if (fn == "rho-r") {
        if (!rank) throw DomainError("eval: --fn rho-r needs --r");
        rec.parameters.emplace_back("r", std::to_string(*rank));
        auto ranks = dde::solve_generalized_dickman_ranks(dde::DdeSpec::generalized_dickman(*rank, x_max, tol));
        value = ranks.back()(x);
        if (x > 1.0) resid = ranks.back().residual(x, *rank > 1 ? &ranks[*rank - 2] : nullptr);
      } else {
        double theta = 1.0;
        if (fn == "sigma" || fn == "sigma-tilde") theta = 0.5;
        if (fn == "g") {
          if (!theta_text) throw DomainError("eval: --fn g needs --theta");
          theta = parse_number(*theta_text, "--theta");
          rec.parameters.emplace_back("theta", *theta_text);
        }
        if (theta != 1.0 && x <= 0.0) throw DomainError("eval: x must be positive for theta != 1");
        const auto sol = dde::solve(dde::DdeSpec::theta_family(theta, x_max, tol));
        value = fn == "sigma-tilde" ? dde::sigma_tilde(sol, x) : sol(x);
        if (x > 1.0) resid = sol.residual(x);
      }
      rec.values.emplace_back("value", value);
      if (!std::isnan(resid)) rec.errors.emplace_back("residual", std::abs(resid));
      return {rec};
    };
  });

  // cdf
  auto* cdf = app.add_subcommand("cdf", "Limiting distribution functions");
  std::string kind, regime_name = "rayleigh";
  int cdf_rank = 1;
  std::optional<double> pavlov_c;
  std::vector<std::string> a_text, b_text;
  cdf->add_option("--kind", kind)->required()->check(
      CLI::IsMember({"perm-cycle", "largest-component", "mapping-cycle"}));
  cdf->add_option("--r", cdf_rank, "Rank of the cycle");
  cdf->add_option("--regime", regime_name)->check(CLI::IsMember({"rayleigh", "halfnormal", "pavlov", "connected"}));
  cdf->add_option("--c", pavlov_c, "Pavlov exponent");
  cdf->add_option("--a", a_text, "Fractions of n (perm-cycle, largest-component); two values also give the interval");
  cdf->add_option("--b", b_text, "Multiples of sqrt(n) (mapping-cycle); two values also give the interval");
  cdf->callback([&] {
    command = "cdf";
    action = [&]() -> Records {
      const bool mapping = kind == "mapping-cycle";
      const auto& points = mapping ? b_text : a_text;
      const char* flag = mapping ? "--b" : "--a";
      if (points.empty()) throw DomainError(std::string("cdf: ") + kind + " needs " + flag);
      if ((mapping && !a_text.empty()) || (!mapping && !b_text.empty())) {
        throw DomainError(std::string("cdf: ") + kind + " takes only " + flag);
      }
      auto rec = record("cdf", {{"kind", kind}});
      if (kind != "largest-component") rec.parameters.emplace_back("r", std::to_string(cdf_rank));
      std::optional<dist::Regime> regime;
      if (mapping) {
        regime = parse_regime(regime_name, pavlov_c);
        rec.parameters.emplace_back("regime", regime->name());
      }
      std::string joined;
      for (const auto& t : points) joined += (joined.empty() ? "" : ",") + t;
      rec.parameters.emplace_back(flag + 2, joined);
      echo = rec.parameters;
      std::vector<double> vals;
      for (const auto& t : points) {
        const double v = parse_number(t, flag);
        double f = 0.0;
        if (kind == "perm-cycle") f = dist::perm_longest_cycle_cdf(v, cdf_rank);
        else if (kind == "largest-component") f = dist::largest_component_cdf(v);
        else f = dist::mapping_longest_cycle_cdf(v, cdf_rank, *regime);
        rec.values.emplace_back(tag(mapping ? "cdf@b=" : "cdf@a=", v), f);
        vals.push_back(f);
      }
      if (vals.size() == 2) rec.values.emplace_back("interval", std::abs(vals[1] - vals[0]));
      return {rec};
    };
  });

  // constants
  auto* constants = app.add_subcommand("constants", "Moment constants, mode and median");
  std::string const_regime;
  double const_tol = 1e-13;
  bool cross = false;
  constants->add_option("--regime", const_regime)->required()->check(
      CLI::IsMember({"rayleigh", "halfnormal", "connected"}));
  constants->add_option("--tol", const_tol, "Quadrature tolerance");
  constants->add_flag("--cross", cross, "Also emit corr(Lambda_r, Lambda_s)");
  constants->callback([&] {
    command = "constants";
    action = [&]() -> Records {
      auto rec = record("constants", {{"regime", const_regime}, {"tol", format_number(const_tol)}});
      if (const_regime == "connected") {
        const auto m = moments::halfnormal_moments(std::min(const_tol, 1e-14));
        rec.values.emplace_back("mean", m.mean);
        rec.values.emplace_back("variance", m.variance);
        return {rec};
      }
      const auto report = moments::moment_table(parse_regime(const_regime, std::nullopt), const_tol, cross);
      for (const auto& m : report.ranks) {
        const std::string r = std::to_string(m.r);
        rec.values.emplace_back("G" + r + "1", m.g1);
        rec.values.emplace_back("G" + r + "2", m.g2);
      }
      for (const auto& m : report.ranks) rec.values.emplace_back("mean_r" + std::to_string(m.r), m.mean);
      for (const auto& m : report.ranks) rec.values.emplace_back("variance_r" + std::to_string(m.r), m.variance);
      for (const auto& m : report.ranks) rec.values.emplace_back("corr_n_r" + std::to_string(m.r), m.corr_n);
      rec.values.emplace_back("mode", report.mode);
      rec.values.emplace_back("median", report.median);
      for (std::size_t r = 0; r < report.cross.size(); ++r)
        for (std::size_t s = r + 1; s < report.cross.size(); ++s)
          rec.values.emplace_back("corr_r" + std::to_string(r + 1) + "_r" + std::to_string(s + 1),
                                  report.cross[r][s]);
      return {rec};
    };
  });

  // invlaplace
  auto* inv = app.add_subcommand("invlaplace", "Numerical inverse Laplace transform");
  std::string transform, method_name;
  std::string xi_text;
  std::optional<std::string> inv_theta, inv_b;
  double inv_tol = 1e-8;
  inv->add_option("--transform", transform)->required()->check(CLI::IsMember(
      {"dickman", "watterson", "theta", "cycle-cdf", "erfc-gauss", "halfnormal", "rayleigh"}));
  inv->add_option("--xi", xi_text)->required();
  inv->add_option("--theta", inv_theta);
  inv->add_option("--b", inv_b);
  inv->add_option("--method", method_name)->check(CLI::IsMember({"talbot", "bromwich"}));
  inv->add_option("--tol", inv_tol);
  inv->callback([&] {
    command = "invlaplace";
    action = [&]() -> Records {
      const double xi = parse_number(xi_text, "--xi");
      auto rec = record("invlaplace", {{"transform", transform}, {"xi", xi_text}});
      laplace::TransformSpec spec;
      if (transform == "dickman") spec = laplace::TransformSpec::dickman();
      else if (transform == "watterson") spec = laplace::TransformSpec::watterson();
      else if (transform == "theta") {
        if (!inv_theta) throw DomainError("invlaplace: theta needs --theta");
        spec = laplace::TransformSpec::theta_family(parse_number(*inv_theta, "--theta"));
        rec.parameters.emplace_back("theta", *inv_theta);
      } else if (transform == "cycle-cdf") {
        if (!inv_b) throw DomainError("invlaplace: cycle-cdf needs --b");
        spec = laplace::TransformSpec::cycle_cdf(parse_number(*inv_b, "--b"));
        rec.parameters.emplace_back("b", *inv_b);
      } else if (transform == "erfc-gauss") spec = laplace::TransformSpec::erfc_gauss();
      else if (transform == "halfnormal") spec = laplace::TransformSpec::halfnormal();
      else spec = laplace::TransformSpec::rayleigh();
      auto method = laplace::Method::automatic;
      if (method_name == "talbot") method = laplace::Method::talbot;
      if (method_name == "bromwich") method = laplace::Method::bromwich;
      if (!method_name.empty()) rec.parameters.emplace_back("method", method_name);
      rec.parameters.emplace_back("tol", format_number(inv_tol));
      const auto r = laplace::invert(spec, xi, method, inv_tol);
      rec.values.emplace_back("value", r.value);
      rec.values.emplace_back("nodes", r.nodes);
      rec.errors.emplace_back("value", r.error);
      return {rec};
    };
  });

  // simulate
  auto* simc = app.add_subcommand("simulate", "Monte Carlo over random mappings");
  std::size_t sim_n = 0, trials = 0;
  std::string constraint_text = "none";
  std::uint64_t seed = 0;
  std::optional<unsigned> workers;
  double budget = 1e4;
  std::vector<double> ecdf_points{0.4, 0.6842, 1.0, 1.5};
  simc->add_option("--n", sim_n)->required();
  simc->add_option("--trials", trials)->required();
  simc->add_option("--constraint", constraint_text, "none, connected or components=M");
  simc->add_option("--seed", seed)->required();
  simc->add_option("--workers", workers, "Worker threads (default $RMAP_WORKERS or 1)");
  simc->add_option("--budget-factor", budget, "Rejection cap multiplier");
  simc->add_option("--ecdf", ecdf_points, "b values for the empirical CDF of Lambda_1/sqrt(n)");
  simc->callback([&] {
    command = "simulate";
    action = [&]() -> Records {
      sim::SimConfig cfg;
      cfg.n = sim_n;
      cfg.trials = trials;
      cfg.constraint = sim::Constraint::parse(constraint_text);
      cfg.seed = seed;
      cfg.workers = workers ? *workers : default_workers();
      cfg.budget_factor = budget;
      cfg.ecdf_points = ecdf_points;
      auto rec = record("simulate", {{"n", std::to_string(sim_n)},
                                          {"trials", std::to_string(trials)},
                                          {"constraint", cfg.constraint.name()},
                                          {"workers", std::to_string(cfg.workers)}});
      rec.seed = echo_seed = seed;
      const auto s = sim::simulate(cfg);
      for (const auto& st : s.stats) {
        rec.values.emplace_back(st.name + ".mean", st.mean);
        rec.values.emplace_back(st.name + ".variance", st.variance);
        rec.errors.emplace_back(st.name + ".mean", st.std_error);
      }
      for (int r = 1; r <= 4; ++r) {
        const std::string lr = "lambda" + std::to_string(r);
        rec.values.emplace_back("corr." + lr + ".cyclic_points", s.corr(lr, "cyclic_points"));
        for (int q = r + 1; q <= 4; ++q) {
          const std::string lq = "lambda" + std::to_string(q);
          rec.values.emplace_back("corr." + lr + "." + lq, s.corr(lr, lq));
        }
      }
      for (std::size_t k = 0; k < s.ecdf.size(); ++k) rec.values.emplace_back(tag("ecdf@b=", ecdf_points[k]), s.ecdf[k]);
      rec.values.emplace_back("acceptance_rate", s.acceptance_rate);
      rec.values.emplace_back("attempts", static_cast<double>(s.attempts));
      return {rec};
    };
  });

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Exhaustive tallies over all n^n mappings");
  int enum_n = 0;
  bool check_egf = false;
  std::optional<unsigned> enum_workers;
  en->add_option("--n", enum_n)->required();
  en->add_flag("--check-egf", check_egf, "Compare with the generating-function counts");
  en->add_option("--workers", enum_workers);
  en->callback([&] {
    command = "enumerate";
    action = [&]() -> Records {
      auto rec = record("enumerate", {{"n", std::to_string(enum_n)}});
      const auto t = exact::enumerate_all(enum_n, enum_workers ? *enum_workers : default_workers());
      rec.values.emplace_back("total", static_cast<double>(t.total));
      rec.values.emplace_back("connected_count", static_cast<double>(t.connected_count));
      rec.values.emplace_back("mean_lambda1", t.mean_lambda1());
      rec.values.emplace_back("interplay_probability", t.interplay_probability());
      for (int m = 1; m <= enum_n; ++m)
        for (int l = m; l <= enum_n; ++l)
          rec.values.emplace_back("a_" + std::to_string(m) + "_" + std::to_string(l),
                                  static_cast<double>(t.counts.a[m][l]));
      if (check_egf) rec.checks.emplace_back("match", gf::count_table(enum_n).a == t.counts.a);
      return {rec};
    };
  });

  // trend
  auto* trend = app.add_subcommand("trend", "Finite-n weighted sums of a_nml against their asymptotics");
  int trend_max = 12;
  trend->add_option("--n-max", trend_max, "Largest n (<= 12)");
  trend->callback([&] {
    command = "trend";
    action = [&]() -> Records {
      Records rs;
      for (const auto& row : gf::weighted_sum_trend(trend_max)) {
        auto rec = record("trend", {{"n", std::to_string(row.n)}, {"m", std::to_string(row.m)}});
        rec.values.emplace_back("weighted", row.weighted);
        rec.values.emplace_back("asymptote", row.asymptote);
        rec.values.emplace_back("ratio", row.ratio);
        rs.push_back(rec);
      }
      return rs;
    };
  });

  // divisibility
  auto* div = app.add_subcommand("divisibility", "Bounds and approximations for the Rayleigh transform");
  double eta_min = 0.0, eta_max = 0.0;
  int steps = 0;
  bool rows = false;
  div->add_option("--eta-min", eta_min)->required();
  div->add_option("--eta-max", eta_max)->required();
  div->add_option("--steps", steps)->required();
  div->add_flag("--rows", rows, "Emit one record per grid point");
  div->callback([&] {
    command = "divisibility";
    action = [&]() -> Records {
      if (!(eta_min > 0.0 && eta_max >= eta_min) || steps < 1) {
        throw DomainError("divisibility: need 0 < eta-min <= eta-max and steps >= 1");
      }
      std::vector<double> grid;
      for (int i = 0; i < steps; ++i) {
        grid.push_back(steps == 1 ? eta_min : eta_min + (eta_max - eta_min) * i / (steps - 1));
      }
      const auto rep = laplace::divisibility_report(grid);
      const std::vector<std::pair<std::string, std::string>> params{
          {"eta_min", format_number(eta_min)}, {"eta_max", format_number(eta_max)}, {"steps", std::to_string(steps)}};
      Records rs;
      auto sum = record("divisibility", params);
      sum.values.emplace_back("max_approx_rel_error", rep.max_approx_rel_error);
      sum.values.emplace_back("max_inverse_error", rep.max_inverse_error);
      sum.values.emplace_back("root_inverse_small", rep.root_inverse_small);
      sum.values.emplace_back("root_inverse_one", rep.root_inverse_one);
      sum.values.emplace_back("root_ratio", rep.root_ratio);
      sum.checks.emplace_back("bounds_hold", rep.all_bounds_hold);
      rs.push_back(sum);
      if (rows) {
        for (const auto& r : rep.rows) {
          auto rec = record("divisibility.row", {{"eta", format_number(r.eta)}});
          rec.values.emplace_back("lower", r.lower);
          rec.values.emplace_back("center", r.center);
          rec.values.emplace_back("upper", r.upper);
          rec.values.emplace_back("approx_rel_error", r.approx_rel_error);
          rec.errors.emplace_back("lower_inverse", r.lower_inverse_error);
          rec.errors.emplace_back("upper_inverse", r.upper_inverse_error);
          rec.checks.emplace_back("bounds_hold", r.bounds_hold);
          rs.push_back(rec);
        }
      }
      return rs;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  ctx.format = format == "csv" ? Format::csv : Format::json;

  Emitter emitter(ctx);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  auto fail = [&](const std::string& reason, int code) {
    OutputRecord r = make_record(command, echo);
    r.seed = echo_seed;
    r.status = "error";
    r.reason = reason;
    emitter.emit({r}, elapsed());
    if (!ctx.quiet) err << "rmap " << command << ": " << reason << "\n";
    return code;
  };
  try {
    const auto records = action();
    emitter.emit(records, elapsed());
    return 0;
  } catch (const DomainError& e) {
    return fail(e.what(), 2);
  } catch (const MethodMismatchError& e) {
    return fail(e.what(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), 1);
  }
}

}  // namespace rmap::cli

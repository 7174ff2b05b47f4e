#pragma once

// Loader and regression runner for the fixtures catalog (JSON).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "logharm/criteria.hpp"
#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/maps.hpp"
#include "logharm/norms.hpp"

#ifndef LOGHARM_CATALOG_PATH
#define LOGHARM_CATALOG_PATH "fixtures/catalog.json"
#endif

namespace logharm {

inline constexpr const char* kDefaultCatalogPath = LOGHARM_CATALOG_PATH;

struct Expectation {
  std::string quantity;
  std::optional<Complex> value;    // numeric expectations
  std::optional<Verdict> verdict;  // verdict expectations
  double tolerance = 0.0;
  bool relative = false;
  Complex eps{1.0, 0.0};
  Complex z{};
  std::string provenance;
  std::string location;
};

struct Fixture {
  std::string name;
  std::string description;
  std::variant<Expr, LogHarmonicMap> target;
  std::string h_text, g_text, expr_text;
  std::optional<std::string> omega_text;
  std::vector<Expectation> expect;
};

struct ExpectationResult {
  Expectation expectation;
  std::optional<Complex> computed;
  std::optional<Verdict> computed_verdict;
  Complex witness{};
  bool passed = false;
  std::string note;
};

struct FixtureResult {
  std::string name;
  std::vector<ExpectationResult> rows;
  bool passed = true;
};

namespace detail {

inline Complex json_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  raise(ErrorKind::InvalidArgument, "expected a number or [re, im]");
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "inconclusive") return Verdict::Inconclusive;
  raise(ErrorKind::InvalidArgument, "unknown verdict '" + s + "'");
}

inline Fixture parse_fixture(const nlohmann::json& j) {
  Fixture fx;
  fx.name = j.at("name").get<std::string>();
  fx.description = j.value("description", "");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "expr") {
    fx.expr_text = j.at("expr").get<std::string>();
    fx.target = parse(fx.expr_text);
  } else if (kind == "map") {
    fx.h_text = j.at("h").get<std::string>();
    fx.g_text = j.at("g").get<std::string>();
    fx.target = LogHarmonicMap::from_strings(j.at("m").get<int>(), json_complex(j.at("beta")),
                                             fx.h_text, fx.g_text);
  } else {
    raise(ErrorKind::InvalidArgument, "unknown fixture kind '" + kind + "'");
  }
  if (j.contains("omega")) fx.omega_text = j["omega"].get<std::string>();
  for (const auto& e : j.at("expect")) {
    Expectation x;
    x.quantity = e.at("quantity").get<std::string>();
    if (e.contains("value")) x.value = json_complex(e["value"]);
    if (e.contains("verdict")) x.verdict = parse_verdict(e["verdict"].get<std::string>());
    if (!x.value && !x.verdict) raise(ErrorKind::InvalidArgument, "expectation without value or verdict");
    x.tolerance = e.value("tolerance", 0.0);
    x.relative = e.value("relative", false);
    if (e.contains("eps")) x.eps = json_complex(e["eps"]);
    if (e.contains("z")) x.z = json_complex(e["z"]);
    x.provenance = e.value("provenance", "");
    x.location = e.value("location", "");
    fx.expect.push_back(std::move(x));
  }
  return fx;
}

}  // namespace detail

inline std::vector<Fixture> load_catalog(const std::string& path = kDefaultCatalogPath) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoFailure, "cannot open fixtures catalog '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::IoFailure, std::string("malformed fixtures catalog: ") + e.what());
  }
  std::vector<Fixture> out;
  for (const auto& j : doc.at("fixtures")) out.push_back(detail::parse_fixture(j));
  return out;
}

inline const Fixture& find_fixture(const std::vector<Fixture>& catalog, const std::string& name) {
  for (const auto& f : catalog)
    if (f.name == name) return f;
  raise(ErrorKind::InvalidArgument, "unknown fixture '" + name + "'");
}

namespace detail {

// Norms reused across the expectations of one fixture.
class NormCache {
 public:
  NormCache(const GridSpec& grid, int workers) : grid_(grid), workers_(workers) {}

  double get(const std::string& key, const std::function<NormEstimate()>& compute) {
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, compute()).first;
    return it->second.diverged ? std::numeric_limits<double>::infinity() : it->second.value;
  }
  const GridSpec& grid() const { return grid_; }
  int workers() const { return workers_; }

 private:
  GridSpec grid_;
  int workers_;
  std::map<std::string, NormEstimate> cache_;
};

inline std::string eps_key(Complex e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", e.real(), e.imag());
  return buf;
}

inline const LogHarmonicMap& need_map(const Fixture& fx) {
  if (const auto* f = std::get_if<LogHarmonicMap>(&fx.target)) return *f;
  raise(ErrorKind::InvalidArgument, "quantity needs a log-harmonic fixture");
}

inline const Expr& need_expr(const Fixture& fx) {
  if (const auto* e = std::get_if<Expr>(&fx.target)) return *e;
  raise(ErrorKind::InvalidArgument, "quantity needs an analytic fixture");
}

inline void evaluate(const Fixture& fx, ExpectationResult& row, NormCache& cache) {
  const Expectation& x = row.expectation;
  const GridSpec& grid = cache.grid();
  const int workers = cache.workers();
  auto map_norm_of = [&](const std::string& key, auto fn) { return cache.get(key, fn); };
  const std::string& q = x.quantity;

  if (q == "pre_schwarzian_norm") {
    row.computed = map_norm_of("P", [&] { return pre_schwarzian_norm(need_map(fx), grid, workers); });
  } else if (q == "schwarzian_norm") {
    row.computed = map_norm_of("S", [&] { return schwarzian_norm(need_map(fx), grid, workers); });
  } else if (q == "hg_eps_norm") {
    row.computed = map_norm_of("hg" + eps_key(x.eps),
                               [&] { return hg_epsilon_norm(need_map(fx), x.eps, grid, workers); });
  } else if (q == "bloch_log_g") {
    row.computed = map_norm_of("B", [&] { return bloch_norm_log(need_map(fx).g(), grid, workers); });
  } else if (q == "gap") {
    const double pf = map_norm_of("P", [&] { return pre_schwarzian_norm(need_map(fx), grid, workers); });
    const double ph = map_norm_of("hg" + eps_key(x.eps),
                                  [&] { return hg_epsilon_norm(need_map(fx), x.eps, grid, workers); });
    row.computed = std::abs(pf - ph);
  } else if (q == "analytic_pre_schwarzian_norm") {
    row.computed = map_norm_of("aP", [&] { return analytic_pre_schwarzian_norm(need_expr(fx), grid, workers); });
  } else if (q == "analytic_schwarzian_norm") {
    row.computed = map_norm_of("aS", [&] { return analytic_schwarzian_norm(need_expr(fx), grid, workers); });
  } else if (q == "pre_schwarzian") {
    row.computed = pre_schwarzian(need_map(fx), x.z);
  } else if (q == "dilatation") {
    row.computed = dilatation(need_map(fx), x.z);
  } else if (q == "value") {
    row.computed = need_map(fx).value(x.z);
  } else if (q == "beta") {
    row.computed = need_map(fx).beta();
  } else {
    CheckReport rep;
    if (q == "becker") {
      rep = becker_check(need_expr(fx), grid, workers);
    } else if (q == "starlike") {
      rep = std::holds_alternative<Expr>(fx.target) ? analytic_starlike_check(need_expr(fx), grid, workers)
                                                    : starlike_check(need_map(fx), grid, workers);
    } else if (q == "phi_starlike") {
      rep = theorem_a_phi(need_map(fx), grid, workers).starlike;
    } else if (q == "schwarz_pick") {
      if (!fx.omega_text) raise(ErrorKind::InvalidArgument, "schwarz_pick needs an omega expression");
      rep = schwarz_pick_check(parse(*fx.omega_text), grid, workers);
    } else {
      raise(ErrorKind::InvalidArgument, "unknown quantity '" + q + "'");
    }
    row.computed_verdict = rep.verdict;
    row.witness = rep.worst_point;
    row.note = rep.message;
  }
}

}  // namespace detail

inline bool expectation_met(const ExpectationResult& row) {
  const Expectation& x = row.expectation;
  if (x.verdict) return row.computed_verdict && *row.computed_verdict == *x.verdict;
  if (!row.computed || !x.value) return false;
  const double err = std::abs(*row.computed - *x.value);
  const double tol = x.relative ? x.tolerance * std::abs(*x.value) : x.tolerance;
  return std::isfinite(err) && err <= tol;
}

inline FixtureResult run_fixture(const Fixture& fx, const GridSpec& grid = {},
                                 int workers = default_worker_count()) {
  FixtureResult out;
  out.name = fx.name;
  detail::NormCache cache(grid, workers);
  for (const auto& x : fx.expect) {
    ExpectationResult row;
    row.expectation = x;
    try {
      detail::evaluate(fx, row, cache);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      row.note = e.what();
    }
    row.passed = expectation_met(row);
    out.passed = out.passed && row.passed;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace logharm

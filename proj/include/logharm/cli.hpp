#pragma once

// Command-line front end. run() never calls exit(); it returns
//   0  success / pass
//   1  fail or inconclusive verdict
//   2  usage or evaluation error

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logharm/criteria.hpp"
#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/fixtures.hpp"
#include "logharm/maps.hpp"
#include "logharm/norms.hpp"
#include "logharm/render.hpp"

namespace logharm::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "re,im" or a bare real.
inline Complex parse_complex(std::string_view s) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  auto real = [&](std::string_view t) {
    t = trim(t);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v))
      throw UsageError("malformed complex number '" + std::string(s) + "'");
    return v;
  };
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return {real(s), 0.0};
  return {real(s.substr(0, comma)), real(s.substr(comma + 1))};
}

inline json num(double x) {
  if (std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  return "diverged";
}

inline json cnum(Complex c) { return json::array({num(c.real()), num(c.imag())}); }

inline json grid_json(const GridSpec& g) {
  return {{"radial_levels", g.radial_levels},
          {"r_max", g.r_max},
          {"angular_count", g.angular_count},
          {"refine_rounds", g.refine_rounds},
          {"r_min", g.r_min},
          {"samples", g.sample_count()}};
}

inline json norm_json(const NormEstimate& n) {
  json j;
  j["value"] = n.diverged ? json("diverged") : num(n.value);
  j["argmax"] = cnum(n.argmax);
  j["diverged"] = n.diverged;
  j["flagged"] = n.flagged;
  j["samples"] = n.samples;
  j["skipped"] = n.skipped;
  json rounds = json::array();
  for (double v : n.round_values) rounds.push_back(num(v));
  j["round_values"] = rounds;
  j["grid"] = grid_json(n.grid);
  return j;
}

inline json report_json(const CheckReport& r) {
  json j;
  j["criterion"] = r.criterion;
  j["verdict"] = std::string(to_string(r.verdict));
  j["worst_point"] = cnum(r.worst_point);
  j["worst_margin"] = num(r.worst_margin);
  j["samples"] = r.samples;
  j["skipped"] = r.skipped;
  j["message"] = r.message;
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = num(v);
  j["values"] = values;
  return j;
}

inline json gap_json(const GapReport& g) {
  json j;
  j["criterion"] = g.criterion;
  j["verdict"] = std::string(to_string(g.verdict));
  j["norm_f"] = norm_json(g.norm_f);
  j["norm_other"] = norm_json(g.norm_other);
  if (g.bloch_log_g) j["bloch_log_g"] = norm_json(*g.bloch_log_g);
  j["gap"] = num(g.gap);
  j["bound"] = num(g.bound);
  if (g.loose_bound) j["loose_bound"] = num(*g.loose_bound);
  j["message"] = g.message;
  return j;
}

inline json error_json(const Error& e) {
  json j;
  j["kind"] = std::string(to_string(e.kind()));
  j["message"] = e.what();
  if (e.point()) j["point"] = cnum(*e.point());
  if (e.offset()) j["offset"] = *e.offset();
  return {{"error", j}};
}

inline int verdict_exit(Verdict v) { return v == Verdict::Pass ? kExitOk : kExitFail; }

struct Options {
  int m = 0;
  std::string beta = "0";
  std::string h, g, expr, omega, psi;
  std::string eps = "1";
  std::string z = "0";
  std::string op = "value";
  std::string kind = "preschwarzian";
  std::string name;
  std::string action;
  std::string fixture;
  int radial_levels = 40;
  int angular = 512;
  double r_max = 1.0 - 1e-6;
  int refine = 3;
  int radial = 64;
  int samples = 200;
  int width = 512, height = 512;
  bool field = false;
  std::string format = "json";
  std::string out;
  int threads = 0;
  std::string catalog = kDefaultCatalogPath;

  // which flags the user actually gave
  bool h_set = false, g_set = false, expr_set = false;
  bool angular_set = false, r_max_set = false;
};

class Runner {
 public:
  Runner(Options o, std::ostream& out, std::ostream& err) : o_(std::move(o)), out_(out), err_(err) {}

  int eval();
  int norm();
  int check();
  int fixtures();
  int render();
  int profile();

 private:
  bool has_map() const { return o_.h_set || o_.g_set; }
  bool has_expr() const { return o_.expr_set; }

  int workers() const { return o_.threads > 0 ? o_.threads : default_worker_count(); }

  GridSpec grid() const {
    GridSpec gs;
    gs.radial_levels = o_.radial_levels;
    gs.angular_count = o_.angular;
    gs.r_max = o_.r_max;
    gs.refine_rounds = o_.refine;
    try {
      gs.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return gs;
  }

  void require_single_target() const {
    if (has_map() && has_expr()) throw UsageError("give either --h/--g or --expr, not both");
    if (!has_map() && !has_expr()) throw UsageError("a target is required: --h and --g, or --expr");
  }

  LogHarmonicMap map() const {
    if (has_expr()) throw UsageError("this operation needs a log-harmonic map (--h, --g)");
    if (!o_.h_set || !o_.g_set)
      throw UsageError("both --h and --g are required");
    return LogHarmonicMap::from_strings(o_.m, parse_complex(o_.beta), o_.h, o_.g);
  }

  Expr expr() const {
    if (has_map()) throw UsageError("this operation needs an analytic expression (--expr)");
    if (!has_expr()) throw UsageError("--expr is required");
    return parse(o_.expr);
  }

  std::variant<Expr, LogHarmonicMap> target() const {
    require_single_target();
    if (has_expr()) return expr();
    return map();
  }

  json inputs() const {
    json j;
    if (has_expr()) j["expr"] = o_.expr;
    if (has_map()) {
      j["m"] = o_.m;
      j["beta"] = cnum(parse_complex(o_.beta));
      if (!o_.h.empty()) j["h"] = o_.h;
      if (!o_.g.empty()) j["g"] = o_.g;
    }
    return j;
  }

  void emit(const json& j) {
    std::ostringstream s;
    if (o_.format == "text") {
      text(j, "", s);
    } else {
      s << j.dump(2) << '\n';
    }
    if (o_.out.empty()) {
      out_ << s.str();
    } else {
      std::ofstream f(o_.out);
      if (!f) raise(ErrorKind::IoFailure, "cannot open '" + o_.out + "' for writing");
      f << s.str();
    }
  }

  static void text(const json& j, const std::string& prefix, std::ostream& s) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) text(v, prefix.empty() ? k : prefix + "." + k, s);
    } else {
      s << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
  }

  Options o_;
  std::ostream& out_;
  std::ostream& err_;
};

inline int Runner::eval() {
  const Complex z = parse_complex(o_.z);
  json rep;
  rep["command"] = "eval";
  rep["inputs"] = inputs();
  rep["inputs"]["op"] = o_.op;
  rep["inputs"]["z"] = cnum(z);
  const std::string& op = o_.op;
  if (has_expr() && !has_map()) {
    const Expr e = expr();
    if (op == "value") {
      rep["value"] = cnum(e(z));
    } else if (op == "jet") {
      const Jet3 j = eval_jet(e, z);
      rep["value"] = json::array({cnum(j[0]), cnum(j[1]), cnum(j[2]), cnum(j[3])});
    } else if (op == "preschwarzian") {
      rep["value"] = cnum(analytic_pre_schwarzian(e, z));
    } else if (op == "schwarzian") {
      rep["value"] = cnum(analytic_schwarzian(e, z));
    } else if (op == "wirtinger") {
      const auto [dz, dzbar] = wirtinger_pair(e, z);
      rep["f_z"] = cnum(dz);
      rep["f_zbar"] = cnum(dzbar);
      rep["value"] = cnum(e(z));
    } else {
      throw UsageError("op '" + op + "' is not available for an analytic expression");
    }
  } else {
    const LogHarmonicMap f = map();
    if (op == "value") {
      rep["value"] = cnum(f.value(z));
    } else if (op == "dilatation") {
      rep["value"] = cnum(dilatation(f, z));
    } else if (op == "jacobian") {
      rep["value"] = num(jacobian(f, z));
    } else if (op == "wirtinger") {
      const Wirtinger w = wirtinger(f, z);
      rep["f_z"] = cnum(w.f_z);
      rep["f_zbar"] = cnum(w.f_zbar);
      rep["value"] = cnum(w.f_val);
    } else if (op == "preschwarzian") {
      rep["value"] = cnum(pre_schwarzian(f, z));
    } else if (op == "schwarzian") {
      rep["value"] = cnum(schwarzian(f, z));
    } else if (op == "phi") {
      const PhiDerivatives p = phi_family(f, z);
      rep["P_phi"] = cnum(p.P_phi);
      rep["S_phi"] = cnum(p.S_phi);
    } else if (op == "hg-eps") {
      const Complex eps = parse_complex(o_.eps);
      rep["inputs"]["eps"] = cnum(eps);
      rep["value"] = cnum(hg_epsilon_pre_schwarzian(f, eps, z));
    } else if (op == "dbar-preschwarzian") {
      rep["value"] = cnum(dbar_pre_schwarzian(f, z));
    } else if (op == "dbar-schwarzian") {
      rep["value"] = cnum(dbar_schwarzian(f, z));
    } else if (op == "compose") {
      if (o_.psi.empty()) throw UsageError("--psi is required for op compose");
      rep["inputs"]["psi"] = o_.psi;
      rep["value"] = cnum(compose_with_analytic(f, parse(o_.psi), z));
    } else {
      throw UsageError("unknown op '" + op + "'");
    }
  }
  emit(rep);
  return kExitOk;
}

inline int Runner::norm() {
  const GridSpec gs = grid();
  json rep;
  rep["command"] = "norm";
  rep["inputs"] = inputs();
  rep["inputs"]["kind"] = o_.kind;
  NormEstimate est;
  const std::string& k = o_.kind;
  if (k == "bloch-log") {
    if (has_expr() || !o_.g_set) throw UsageError("bloch-log needs --g");
    est = bloch_norm_log(parse(o_.g), gs, workers());
  } else if (k == "preschwarzian" || k == "schwarzian") {
    const auto t = target();
    if (const auto* e = std::get_if<Expr>(&t)) {
      est = k == "preschwarzian" ? analytic_pre_schwarzian_norm(*e, gs, workers())
                                 : analytic_schwarzian_norm(*e, gs, workers());
    } else {
      const auto& f = std::get<LogHarmonicMap>(t);
      est = k == "preschwarzian" ? pre_schwarzian_norm(f, gs, workers()) : schwarzian_norm(f, gs, workers());
    }
  } else if (k == "hg-eps") {
    const Complex eps = parse_complex(o_.eps);
    rep["inputs"]["eps"] = cnum(eps);
    est = hg_epsilon_norm(map(), eps, gs, workers());
  } else {
    throw UsageError("unknown norm kind '" + k + "'");
  }
  rep["norm"] = norm_json(est);
  rep["value"] = rep["norm"]["value"];
  emit(rep);
  return kExitOk;
}

inline int Runner::check() {
  const GridSpec gs = grid();
  json rep;
  rep["command"] = "check";
  rep["inputs"] = inputs();
  rep["inputs"]["name"] = o_.name;
  rep["grid"] = grid_json(gs);
  const std::string& n = o_.name;
  int code = kExitOk;
  if (n == "becker" || n == "nehari") {
    const CheckReport r = n == "becker" ? becker_check(expr(), gs, workers()) : nehari_check(expr(), gs, workers());
    rep["report"] = report_json(r);
    code = verdict_exit(r.verdict);
  } else if (n == "th4") {
    const Complex eps = parse_complex(o_.eps);
    rep["inputs"]["eps"] = cnum(eps);
    const Th4Report r = th4_condition(map(), eps, gs, workers());
    rep["report"] = report_json(r.condition);
    rep["becker_hg_eps"] = report_json(r.becker_hg_eps);
    code = verdict_exit(r.condition.verdict);
  } else if (n == "gap-th0" || n == "gap-th1") {
    GapReport r;
    if (n == "gap-th0") {
      r = gap_th0(map(), gs, workers());
    } else {
      const Complex eps = parse_complex(o_.eps);
      rep["inputs"]["eps"] = cnum(eps);
      r = gap_th1(map(), eps, gs, workers());
    }
    rep["report"] = gap_json(r);
    code = verdict_exit(r.verdict);
  } else if (n == "cor-th5") {
    const Cor5Report r = cor_th5_bound(map(), gs, workers());
    rep["hypothesis"] = report_json(r.hypothesis);
    if (r.norm_f) rep["norm_f"] = norm_json(*r.norm_f);
    rep["verdict"] = std::string(to_string(r.verdict));
    rep["message"] = r.message;
    code = verdict_exit(r.verdict);
  } else if (n == "starlike") {
    const auto t = target();
    const CheckReport r = std::holds_alternative<Expr>(t)
                              ? analytic_starlike_check(std::get<Expr>(t), gs, workers())
                              : starlike_check(std::get<LogHarmonicMap>(t), gs, workers());
    rep["report"] = report_json(r);
    code = verdict_exit(r.verdict);
  } else if (n == "theorem-a") {
    const PhiReport r = theorem_a_phi(map(), gs, workers());
    rep["phi"] = r.phi.to_string();
    rep["report"] = report_json(r.starlike);
    code = verdict_exit(r.starlike.verdict);
  } else if (n == "schwarz-pick") {
    if (o_.omega.empty()) throw UsageError("--omega is required for schwarz-pick");
    rep["inputs"]["omega"] = o_.omega;
    const CheckReport r = schwarz_pick_check(parse(o_.omega), gs, workers());
    rep["report"] = report_json(r);
    code = verdict_exit(r.verdict);
  } else if (n == "injectivity") {
    const InjectivityProbe p = injectivity_probe(expr(), 100, 100);
    rep["report"] = {{"injective", p.injective},
                     {"points", p.points},
                     {"min_separation", num(p.min_separation)},
                     {"closest_pair", json::array({cnum(p.a), cnum(p.b)})}};
    code = p.injective ? kExitOk : kExitFail;
  } else {
    throw UsageError("unknown check '" + n + "'");
  }
  emit(rep);
  return code;
}

inline int Runner::fixtures() {
  const auto catalog = load_catalog(o_.catalog);
  json rep;
  rep["command"] = "fixtures";
  rep["catalog"] = o_.catalog;
  if (o_.action == "list") {
    json list = json::array();
    for (const auto& f : catalog) {
      json q = json::array();
      for (const auto& x : f.expect) q.push_back(x.quantity);
      list.push_back({{"name", f.name}, {"description", f.description}, {"quantities", q}});
    }
    rep["fixtures"] = list;
    emit(rep);
    return kExitOk;
  }
  if (o_.action != "run") throw UsageError("fixtures action must be 'list' or 'run'");
  if (o_.fixture.empty()) throw UsageError("fixtures run needs a fixture name or 'all'");
  std::vector<const Fixture*> selected;
  if (o_.fixture == "all") {
    for (const auto& f : catalog) selected.push_back(&f);
  } else {
    try {
      selected.push_back(&find_fixture(catalog, o_.fixture));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const GridSpec gs = grid();
  rep["grid"] = grid_json(gs);
  json results = json::array();
  bool all = true;
  for (const Fixture* f : selected) {
    const FixtureResult r = run_fixture(*f, gs, workers());
    all = all && r.passed;
    json rows = json::array();
    for (const auto& row : r.rows) {
      const Expectation& x = row.expectation;
      json jr;
      jr["quantity"] = x.quantity;
      if (x.value) {
        jr["expected"] = x.value->imag() == 0.0 ? num(x.value->real()) : cnum(*x.value);
        if (row.computed)
          jr["computed"] = row.computed->imag() == 0.0 && x.value->imag() == 0.0 ? num(row.computed->real())
                                                                                   : cnum(*row.computed);
        jr["tolerance"] = x.tolerance;
        jr["relative"] = x.relative;
      } else {
        jr["expected"] = std::string(to_string(*x.verdict));
        if (row.computed_verdict) jr["computed"] = std::string(to_string(*row.computed_verdict));
        jr["witness"] = cnum(row.witness);
      }
      jr["provenance"] = x.provenance;
      jr["location"] = x.location;
      jr["passed"] = row.passed;
      if (!row.note.empty()) jr["note"] = row.note;
      rows.push_back(jr);
    }
    json jf = {{"name", r.name}, {"passed", r.passed}, {"rows", rows}};
    if (const auto* map = std::get_if<LogHarmonicMap>(&f->target)) {
      jf["m"] = map->m();
      jf["beta"] = cnum(map->beta());
      jf["h"] = f->h_text;
      jf["g"] = f->g_text;
    } else {
      jf["expr"] = f->expr_text;
    }
    results.push_back(jf);
  }
  rep["results"] = results;
  rep["passed"] = all;
  if (o_.format == "text") {
    std::ostringstream s;
    for (const auto& jf : results) {
      s << jf["name"].get<std::string>() << (jf["passed"].get<bool>() ? "  PASS" : "  FAIL") << '\n';
      for (const auto& jr : jf["rows"]) {
        s << "  " << std::left << std::setw(30) << jr["quantity"].get<std::string>() << " expected "
          << std::setw(22) << (jr["expected"].is_string() ? jr["expected"].get<std::string>() : jr["expected"].dump())
          << " computed " << std::setw(22)
          << (!jr.contains("computed") ? std::string("-")
              : jr["computed"].is_string() ? jr["computed"].get<std::string>()
                                           : jr["computed"].dump())
          << ' ' << jr["provenance"].get<std::string>() << (jr["passed"].get<bool>() ? "  ok" : "  MISMATCH")
          << '\n';
      }
    }
    if (o_.out.empty()) out_ << s.str();
    else std::ofstream(o_.out) << s.str();
  } else {
    emit(rep);
  }
  return all ? kExitOk : kExitFail;
}

inline int Runner::render() {
  RenderJob job;
  job.target = target();
  job.radial = o_.radial;
  job.angular = o_.angular_set ? o_.angular : 128;
  job.r_max = o_.r_max_set ? o_.r_max : 0.99;
  job.width = o_.width;
  job.height = o_.height;
  job.color_by_field = o_.field;
  if (o_.format == "ppm") job.format = RenderFormat::Ppm;
  else if (o_.format == "csv" || o_.format == "json") job.format = RenderFormat::Csv;
  else throw UsageError("render format must be csv or ppm");
  if (o_.out.empty()) throw UsageError("render needs --out");
  job.path = o_.out;
  try {
    job.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const RenderSummary s = render_image(job, workers());
  json rep;
  rep["command"] = "render";
  rep["inputs"] = inputs();
  rep["inputs"]["radial"] = job.radial;
  rep["inputs"]["angular"] = job.angular;
  rep["inputs"]["r_max"] = job.r_max;
  rep["output"] = job.path;
  rep["format"] = job.format == RenderFormat::Ppm ? "ppm" : "csv";
  rep["rows"] = s.rows;
  rep["skipped"] = s.skipped;
  rep["bounding_box"] = {{"min_re", num(s.min_re)}, {"max_re", num(s.max_re)},
                         {"min_im", num(s.min_im)}, {"max_im", num(s.max_im)}};
  rep["max_modulus"] = num(s.max_modulus);
  rep["max_modulus_at"] = cnum(s.max_modulus_at);
  out_ << rep.dump(2) << '\n';
  return kExitOk;
}

inline int Runner::profile() {
  const double r_max = o_.r_max;
  ComplexField field;
  int power = 1;
  const std::string& k = o_.kind;
  std::optional<LogHarmonicMap> f;
  std::optional<Expr> e;
  if (k == "bloch-log") {
    if (!o_.g_set) throw UsageError("bloch-log needs --g");
    e = parse(o_.g);
    field = [&e](Complex z) {
      const Jet<1> j = e->jet<1>(z);
      if (j[0] == Complex{}) raise(ErrorKind::ZeroEncountered, "g vanishes", z);
      return j[1] / j[0];
    };
  } else if (k == "preschwarzian" || k == "schwarzian") {
    power = k == "preschwarzian" ? 1 : 2;
    auto t = target();
    if (auto* ex = std::get_if<Expr>(&t)) {
      e = *ex;
      if (power == 1) field = [&e](Complex z) { return analytic_pre_schwarzian(*e, z); };
      else field = [&e](Complex z) { return analytic_schwarzian(*e, z); };
    } else {
      f = std::get<LogHarmonicMap>(t);
      if (power == 1) field = [&f](Complex z) { return pre_schwarzian(*f, z); };
      else field = [&f](Complex z) { return schwarzian(*f, z); };
    }
  } else {
    throw UsageError("unknown profile kind '" + k + "'");
  }
  if (!(r_max > 0.0 && r_max < 1.0)) throw UsageError("--r-max must lie in (0, 1)");
  if (o_.samples < 3) throw UsageError("--samples must be at least 3");
  const RadialProfile p = radial_profile(field, power, o_.samples, r_max);
  if (o_.format == "csv") {
    std::ostringstream s;
    s << "r,value\n";
    char buf[80];
    for (const auto& [r, v] : p.rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r, v);
      s << buf;
    }
    if (o_.out.empty()) out_ << s.str();
    else {
      std::ofstream os(o_.out);
      if (!os) raise(ErrorKind::IoFailure, "cannot open '" + o_.out + "' for writing");
      os << s.str();
    }
    return kExitOk;
  }
  json rep;
  rep["command"] = "profile";
  rep["inputs"] = inputs();
  rep["inputs"]["kind"] = k;
  rep["inputs"]["samples"] = o_.samples;
  rep["inputs"]["r_max"] = r_max;
  json rows = json::array();
  for (const auto& [r, v] : p.rows) rows.push_back(json::array({r, num(v)}));
  rep["rows"] = rows;
  rep["skipped"] = p.skipped;
  rep["monotone_tail"] = p.monotone_tail;
  if (p.monotone_tail) rep["boundary_limit"] = num(p.boundary_limit);
  emit(rep);
  return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pre-Schwarzian and Schwarzian toolkit for log-harmonic mappings", "logharm"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  auto add_target = [&o](CLI::App* sc) {
    sc->add_option("--m", o.m, "vanishing order m >= 0");
    sc->add_option("--beta", o.beta, "beta as re,im or a real");
    sc->add_option("--h", o.h, "analytic factor h(z)");
    sc->add_option("--g", o.g, "analytic factor g(z)");
    sc->add_option("--expr", o.expr, "analytic expression in z");
  };
  auto add_grid = [&o](CLI::App* sc) {
    sc->add_option("--radial-levels", o.radial_levels, "geometric radial levels");
    sc->add_option("--angular", o.angular, "angular sample count");
    sc->add_option("--r-max", o.r_max, "outermost radius");
    sc->add_option("--refine", o.refine, "refinement rounds");
  };
  auto add_common = [&o](CLI::App* sc) {
    sc->add_option("--format", o.format, "json | text | csv | ppm");
    sc->add_option("--out", o.out, "output path");
    sc->add_option("--threads", o.threads, "worker threads (default: LOGHARM_THREADS or hardware)");
  };

  auto* eval = app.add_subcommand("eval", "evaluate a pointwise quantity");
  add_target(eval);
  add_common(eval);
  eval->add_option("--op", o.op,
                   "value | jet | dilatation | jacobian | wirtinger | preschwarzian | schwarzian | phi | "
                   "hg-eps | dbar-preschwarzian | dbar-schwarzian | compose");
  eval->add_option("--z", o.z, "point as re,im");
  eval->add_option("--eps", o.eps, "epsilon for hg-eps");
  eval->add_option("--psi", o.psi, "inner analytic map for compose");

  auto* norm = app.add_subcommand("norm", "weighted sup-norm estimate");
  add_target(norm);
  add_grid(norm);
  add_common(norm);
  norm->add_option("--kind", o.kind, "preschwarzian | schwarzian | hg-eps | bloch-log");
  norm->add_option("--eps", o.eps, "epsilon for hg-eps");

  auto* check = app.add_subcommand("check", "sampled criterion check");
  add_target(check);
  add_grid(check);
  add_common(check);
  check->add_option("--name", o.name,
                    "becker | nehari | th4 | gap-th0 | gap-th1 | cor-th5 | starlike | theorem-a | "
                    "schwarz-pick | injectivity")
      ->required();
  check->add_option("--eps", o.eps, "epsilon");
  check->add_option("--omega", o.omega, "dilatation expression for schwarz-pick");

  auto* fix = app.add_subcommand("fixtures", "list or run the regression catalog");
  add_target(fix);
  add_grid(fix);
  add_common(fix);
  fix->add_option("action", o.action, "list | run")->required();
  fix->add_option("fixture", o.fixture, "fixture name or 'all'");
  fix->add_option("--catalog", o.catalog, "catalog path");

  auto* render = app.add_subcommand("render", "image of the disk as CSV or PPM");
  add_target(render);
  add_grid(render);
  add_common(render);
  render->add_option("--radial", o.radial, "radial mesh count (>= 32)");
  render->add_option("--width", o.width, "PPM width");
  render->add_option("--height", o.height, "PPM height");
  render->add_flag("--field", o.field, "color by (1-|z|^2)|P|");

  auto* profile = app.add_subcommand("profile", "radial profile along the positive real axis");
  add_target(profile);
  add_grid(profile);
  add_common(profile);
  profile->add_option("--kind", o.kind, "preschwarzian | schwarzian | bloch-log");
  profile->add_option("--samples", o.samples, "number of radii");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitError;
  }
  if (o.format != "json" && o.format != "text" && o.format != "csv" && o.format != "ppm") {
    err << "usage error: unknown format '" << o.format << "'\n";
    return kExitError;
  }

  CLI::App* active = app.get_subcommands().front();
  auto given = [active](const char* flag) {
    const CLI::Option* opt = active->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  o.h_set = given("--h");
  o.g_set = given("--g");
  o.expr_set = given("--expr");
  o.angular_set = given("--angular");
  o.r_max_set = given("--r-max");

  Runner runner(o, out, err);
  try {
    if (active == eval) return runner.eval();
    if (active == norm) return runner.norm();
    if (active == check) return runner.check();
    if (active == fix) return runner.fixtures();
    if (active == render) return runner.render();
    return runner.profile();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    out << error_json(e).dump(2) << '\n';
    return kExitError;
  } catch (const nlohmann::json::exception& e) {
    out << json{{"error", {{"kind", "IoFailure"}, {"message", e.what()}}}}.dump(2) << '\n';
    return kExitError;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace logharm::cli

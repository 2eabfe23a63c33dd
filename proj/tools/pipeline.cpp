#include "pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "spectra/closed_form.hpp"
#include "spectra/config.hpp"
#include "spectra/distribution.hpp"
#include "spectra/entropy.hpp"
#include "spectra/envelope.hpp"
#include "spectra/errors.hpp"
#include "spectra/legendre.hpp"
#include "spectra/pressure.hpp"
#include "spectra/schedule.hpp"
#include "spectra/skeleton.hpp"
#include "spectra/tower.hpp"

namespace spectra::cli {
namespace {

using Sections = std::map<std::string, ConfigSection>;

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct Context {
  const RunConfig& cfg;
  std::string config_text;
  Sections sections;
  std::optional<CenterCocycle> model;
  std::uint64_t hash = 0;
  std::uint64_t seed = 1;

  const CenterCocycle& cocycle() const {
    if (!model) throw UsageError("--config is required for '" + cfg.command + "'");
    return *model;
  }

  const ConfigValue* lookup(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double number(const std::optional<double>& flag, const std::string& section, const std::string& key,
                double fallback) const {
    if (flag) return *flag;
    if (const auto* v = lookup(section, key)) {
      if (!v->is_number()) throw ConfigError(v->line, v->column, "[" + section + "] " + key + " must be a number");
      return std::get<double>(v->data);
    }
    return fallback;
  }

  std::optional<double> maybe_number(const std::optional<double>& flag, const std::string& section,
                                     const std::string& key) const {
    if (flag) return flag;
    if (lookup(section, key)) return number(std::nullopt, section, key, 0.0);
    return std::nullopt;
  }

  template <class Int>
  Int integer(const std::optional<Int>& flag, const std::string& section, const std::string& key, Int fallback) const {
    if (flag) return *flag;
    if (const auto* v = lookup(section, key)) {
      const double x = number(std::nullopt, section, key, 0.0);
      if (x < 0 || x != std::floor(x) || x > 9.0e15)
        throw ConfigError(v->line, v->column, "[" + section + "] " + key + " must be a non-negative integer");
      return static_cast<Int>(x);
    }
    return fallback;
  }

  std::string text(const std::optional<std::string>& flag, const std::string& section, const std::string& key,
                   const std::string& fallback) const {
    if (flag) return *flag;
    if (const auto* v = lookup(section, key)) {
      if (!v->is_string()) throw ConfigError(v->line, v->column, "[" + section + "] " + key + " must be a string");
      return std::get<std::string>(v->data);
    }
    return fallback;
  }

  std::vector<double> numbers(const std::optional<std::vector<double>>& flag, const std::string& section,
                              const std::string& key, std::vector<double> fallback) const {
    if (flag) return *flag;
    if (const auto* v = lookup(section, key)) {
      if (!v->is_array()) throw ConfigError(v->line, v->column, "[" + section + "] " + key + " must be an array");
      std::vector<double> out;
      for (const auto& item : std::get<ConfigValue::Array>(v->data)) {
        if (!item.is_number()) throw ConfigError(item.line, item.column, "expected a number");
        out.push_back(std::get<double>(item.data));
      }
      return out;
    }
    return fallback;
  }
};

Context load(const RunConfig& cfg, bool needs_model) {
  Context ctx{cfg, {}, {}, std::nullopt, 0, 1};
  if (cfg.config_path.empty()) {
    if (needs_model) throw UsageError("--config is required for '" + cfg.command + "'");
  } else {
    ctx.config_text = read_text_file(cfg.config_path);
    ctx.sections = parse_config(ctx.config_text);
    ctx.model.emplace(model_from_config(ctx.config_text));
    ctx.hash = fnv1a64(ctx.config_text);
  }
  ctx.seed = ctx.integer<std::uint64_t>(cfg.seed, "run", "seed", 1);
  return ctx;
}

Json header(const Context& ctx, const std::string& command) {
  Json j;
  j["command"] = command;
  j["config_hash"] = hex64(ctx.hash);
  j["seed"] = ctx.seed;
  return j;
}

void finish(Report& r) {
  r.body["status"] = r.failures.empty() ? "ok" : "fail";
  r.body["failures"] = r.failures;
}

Json check_json(const std::string& name, const CheckResult& c) {
  return Json{{"name", name}, {"pass", c.pass}, {"worst", c.worst}, {"detail", c.detail}};
}

void record(Report& r, Json& checks, const std::string& name, const CheckResult& c) {
  checks.push_back(check_json(name, c));
  if (!c.pass) r.failures.push_back(name + ": " + c.detail);
}

Restriction parse_restriction(const std::string& s) {
  if (s == "none") return Restriction::kNone;
  if (s == "negative" || s == "negative_exponent") return Restriction::kNegative;
  if (s == "positive" || s == "positive_exponent") return Restriction::kPositive;
  throw UsageError("restriction must be none, negative or positive, not '" + s + "'");
}

Json big_json(const BigInt& x) {
  std::vector<unsigned char> bytes;
  boost::multiprecision::export_bits(x, std::back_inserter(bytes), 8);
  Json j;
  j["log"] = log_big(x);
  j["fnv1a64"] = hex64(fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
  if (x < BigInt(1) << 120) j["value"] = to_string(x);
  return j;
}

std::vector<double> q_grid(const Context& ctx) {
  const double lo = ctx.number(ctx.cfg.q_min, "pressure", "q_min", -20.0);
  const double hi = ctx.number(ctx.cfg.q_max, "pressure", "q_max", 20.0);
  const auto n = ctx.integer<std::size_t>(ctx.cfg.q_points, "pressure", "points", 401);
  if (!(lo < hi) || n < 3) throw UsageError("the q grid needs q_min < q_max and at least 3 points");
  return linear_grid(lo, hi, n);
}

std::size_t alpha_points(const Context& ctx) {
  const auto n = ctx.integer<std::size_t>(ctx.cfg.alpha_points, "spectrum", "points", 101);
  if (n < 3) throw UsageError("the alpha grid needs at least 3 points");
  return n;
}

int resolution(const Context& ctx) {
  const int j = ctx.integer<int>(ctx.cfg.res_j, "run", "resolution", 0);
  return j;
}

bool is_bernoulli(const CenterCocycle& c) { return c.depth() == 1 && c.system().is_full_shift(); }

std::vector<double> symbol_values(const CenterCocycle& c) {
  std::vector<double> phi;
  for (int s = 0; s < c.alphabet_size(); ++s) {
    const Symbol sym = static_cast<Symbol>(s);
    phi.push_back(c.value(std::span<const Symbol>(&sym, 1)));
  }
  return phi;
}

// --- pressure -----------------------------------------------------------------

Report cmd_pressure(const Context& ctx) {
  Report r;
  r.command = "pressure";
  const auto& c = ctx.cocycle();
  const auto grid = q_grid(ctx);
  const Restriction restriction = parse_restriction(ctx.text(ctx.cfg.restriction, "pressure", "restriction", "none"));
  const PressureCurve p = restriction == Restriction::kNone ? pressure_curve(c, grid)
                                                            : restricted_pressure_curve(c, restriction, grid);
  r.body = header(ctx, r.command);
  r.body["params"] = {{"q_min", grid.front()}, {"q_max", grid.back()}, {"points", grid.size()},
                      {"restriction", to_string(restriction)}};
  const double h_top = topological_entropy(c.system());
  r.body["alpha_min"] = p.alpha_min;
  r.body["alpha_max"] = p.alpha_max;
  r.body["end_slope_min"] = p.end_slope_min;
  r.body["end_slope_max"] = p.end_slope_max;
  r.body["h_top"] = h_top;

  Json checks = Json::array();
  CheckResult convex{true, 0.0, "second differences are non-negative"};
  for (std::size_t i = 1; i + 1 < p.values.size(); ++i) {
    const double d2 = p.values[i - 1] - 2.0 * p.values[i] + p.values[i + 1];
    const double tol = 1e-9 * (1.0 + std::abs(p.values[i]));
    if (d2 < convex.worst) convex.worst = d2;
    if (d2 < -tol) {
      convex.pass = false;
      convex.detail = "negative second difference at q = " + fmt(p.q_grid[i]);
    }
  }
  record(r, checks, "convexity", convex);
  CheckResult slopes{true, 0.0, "slopes lie in [alpha_min, alpha_max]"};
  for (std::size_t i = 0; i < p.slopes.size(); ++i) {
    const double out = std::max(p.alpha_min - p.slopes[i], p.slopes[i] - p.alpha_max);
    slopes.worst = std::max(slopes.worst, out);
    if (out > 1e-9) {
      slopes.pass = false;
      slopes.detail = "slope outside the exponent range at q = " + fmt(p.q_grid[i]);
    }
  }
  record(r, checks, "slope_range", slopes);
  if (restriction == Restriction::kNone)
    for (std::size_t i = 0; i < p.q_grid.size(); ++i)
      if (p.q_grid[i] == 0.0) {
        const double err = std::abs(p.values[i] - h_top);
        record(r, checks, "p0_equals_h_top",
               {err <= 1e-10, err, "|P(0) - h_top| = " + fmt(err)});
      }
  r.body["checks"] = checks;

  Json pts = Json::array();
  r.csv_header = {"q", "pressure", "slope"};
  for (std::size_t i = 0; i < p.q_grid.size(); ++i) {
    pts.push_back({{"q", p.q_grid[i]}, {"pressure", p.values[i]}, {"slope", p.slopes[i]}});
    r.csv_rows.push_back({fmt(p.q_grid[i]), fmt(p.values[i]), fmt(p.slopes[i])});
  }
  r.body["points"] = pts;
  finish(r);
  return r;
}

// --- spectrum -----------------------------------------------------------------

struct SpectrumRun {
  PressureCurve pressure;
  SpectrumCurve curve;
};

SpectrumRun compute_spectrum(const Context& ctx) {
  const auto& c = ctx.cocycle();
  PressureCurve p = pressure_curve(c, q_grid(ctx));
  SpectrumCurve s = spectrum(p, domain_grid(p, alpha_points(ctx)));
  return {std::move(p), std::move(s)};
}

Report cmd_spectrum(const Context& ctx) {
  Report r;
  r.command = "spectrum";
  const auto& c = ctx.cocycle();
  if (ctx.cfg.oracle && !is_bernoulli(c))
    throw UsageError("--oracle needs a depth-1 cocycle on a full shift");
  const auto run = compute_spectrum(ctx);
  const auto& p = run.pressure;
  const auto& s = run.curve;
  r.body = header(ctx, r.command);
  r.body["params"] = {{"q_min", p.q_grid.front()}, {"q_max", p.q_grid.back()}, {"q_points", p.q_grid.size()},
                      {"alpha_points", s.alpha_grid.size()}, {"oracle", ctx.cfg.oracle}};
  r.body["domain"] = {s.domain_min, s.domain_max};
  r.body["h_minus"] = s.h_minus ? Json(*s.h_minus) : Json(nullptr);
  r.body["h_plus"] = s.h_plus ? Json(*s.h_plus) : Json(nullptr);

  Json checks = Json::array();
  record(r, checks, "concavity", check_concavity(s));
  const double width = s.domain_max - s.domain_min;
  const auto outer = linear_grid(s.domain_min - 0.1 * width - 0.1, s.domain_max + 0.1 * width + 0.1,
                                 s.alpha_grid.size() + 20);
  record(r, checks, "domain_interval", check_domain_interval(lf_sweep(p, outer)));
  record(r, checks, "max_equals_p0", check_max_equals_p0(s, p));
  record(r, checks, "nonnegative", check_nonnegative(s));

  std::vector<double> phi;
  if (ctx.cfg.oracle) phi = symbol_values(c);
  double worst = 0.0;
  Json pts = Json::array();
  r.csv_header = {"alpha", "H", "argmin_q"};
  if (ctx.cfg.oracle) {
    r.csv_header.push_back("oracle");
    r.csv_header.push_back("abs_diff");
  }
  for (std::size_t i = 0; i < s.alpha_grid.size(); ++i) {
    Json pt{{"alpha", s.alpha_grid[i]}, {"H", s.values[i]}, {"argmin_q", s.argmin_q[i]}};
    std::vector<std::string> row{fmt(s.alpha_grid[i]), fmt(s.values[i]), fmt(s.argmin_q[i])};
    if (ctx.cfg.oracle) {
      const double o = bernoulli_spectrum(phi, s.alpha_grid[i]).value_or(std::nan(""));
      const double d = std::abs(o - s.values[i]);
      worst = std::isnan(d) ? std::numeric_limits<double>::infinity() : std::max(worst, d);
      pt["oracle"] = o;
      pt["abs_diff"] = d;
      row.push_back(fmt(o));
      row.push_back(fmt(d));
    }
    pts.push_back(pt);
    r.csv_rows.push_back(std::move(row));
  }
  if (ctx.cfg.oracle) {
    r.body["max_abs_diff"] = worst;
    record(r, checks, "oracle", {worst <= 1e-4, worst, "max |H - closed form| = " + fmt(worst)});
  }
  r.body["checks"] = checks;
  r.body["points"] = pts;
  finish(r);
  return r;
}

// --- oracle -------------------------------------------------------------------

Report cmd_oracle(const Context& ctx) {
  Report r;
  r.command = "oracle";
  const auto& c = ctx.cocycle();
  if (!is_bernoulli(c)) throw UsageError("closed forms exist only for depth-1 cocycles on a full shift");
  const auto phi = symbol_values(c);
  const auto qs = q_grid(ctx);
  const auto n = alpha_points(ctx);
  const double lo = *std::min_element(phi.begin(), phi.end());
  const double hi = *std::max_element(phi.begin(), phi.end());
  r.body = header(ctx, r.command);
  r.body["params"] = {{"q_min", qs.front()}, {"q_max", qs.back()}, {"q_points", qs.size()}, {"alpha_points", n}};
  r.csv_header = {"kind", "x", "value"};
  Json spec = Json::array(), pres = Json::array();
  for (double a : linear_grid(lo, hi, n)) {
    const double h = bernoulli_spectrum(phi, a).value_or(std::nan(""));
    spec.push_back({{"alpha", a}, {"H", h}});
    r.csv_rows.push_back({"spectrum", fmt(a), fmt(h)});
  }
  for (double q : qs) {
    const double v = bernoulli_pressure(phi, q);
    pres.push_back({{"q", q}, {"pressure", v}});
    r.csv_rows.push_back({"pressure", fmt(q), fmt(v)});
  }
  r.body["spectrum"] = spec;
  r.body["pressure"] = pres;
  finish(r);
  return r;
}

// --- skeleton -----------------------------------------------------------------

Report cmd_skeleton(const Context& ctx) {
  Report r;
  r.command = "skeleton";
  const auto& c = ctx.cocycle();
  SkeletonParams sp;
  sp.alpha = ctx.number(ctx.cfg.alpha, "skeleton", "alpha", 0.0);
  sp.eps_E = ctx.number(ctx.cfg.eps_E, "skeleton", "eps_E", 0.1);
  sp.eps_H = ctx.number(ctx.cfg.eps_H, "skeleton", "eps_H", 0.05);
  sp.m = ctx.integer<std::size_t>(ctx.cfg.m, "skeleton", "m", 400);
  sp.K0 = ctx.maybe_number(ctx.cfg.K0, "skeleton", "K0");
  sp.res = Resolution{resolution(ctx)};
  const PressureCurve p = pressure_curve(c, q_grid(ctx));
  sp.h_target = lf_transform(p, sp.alpha).value_or(0.0);
  r.body = header(ctx, r.command);
  r.body["params"] = {{"alpha", sp.alpha}, {"eps_E", sp.eps_E}, {"eps_H", sp.eps_H}, {"m", sp.m},
                      {"K0", sp.K0 ? Json(*sp.K0) : Json(nullptr)}, {"resolution", sp.res.depth_j}};
  r.body["h_target"] = sp.h_target;
  Skeleton s;
  try {
    s = extract_preskeleton(c, sp);
  } catch (const EmptyWindow& e) {
    r.body["suggested_K0"] = e.suggested_K0();
    r.failures.push_back(std::string("empty window: ") + e.what());
    finish(r);
    return r;
  }
  std::mt19937_64 rng(ctx.seed);
  const auto v = verify_skeleton(s, c, rng);
  r.body["K0"] = s.K0;
  r.body["cardinality"] = big_json(s.cardinality());
  r.body["certified_rate"] = s.certified_rate;
  r.body["threshold"] = sp.h_target - sp.eps_H;
  r.body["success"] = s.success;
  r.body["verification"] = {{"window_ok", v.window_ok},         {"separation_ok", v.separation_ok},
                            {"edges_checked", v.edges_checked}, {"samples_checked", v.samples_checked},
                            {"detail", v.detail}};
  if (!s.success)
    r.failures.push_back("rate " + fmt(s.certified_rate) + " is below h - eps_H = " + fmt(sp.h_target - sp.eps_H));
  if (!v.ok()) r.failures.push_back("verification: " + v.detail);
  if (!ctx.cfg.words_out.empty()) {
    std::vector<Word> words;
    try {
      words = s.words.materialize(1'000'000);
    } catch (const BudgetExceeded&) {
      throw UsageError("skeleton has more than 10^6 members; not writing --words");
    }
    std::ofstream out(ctx.cfg.words_out);
    if (!out) throw UsageError("cannot write '" + ctx.cfg.words_out + "'");
    for (const auto& w : words) out << w.str() << '\n';
  }
  finish(r);
  return r;
}

// --- schedule -----------------------------------------------------------------

struct ScheduleRun {
  SpectrumRun spec;
  Schedule schedule;
  Json params;
};

Json schedule_json(const Schedule& s) {
  Json j;
  j["sign"] = to_string(s.sign);
  j["h_frak"] = s.h_frak;
  j["C_max"] = s.C_max;
  j["K0"] = s.K0;
  Json levels = Json::array();
  for (std::size_t k = 1; k <= s.depth(); ++k) {
    const auto& L = s.level(k);
    levels.push_back({{"k", k},         {"eps", L.eps},       {"chi", L.chi},        {"h", L.h},
                      {"eps_E", L.eps_E}, {"n", L.n},         {"N", L.N},            {"ell", L.ell},
                      {"m", L.m},         {"ell_flat", L.ell_flat}, {"ell_sharp", L.ell_sharp},
                      {"b_sharp", L.b_sharp}, {"T_sharp", L.T_sharp}, {"log_K", L.log_K}, {"T", L.T}, {"t", L.t}});
  }
  j["levels"] = levels;
  return j;
}

void schedule_csv(Report& r, const Schedule& s) {
  r.csv_header = {"k", "eps", "chi", "h", "n", "N", "ell", "m", "b_sharp", "T", "t"};
  for (std::size_t k = 1; k <= s.depth(); ++k) {
    const auto& L = s.level(k);
    r.csv_rows.push_back({std::to_string(k), fmt(L.eps), fmt(L.chi), fmt(L.h), std::to_string(L.n),
                          std::to_string(L.N), std::to_string(L.ell), std::to_string(L.m),
                          std::to_string(L.b_sharp), std::to_string(L.T), std::to_string(L.t)});
  }
}

ScheduleRun compute_schedule(const Context& ctx) {
  ScheduleRun run{compute_spectrum(ctx), {}, {}};
  auto eps = ctx.numbers(ctx.cfg.eps, "schedule", "eps", {0.4, 0.2, 0.1, 0.05});
  const auto levels = ctx.integer<std::size_t>(ctx.cfg.levels, "schedule", "levels", eps.size());
  if (levels == 0 || levels > eps.size())
    throw UsageError("--levels must be between 1 and the number of eps values (" + std::to_string(eps.size()) + ")");
  eps.resize(levels);
  ScheduleOptions opt;
  opt.sign = parse_restriction(ctx.text(ctx.cfg.sign, "schedule", "sign", "negative"));
  if (opt.sign == Restriction::kNone) throw UsageError("the schedule sign must be negative or positive");
  opt.K0 = ctx.maybe_number(ctx.cfg.K0, "schedule", "K0");
  run.params = {{"q_min", run.spec.pressure.q_grid.front()},
                {"q_max", run.spec.pressure.q_grid.back()},
                {"q_points", run.spec.pressure.q_grid.size()},
                {"alpha_points", run.spec.curve.alpha_grid.size()},
                {"eps", eps},
                {"sign", to_string(opt.sign)},
                {"K0", opt.K0 ? Json(*opt.K0) : Json(nullptr)}};
  run.schedule = build_schedule(ctx.cocycle(), eps, run.spec.curve, opt);
  return run;
}

Json checks_json(Report& r, const std::vector<InequalityCheck>& checks) {
  Json out = Json::array();
  for (const auto& ch : checks) {
    out.push_back({{"name", ch.name}, {"level", ch.level}, {"lhs", ch.lhs}, {"rhs", ch.rhs}, {"pass", ch.pass}});
    if (!ch.pass) r.failures.push_back(ch.name + " fails at level " + std::to_string(ch.level));
  }
  return out;
}

Report infeasible(const Context& ctx, const std::string& command, const InfeasibleSchedule& e) {
  Report r;
  r.command = command;
  r.body = header(ctx, command);
  r.body["infeasible"] = {{"inequality", e.inequality()}, {"level", e.level()}, {"detail", e.what()}};
  r.failures.push_back(std::string("infeasible schedule: ") + e.what());
  finish(r);
  return r;
}

Report cmd_schedule(const Context& ctx) {
  Report r;
  r.command = "schedule";
  ScheduleRun run;
  try {
    run = compute_schedule(ctx);
  } catch (const InfeasibleSchedule& e) {
    return infeasible(ctx, r.command, e);
  }
  r.body = header(ctx, r.command);
  r.body["params"] = run.params;
  r.body["schedule"] = schedule_json(run.schedule);
  r.body["checks"] = checks_json(r, check_schedule(run.schedule));
  schedule_csv(r, run.schedule);
  finish(r);
  return r;
}

// --- build-set / verify ---------------------------------------------------------

TowerOptions tower_options(const Context& ctx) {
  TowerOptions o;
  o.budget = ctx.integer<std::uint64_t>(ctx.cfg.budget, "tower", "budget", 1'000'000);
  o.sample_size = ctx.integer<std::size_t>(ctx.cfg.sample, "tower", "sample", 128);
  o.seed = ctx.seed;
  if (o.sample_size == 0) throw UsageError("--sample must be positive");
  return o;
}

Json tower_json(const FamilyTower& t) {
  Json j;
  j["explicit"] = t.is_explicit();
  j["member_count"] = t.member_count();
  j["word_length"] = t.word_length(t.depth());
  Json levels = Json::array();
  for (std::size_t k = 1; k <= t.depth(); ++k) {
    const auto& S = t.skeleton(k);
    levels.push_back({{"k", k},
                      {"skeleton_cardinality", big_json(S.cardinality())},
                      {"skeleton_rate", S.certified_rate},
                      {"skeleton_success", S.success},
                      {"card_D", big_json(t.card_D(k))},
                      {"card_E", big_json(t.card_E(k))}});
  }
  j["levels"] = levels;
  return j;
}

Json envelope_json(const EnvelopeReport& e) {
  Json j;
  j["pass"] = e.pass;
  j["max_ratio"] = e.max_ratio;
  j["samples"] = e.samples;
  Json levels = Json::array();
  for (const auto& L : e.levels)
    levels.push_back({{"k0", L.k0},
                      {"bound", L.bound},
                      {"max_ratio", L.max_ratio},
                      {"worst_sample", L.worst_sample},
                      {"worst_n", L.worst_n},
                      {"positions", L.positions}});
  j["levels"] = levels;
  if (e.culprit)
    j["culprit"] = {{"kind", to_string(e.culprit->kind)},
                    {"level", e.culprit->level},
                    {"index", e.culprit->index},
                    {"start", e.culprit->start},
                    {"length", e.culprit->length}};
  j["detail"] = e.detail;
  return j;
}

Report cmd_build_set(const Context& ctx) {
  Report r;
  r.command = "build-set";
  const auto& c = ctx.cocycle();
  ScheduleRun run;
  try {
    run = compute_schedule(ctx);
  } catch (const InfeasibleSchedule& e) {
    return infeasible(ctx, r.command, e);
  }
  const TowerOptions opt = tower_options(ctx);
  const auto envelope_samples = ctx.integer<std::size_t>(ctx.cfg.envelope_samples, "tower", "envelope_samples", 128);
  Json params = run.params;
  params["budget"] = opt.budget;
  params["sample"] = opt.sample_size;
  params["envelope_samples"] = envelope_samples;
  params["backward"] = ctx.cfg.backward;
  r.body = header(ctx, r.command);
  r.body["params"] = params;
  r.body["schedule"] = schedule_json(run.schedule);
  r.body["checks"] = checks_json(r, check_schedule(run.schedule));

  const FamilyTower tower = build_tower(c, run.schedule, schedule_skeletons(c, run.schedule), opt);
  r.body["tower"] = tower_json(tower);
  for (std::size_t k = 1; k <= tower.depth(); ++k)
    if (!tower.skeleton(k).success) r.failures.push_back("level " + std::to_string(k) + " skeleton misses its rate");
  const TowerCheck tc = verify_tower(tower);
  r.body["verification"] = {{"cardinality_ok", tc.cardinality_ok}, {"nesting_ok", tc.nesting_ok},
                            {"separation_ok", tc.separation_ok},   {"members_checked", tc.members_checked},
                            {"detail", tc.detail}};
  if (!tc.ok()) r.failures.push_back("tower: " + tc.detail);
  if (envelope_samples > 0) {
    const auto env = exponent_envelope_check(tower, c, envelope_samples);
    r.body["envelope"] = envelope_json(env);
    if (!env.pass) r.failures.push_back("envelope: " + env.detail);
  }
  if (ctx.cfg.backward) {
    const auto eps = params["eps"].get<std::vector<double>>();
    ScheduleOptions bopt;
    bopt.K0 = run.schedule.K0;
    const Schedule back = backward_schedule(c, eps, run.spec.curve, bopt);
    const auto ext = extend_backward(c, tower.member(0), back, opt);
    r.body["backward"] = {{"schedule", schedule_json(back)},
                          {"length", ext.backward.size()},
                          {"two_sided_length", ext.two_sided.size()},
                          {"origin", ext.origin},
                          {"envelope", envelope_json(ext.report)}};
    if (!ext.report.pass) r.failures.push_back("backward envelope: " + ext.report.detail);
  }
  schedule_csv(r, run.schedule);
  finish(r);
  return r;
}

Report cmd_verify(const Context& ctx) {
  Report r;
  r.command = "verify";
  const auto& c = ctx.cocycle();
  if (ctx.cfg.tower_path.empty()) throw UsageError("--tower is required for 'verify'");
  Json file;
  try {
    std::ifstream in(ctx.cfg.tower_path);
    if (!in) throw UsageError("cannot open '" + ctx.cfg.tower_path + "'");
    file = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + ctx.cfg.tower_path + "' is not valid JSON: " + e.what());
  }
  if (file.value("command", "") != "build-set" || !file.contains("params") || !file.contains("tower"))
    throw UsageError("'" + ctx.cfg.tower_path + "' is not a build-set report");
  if (file["config_hash"] != hex64(ctx.hash))
    throw UsageError("'" + ctx.cfg.tower_path + "' was built from a different config");
  const Json& prm = file["params"];

  // Rebuild the tower from the recorded parameters.
  RunConfig rebuilt = ctx.cfg;
  rebuilt.q_min = prm["q_min"].get<double>();
  rebuilt.q_max = prm["q_max"].get<double>();
  rebuilt.q_points = prm["q_points"].get<std::size_t>();
  rebuilt.alpha_points = prm["alpha_points"].get<std::size_t>();
  rebuilt.eps = prm["eps"].get<std::vector<double>>();
  rebuilt.levels.reset();
  rebuilt.sign = prm["sign"].get<std::string>();
  if (!prm["K0"].is_null()) rebuilt.K0 = prm["K0"].get<double>();
  rebuilt.budget = prm["budget"].get<std::uint64_t>();
  rebuilt.sample = prm["sample"].get<std::size_t>();
  rebuilt.seed = file["seed"].get<std::uint64_t>();
  const Context bctx{rebuilt, ctx.config_text, ctx.sections, ctx.model, ctx.hash, *rebuilt.seed};
  const ScheduleRun run = compute_schedule(bctx);
  const FamilyTower tower = build_tower(c, run.schedule, schedule_skeletons(c, run.schedule), tower_options(bctx));

  r.body = header(bctx, r.command);
  const double theta = ctx.number(ctx.cfg.theta, "verify", "theta", 0.05);
  const Resolution res{resolution(ctx)};
  std::optional<NRange> range;
  if (ctx.cfg.n_range) range = parse_n_range(*ctx.cfg.n_range);
  r.body["params"] = {{"tower", ctx.cfg.tower_path}, {"theta", theta}, {"resolution", res.depth_j},
                      {"n", ctx.cfg.n_range ? Json(*ctx.cfg.n_range) : Json(nullptr)}};
  const Json rebuilt_json = tower_json(tower);
  const bool match = rebuilt_json == file["tower"];
  r.body["tower_matches"] = match;
  if (!match) r.failures.push_back("the rebuilt tower differs from the one recorded in the tower file");

  const EdpCertificate cert = edp_certificate(tower, theta, range, res);
  const auto& a = cert.audit;
  r.body["h_target"] = a.h_target;
  r.body["audit"] = {{"pass", a.pass},
                     {"vacuous", a.vacuous},
                     {"range", {a.range.first, a.range.last}},
                     {"n0", a.n0 ? Json(*a.n0) : Json(nullptr)},
                     {"worst_margin", a.worst_margin},
                     {"worst_n", a.worst_n},
                     {"tail_margin", a.tail_margin},
                     {"failures", a.failures},
                     {"detail", a.detail}};
  r.body["certificate"] = {{"certified", cert.certified},
                           {"lower_bound", cert.lower_bound ? Json(*cert.lower_bound) : Json(nullptr)},
                           {"statement", cert.statement}};
  r.body["direct"] = {{"rate", cert.direct.rate},
                      {"residual", cert.direct.residual},
                      {"range", {cert.direct.range.first, cert.direct.range.last}}};
  r.body["consistent"] = cert.consistent;
  if (cert.lower_bound) r.body["agreement"] = std::abs(cert.direct.rate - *cert.lower_bound);
  if (!cert.certified) r.failures.push_back("audit: " + a.detail);
  if (!cert.consistent) r.failures.push_back("certificate exceeds the direct estimate");
  finish(r);
  return r;
}

// --- entropy ------------------------------------------------------------------

Report cmd_entropy(const Context& ctx) {
  Report r;
  r.command = "entropy";
  std::unique_ptr<PrefixCounter> counts;
  Json source;
  Context local = ctx;
  if (!ctx.cfg.input.empty()) {
    std::string text;
    try {
      text = read_text_file(ctx.cfg.input);
    } catch (const ConfigError&) {
      throw UsageError("cannot open '" + ctx.cfg.input + "'");
    }
    auto words = read_words(text);
    if (words.empty()) throw UsageError("'" + ctx.cfg.input + "' contains no words");
    source = {{"input", ctx.cfg.input}, {"words", words.size()}};
    if (ctx.cfg.config_path.empty()) local.hash = fnv1a64(text);
    counts = std::make_unique<WordSetCounter>(std::move(words));
  } else if (ctx.model) {
    source = {{"system", ctx.model->system().describe()}};
    counts = std::make_unique<ShiftCounter>(ctx.model->system());
  } else {
    throw UsageError("'entropy' needs --input or --config");
  }
  const Resolution res{resolution(ctx)};
  NRange range;
  if (const auto n = ctx.text(ctx.cfg.n_range, "entropy", "n", ""); !n.empty()) {
    range = parse_n_range(n);
  } else {
    const std::uint64_t depth = counts->max_depth();
    range = depth == std::numeric_limits<std::uint64_t>::max()
                ? NRange{10, 60}
                : NRange{1, static_cast<std::size_t>(depth - std::min<std::uint64_t>(depth, res.depth_j))};
  }
  const std::string method_name = ctx.text(ctx.cfg.method, "entropy", "method", "separated");
  const auto method = parse_entropy_method(method_name);
  if (!method) throw UsageError("method must be separated, spanning or cover_cost");

  r.body = header(local, r.command);
  r.body["params"] = {{"n", {range.first, range.last}}, {"resolution", res.depth_j}, {"method", method_name}};
  r.body["source"] = source;
  const auto est = estimate_entropy(*counts, range, res, *method);
  const auto sep = estimate_entropy(*counts, range, res, EntropyMethod::kSeparated);
  const auto span = estimate_entropy(*counts, range, res, EntropyMethod::kSpanning);
  r.body["estimate"] = {{"rate", est.rate}, {"residual", est.residual}, {"method", to_string(est.method)}};
  r.body["separated_rate"] = sep.rate;
  r.body["spanning_rate"] = span.rate;
  const double slack = sep.residual + span.residual + 1e-12;
  const bool ordered = span.rate <= sep.rate + slack;
  r.body["checks"] = Json::array({{{"name", "spanning_below_separated"}, {"pass", ordered}}});
  if (!ordered) r.failures.push_back("spanning rate exceeds the separated rate");
  if (range.size() >= 2) {
    const auto cap = capacitive_entropies(*counts, range, res);
    r.body["capacitive"] = {{"lower", cap.lower}, {"upper", cap.upper}, {"gap", cap.gap()}, {"window", cap.window}};
  }
  r.csv_header = {"n", "log_separated", "log_spanning"};
  for (std::size_t n = range.first; n <= range.last; ++n)
    r.csv_rows.push_back({std::to_string(n), fmt(log_method_count(*counts, n, res, EntropyMethod::kSeparated)),
                          fmt(log_method_count(*counts, n, res, EntropyMethod::kSpanning))});
  finish(r);
  return r;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

Format default_format(const std::string& command) {
  return command == "pressure" || command == "spectrum" || command == "oracle" ? Format::kCsv : Format::kJson;
}

bool has_csv(const std::string& command) { return command != "skeleton" && command != "verify"; }

Report run_pipeline(const RunConfig& cfg) {
  const std::string& cmd = cfg.command;
  if (cmd == "entropy") return cmd_entropy(load(cfg, false));
  const Context ctx = load(cfg, true);
  if (cmd == "pressure") return cmd_pressure(ctx);
  if (cmd == "spectrum") return cmd_spectrum(ctx);
  if (cmd == "oracle") return cmd_oracle(ctx);
  if (cmd == "skeleton") return cmd_skeleton(ctx);
  if (cmd == "schedule") return cmd_schedule(ctx);
  if (cmd == "build-set") return cmd_build_set(ctx);
  if (cmd == "verify") return cmd_verify(ctx);
  throw UsageError("unknown command '" + cmd + "'");
}

std::string render(const Report& report, Format format) {
  if (format == Format::kJson) return report.body.dump(2) + "\n";
  if (report.csv_header.empty()) throw UsageError("'" + report.command + "' has no CSV view; use --format json");
  std::ostringstream os;
  os << "# command=" << report.command << " config_hash=" << report.body.value("config_hash", "")
     << " seed=" << report.body.value("seed", std::uint64_t{0})
     << " status=" << (report.failures.empty() ? "ok" : "fail") << '\n';
  for (const auto& f : report.failures) os << "# failure: " << f << '\n';
  for (std::size_t i = 0; i < report.csv_header.size(); ++i) os << (i ? "," : "") << report.csv_header[i];
  os << '\n';
  for (const auto& row : report.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

Report failure_report(const RunConfig& cfg, const std::string& kind, const std::string& what) {
  Report r;
  r.command = cfg.command;
  r.body["command"] = cfg.command;
  std::uint64_t hash = 0;
  std::uint64_t seed = cfg.seed.value_or(1);
  if (!cfg.config_path.empty()) {
    try {
      const std::string text = read_text_file(cfg.config_path);
      hash = fnv1a64(text);
      if (!cfg.seed) {
        const auto doc = parse_config(text);
        const auto run = doc.find("run");
        if (run != doc.end()) {
          const auto it = run->second.find("seed");
          if (it != run->second.end() && it->second.is_number())
            seed = static_cast<std::uint64_t>(std::get<double>(it->second.data));
        }
      }
    } catch (const Error&) {
    }
  }
  r.body["config_hash"] = hex64(hash);
  r.body["seed"] = seed;
  r.failures.push_back(kind + ": " + what);
  finish(r);
  return r;
}

}  // namespace spectra::cli

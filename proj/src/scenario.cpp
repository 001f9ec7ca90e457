#include "curv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace curv {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

double as_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string as_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_num_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_num(j[i], path));
  return out;
}

Box parse_box(const json& j, const std::string& path, int dim_hint = 0) {
  if (!j.is_array() || j.empty() || j.size() > 3)
    fail(path, "expected an array of 1..3 per-axis [lo, hi] pairs");
  Box box;
  box.dim = static_cast<int>(j.size());
  if (dim_hint > 0 && box.dim != dim_hint) fail(path, "box dimension mismatch");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& axis = j[k];
    if (!axis.is_array() || axis.size() != 2)
      fail(path + "[" + std::to_string(k) + "]", "expected [lo, hi]");
    box.lo[k] = as_num(axis[0], path);
    box.hi[k] = as_num(axis[1], path);
    if (!(box.lo[k] <= box.hi[k]))
      fail(path + "[" + std::to_string(k) + "]", "lo must not exceed hi");
  }
  return box;
}

ModelSpace parse_space(const json& j, const std::string& path) {
  const std::string kind = as_str(need(j, path, "kind"), path + ".kind");
  const double k_ref = j.contains("K_ref") ? as_num(j["K_ref"], path + ".K_ref") : 0.0;
  const double n_ref = j.contains("N_ref") ? as_num(j["N_ref"], path + ".N_ref") : 0.0;
  if (kind == "euclidean") {
    const int dim =
        j.contains("dim") ? static_cast<int>(as_num(j["dim"], path + ".dim")) : 2;
    return ModelSpace(Euclidean{dim}, k_ref, n_ref);
  }
  if (kind == "weighted_interval") {
    WeightedInterval w;
    w.a = as_num(need(j, path, "a"), path + ".a");
    w.b = as_num(need(j, path, "b"), path + ".b");
    if (j.contains("weight")) {
      const json& jw = j["weight"];
      const std::string wk = as_str(need(jw, path + ".weight", "kind"), path + ".weight.kind");
      if (wk == "constant") {
        w.weight.kind = Weight::Kind::constant;
      } else if (wk == "sin_pow") {
        w.weight.kind = Weight::Kind::sin_pow;
        w.weight.power = as_num(need(jw, path + ".weight", "power"), path + ".weight.power");
      } else {
        fail(path + ".weight.kind", "unknown weight '" + wk + "'");
      }
      if (jw.contains("scale")) w.weight.scale = as_num(jw["scale"], path + ".weight.scale");
    }
    return ModelSpace(w, k_ref, n_ref);
  }
  if (kind == "sphere") {
    Sphere s;
    if (j.contains("radius")) s.radius = as_num(j["radius"], path + ".radius");
    if (j.contains("antipode_cap"))
      s.antipode_cap = as_num(j["antipode_cap"], path + ".antipode_cap");
    return ModelSpace(s, k_ref, n_ref);
  }
  if (kind == "hyperbolic") return ModelSpace(Hyperbolic{}, k_ref, n_ref);
  fail(path + ".kind", "unknown space kind '" + kind + "'");
}

Condition parse_condition(const std::string& s, const std::string& path) {
  if (s == "cd") return Condition::cd;
  if (s == "bm") return Condition::bm;
  if (s == "sbm") return Condition::sbm;
  if (s == "mcp") return Condition::mcp;
  fail(path, "unknown condition '" + s + "' (expected cd, bm, sbm or mcp)");
}

CheckSpec parse_check(const json& j, const std::string& path, int chart_dim) {
  CheckSpec c;
  c.condition = parse_condition(as_str(need(j, path, "condition"), path + ".condition"),
                                path + ".condition");
  c.K = as_num(need(j, path, "K"), path + ".K");
  c.N = as_num(need(j, path, "N"), path + ".N");
  if (j.contains("t")) c.ts = as_num_array(j["t"], path + ".t");
  if (j.contains("Nprime")) c.Nprimes = as_num_array(j["Nprime"], path + ".Nprime");
  if (j.contains("tol")) {
    const json& jt = j["tol"];
    if (jt.contains("abs")) c.tol.abs = as_num(jt["abs"], path + ".tol.abs");
    if (jt.contains("rel")) c.tol.rel = as_num(jt["rel"], path + ".tol.rel");
    if (jt.contains("c_disc")) c.tol.c_disc = as_num(jt["c_disc"], path + ".tol.c_disc");
  }
  if (j.contains("A")) c.A = as_str(j["A"], path + ".A");
  if (j.contains("B")) c.B = as_str(j["B"], path + ".B");
  if (j.contains("mu0")) c.mu0 = as_str(j["mu0"], path + ".mu0");
  if (j.contains("mu1")) c.mu1 = as_str(j["mu1"], path + ".mu1");
  if (j.contains("eps")) c.eps = as_num(j["eps"], path + ".eps");
  if (j.contains("conservative"))
    c.mopts.conservative = need(j, path, "conservative").get<bool>();
  if (j.contains("samples_per_axis"))
    c.mopts.samples_per_axis = static_cast<int>(as_num(j["samples_per_axis"], path));
  if (j.contains("label")) c.label = as_str(j["label"], path + ".label");
  if (c.condition == Condition::mcp) {
    const auto x = as_num_array(need(j, path, "x"), path + ".x");
    if (static_cast<int>(x.size()) != chart_dim)
      fail(path + ".x", "point dimension must match the chart dimension");
    switch (x.size()) {
      case 1: c.x_chart = Point(x[0]); break;
      case 2: c.x_chart = Point(x[0], x[1]); break;
      default: c.x_chart = Point(x[0], x[1], x[2]); break;
    }
  }
  if (!(c.N > 0.0)) fail(path + ".N", "N must be positive");
  for (double t : c.ts)
    if (!(t >= 0.0 && t <= 1.0)) fail(path + ".t", "t values must lie in [0,1]");
  return c;
}

Scenario parse_scenario(const json& j, const std::string& path) {
  ModelSpace space = parse_space(need(j, path, "space"), path + ".space");
  Scenario sc{/*name=*/as_str(need(j, path, "name"), path + ".name"),
              /*space=*/space,
              /*box=*/{},
              /*h=*/0.1,
              /*cell_cap=*/10'000'000,
              /*atom_cap=*/5000,
              {},
              {},
              {}};
  const json& jg = need(j, path, "grid");
  sc.box = parse_box(need(jg, path + ".grid", "box"), path + ".grid.box", space.chart_dim());
  sc.h = as_num(need(jg, path + ".grid", "h"), path + ".grid.h");
  if (!(sc.h > 0.0)) fail(path + ".grid.h", "h must be positive");
  if (jg.contains("cell_cap"))
    sc.cell_cap = static_cast<std::int64_t>(as_num(jg["cell_cap"], path + ".grid.cell_cap"));
  if (j.contains("atom_cap"))
    sc.atom_cap = static_cast<std::size_t>(as_num(j["atom_cap"], path + ".atom_cap"));

  const json& jsets = need(j, path, "sets");
  if (!jsets.is_object() || jsets.empty()) fail(path + ".sets", "expected a non-empty object");
  for (const auto& [name, jset] : jsets.items()) {
    const std::string spath = path + ".sets." + name;
    SetSpec spec;
    if (jset.is_object() && jset.contains("box")) {
      spec.boxes.push_back(parse_box(jset["box"], spath + ".box", space.chart_dim()));
    } else if (jset.is_object() && jset.contains("boxes")) {
      const json& jb = jset["boxes"];
      if (!jb.is_array() || jb.empty()) fail(spath + ".boxes", "expected a non-empty array");
      for (std::size_t i = 0; i < jb.size(); ++i)
        spec.boxes.push_back(
            parse_box(jb[i], spath + ".boxes[" + std::to_string(i) + "]", space.chart_dim()));
    } else {
      fail(spath, "expected an object with 'box' or 'boxes'");
    }
    sc.sets.emplace_back(name, std::move(spec));
  }

  if (j.contains("measures")) {
    const json& jms = j["measures"];
    if (!jms.is_object()) fail(path + ".measures", "expected an object");
    for (const auto& [name, jm] : jms.items()) {
      const std::string mpath = path + ".measures." + name;
      MeasureSpec spec;
      if (jm.is_object() && jm.contains("uniform")) {
        spec.uniform = as_str(jm["uniform"], mpath + ".uniform");
      } else if (jm.is_object() && jm.contains("step")) {
        const json& jp = jm["step"];
        if (!jp.is_array() || jp.empty()) fail(mpath + ".step", "expected a non-empty array");
        for (std::size_t i = 0; i < jp.size(); ++i) {
          const std::string ppath = mpath + ".step[" + std::to_string(i) + "]";
          StepPiece piece;
          piece.set = as_str(need(jp[i], ppath, "set"), ppath + ".set");
          piece.weight = as_num(need(jp[i], ppath, "weight"), ppath + ".weight");
          spec.step.push_back(std::move(piece));
        }
      } else {
        fail(mpath, "expected an object with 'uniform' or 'step'");
      }
      sc.measures.emplace_back(name, std::move(spec));
    }
  }

  const json& jchecks = need(j, path, "checks");
  if (!jchecks.is_array() || jchecks.empty())
    fail(path + ".checks", "expected a non-empty array");
  for (std::size_t i = 0; i < jchecks.size(); ++i)
    sc.checks.push_back(parse_check(jchecks[i], path + ".checks[" + std::to_string(i) + "]",
                                    space.chart_dim()));
  return sc;
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

std::vector<Scenario> load_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what(),
                      line_of_offset(text, e.byte));
  }
  const json& jscen = need(root, "$", "scenarios");
  if (!jscen.is_array() || jscen.empty())
    fail("$.scenarios", "expected a non-empty array");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < jscen.size(); ++i)
    out.push_back(parse_scenario(jscen[i], "$.scenarios[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Scenario> load_config_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw ConfigError("cannot open config file '" + path + "'");
  std::string text;
  char buf[1 << 14];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  return load_config_text(text);
}

ScenarioGeometry resolve_geometry(const Scenario& sc, double h_override) {
  ScenarioGeometry geo;
  const double h = h_override > 0.0 ? h_override : sc.h;
  geo.grid = build_grid(sc.space, sc.box, h, sc.cell_cap);
  for (const auto& [name, spec] : sc.sets) {
    CellSet set;
    bool first = true;
    for (const Box& box : spec.boxes) {
      CellSet part = cells_in_box(geo.grid, box);
      set = first ? part : set_union(set, part);
      first = false;
    }
    if (set.empty())
      throw ConfigError("set '" + name + "' of scenario '" + sc.name +
                        "' contains no grid cells");
    geo.sets.emplace_back(name, std::move(set));
  }
  return geo;
}

namespace {

const CellSet& set_by_name(const ScenarioGeometry& geo, const std::string& name,
                           const std::string& scenario) {
  for (const auto& [n, s] : geo.sets)
    if (n == name) return s;
  throw ConfigError("scenario '" + scenario + "' references unknown set '" + name + "'");
}

DiscreteMeasure build_measure(const Scenario& sc, const ScenarioGeometry& geo,
                              const std::string& name) {
  for (const auto& [n, spec] : sc.measures) {
    if (n != name) continue;
    if (!spec.uniform.empty())
      return uniform_on(sc.space, set_by_name(geo, spec.uniform, sc.name));
    std::vector<std::pair<CellSet, double>> pieces;
    for (const StepPiece& p : spec.step)
      pieces.emplace_back(set_by_name(geo, p.set, sc.name), p.weight);
    return step_measure(sc.space, pieces);
  }
  throw ConfigError("scenario '" + sc.name + "' references unknown measure '" + name + "'");
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc, double h_override) {
  ScenarioResult result;
  result.name = sc.name;
  const ScenarioGeometry geo = resolve_geometry(sc, h_override);
  const SolveOptions solve{sc.atom_cap};

  for (const CheckSpec& check : sc.checks) {
    std::vector<double> ts = check.ts.empty() ? std::vector<double>{0.25, 0.5, 0.75} : check.ts;
    std::vector<double> nps = check.Nprimes;
    if (nps.empty()) nps = {check.N, 1.5 * check.N, 3.0 * check.N, 10.0 * check.N};

    CheckReport report;
    switch (check.condition) {
      case Condition::cd: {
        const DiscreteMeasure mu0 =
            check.mu0.empty() ? uniform_on(sc.space, set_by_name(geo, check.A, sc.name))
                              : build_measure(sc, geo, check.mu0);
        const DiscreteMeasure mu1 =
            check.mu1.empty() ? uniform_on(sc.space, set_by_name(geo, check.B, sc.name))
                              : build_measure(sc, geo, check.mu1);
        report = check_cd(sc.space, mu0, mu1, check.K, check.N, ts, nps, check.tol, solve);
        break;
      }
      case Condition::bm:
        report = check_bm(sc.space, set_by_name(geo, check.A, sc.name),
                          set_by_name(geo, check.B, sc.name), check.K, check.N, ts, nps,
                          check.tol, check.mopts);
        break;
      case Condition::sbm:
        report = check_sbm(sc.space, set_by_name(geo, check.A, sc.name),
                           set_by_name(geo, check.B, sc.name), check.K, check.N, ts, nps,
                           check.tol, solve);
        break;
      case Condition::mcp:
        report = check_mcp(sc.space, sc.space.chart_to_point(check.x_chart),
                           set_by_name(geo, check.A, sc.name), check.K, check.N, ts,
                           check.eps, check.tol, check.mopts);
        break;
    }
    result.reports.push_back(std::move(report));
  }
  return result;
}

// ---------------------------------------------------------------------------
// built-in suite

namespace {

CheckSpec mk_check(Condition cond, double K, double N, Tolerance tol, std::string A = "A",
                   std::string B = "B") {
  CheckSpec c;
  c.condition = cond;
  c.K = K;
  c.N = N;
  c.tol = tol;
  c.A = std::move(A);
  c.B = std::move(B);
  return c;
}

Scenario translate_intervals() {
  Scenario sc{"r1-translate-intervals",
              ModelSpace(Euclidean{1}, 0.0, 1.0),
              Box::interval(-0.2, 3.4),
              0.05,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::interval(0.0, 1.0)}});
  sc.sets.emplace_back("B", SetSpec{{Box::interval(2.0, 3.0)}});
  const Tolerance tol{1e-9, 1e-3, 3.0};
  const std::vector<double> nps{1.0, 1.5, 3.0, 10.0};
  for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm}) {
    CheckSpec c = mk_check(cond, 0.0, 1.0, tol);
    c.Nprimes = nps;
    sc.checks.push_back(std::move(c));
  }
  CheckSpec mcp = mk_check(Condition::mcp, 0.0, 1.0, tol, "B");
  mcp.x_chart = Point(0.25);
  mcp.eps = 0.5;
  sc.checks.push_back(std::move(mcp));
  return sc;
}

Scenario translate_squares() {
  Scenario sc{"r2-translate-squares",
              ModelSpace(Euclidean{2}, 0.0, 2.0),
              Box::rect(-0.2, 3.4, -0.2, 1.8),
              0.05,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::rect(0.0, 1.0, 0.0, 1.0)}});
  sc.sets.emplace_back("B", SetSpec{{Box::rect(2.0, 3.0, 0.5, 1.5)}});
  const Tolerance tol{1e-9, 1e-3, 3.0};
  for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm})
    sc.checks.push_back(mk_check(cond, 0.0, 2.0, tol));
  CheckSpec mcp = mk_check(Condition::mcp, 0.0, 2.0, tol, "B");
  mcp.x_chart = Point(0.5, 0.5);
  mcp.eps = 0.5;
  sc.checks.push_back(std::move(mcp));
  return sc;
}

Scenario squares_1x2() {
  Scenario sc{"r2-squares-1x2",
              ModelSpace(Euclidean{2}, 0.0, 2.0),
              Box::rect(-0.3, 4.3, -0.3, 2.3),
              0.05,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::rect(0.0, 1.0, 0.0, 1.0)}});
  sc.sets.emplace_back("B", SetSpec{{Box::rect(2.0, 4.0, 0.0, 2.0)}});
  const Tolerance tol{1e-9, 1e-3, 3.0};
  for (Condition cond : {Condition::bm, Condition::sbm}) {
    CheckSpec c = mk_check(cond, 0.0, 2.0, tol);
    c.Nprimes = {2.0};
    sc.checks.push_back(std::move(c));
  }
  return sc;
}

Scenario falsify_k1() {
  Scenario sc{"r2-falsify-k1",
              ModelSpace(Euclidean{2}, 0.0, 2.0),
              Box::rect(-0.2, 3.3, -0.2, 0.6),
              0.025,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::rect(0.0, 0.4, 0.0, 0.4)}});
  sc.sets.emplace_back("B", SetSpec{{Box::rect(2.7, 3.1, 0.0, 0.4)}});
  const Tolerance tol{1e-9, 1e-3, 0.1};
  for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm}) {
    CheckSpec c = mk_check(cond, 1.0, 2.0, tol);
    c.Nprimes = {2.0, 3.0};
    sc.checks.push_back(std::move(c));
  }
  CheckSpec mcp = mk_check(Condition::mcp, 1.0, 2.0, tol, "B");
  mcp.x_chart = Point(0.2, 0.2);
  mcp.eps = 0.5;
  sc.checks.push_back(std::move(mcp));
  return sc;
}

Scenario sin_interval() {
  WeightedInterval wi{0.0, kPi, Weight{Weight::Kind::sin_pow, 1.0, 1.0}};
  Scenario sc{"interval-sin-cd12",
              ModelSpace(wi, 1.0, 2.0),
              Box::interval(0.0, kPi),
              kPi / 2000.0,
              10'000'000,
              5000,
              {},
              {},
              {}};
  const double a0[10] = {0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.20, 0.25, 0.70};
  const double a1[10] = {0.80, 0.85, 0.90, 0.95, 1.00, 1.05, 1.10, 0.60, 0.65, 1.20};
  const double b0[10] = {1.60, 1.70, 1.80, 1.90, 2.00, 2.10, 2.20, 1.40, 2.30, 1.80};
  const double b1[10] = {2.20, 2.30, 2.40, 2.50, 2.60, 2.70, 2.80, 1.90, 2.90, 2.30};
  const Tolerance tol{1e-9, 1e-3, 1.0};
  for (int i = 0; i < 10; ++i) {
    const std::string an = "A" + std::to_string(i + 1);
    const std::string bn = "B" + std::to_string(i + 1);
    sc.sets.emplace_back(an, SetSpec{{Box::interval(a0[i], a1[i])}});
    sc.sets.emplace_back(bn, SetSpec{{Box::interval(b0[i], b1[i])}});
    for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm}) {
      CheckSpec c = mk_check(cond, 1.0, 2.0, tol, an, bn);
      c.label = "pair" + std::to_string(i + 1);
      sc.checks.push_back(std::move(c));
    }
  }
  CheckSpec mcp1 = mk_check(Condition::mcp, 1.0, 2.0, tol, "B1");
  mcp1.x_chart = Point(0.15);
  mcp1.eps = 0.3;
  mcp1.label = "x=0.15";
  sc.checks.push_back(std::move(mcp1));
  CheckSpec mcp2 = mk_check(Condition::mcp, 1.0, 2.0, tol, "B9");
  mcp2.x_chart = Point(1.50);
  mcp2.eps = 0.3;
  mcp2.label = "x=1.50";
  sc.checks.push_back(std::move(mcp2));
  return sc;
}

Scenario sphere_caps() {
  Scenario sc{"sphere-caps",
              ModelSpace(Sphere{2, 1.0, 0.1}, 1.0, 2.0),
              Box::rect(0.05, kPi - 0.15, 0.0, 2.0 * kPi),
              0.05,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::rect(0.40, 0.80, 0.30, 1.00)}});
  sc.sets.emplace_back("B", SetSpec{{Box::rect(1.60, 2.00, 3.00, 3.70)}});
  const Tolerance tol{1e-9, 1e-3, 3.0};
  for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm})
    sc.checks.push_back(mk_check(cond, 1.0, 2.0, tol));
  CheckSpec mcp = mk_check(Condition::mcp, 1.0, 2.0, tol, "B");
  mcp.x_chart = Point(0.60, 0.65);
  mcp.eps = 0.4;
  sc.checks.push_back(std::move(mcp));
  return sc;
}

Scenario hyperbolic_discs() {
  Scenario sc{"hyperbolic-discs",
              ModelSpace(Hyperbolic{2}, -1.0, 2.0),
              Box::rect(0.0, 2.2, 0.0, 2.0 * kPi),
              0.05,
              10'000'000,
              5000,
              {},
              {},
              {}};
  sc.sets.emplace_back("A", SetSpec{{Box::rect(0.30, 0.70, 0.20, 0.90)}});
  sc.sets.emplace_back("B", SetSpec{{Box::rect(1.20, 1.60, 4.00, 4.70)}});
  const Tolerance tol{1e-9, 1e-3, 3.0};
  for (Condition cond : {Condition::cd, Condition::bm, Condition::sbm})
    sc.checks.push_back(mk_check(cond, -1.0, 2.0, tol));
  CheckSpec mcp = mk_check(Condition::mcp, -1.0, 2.0, tol, "B");
  mcp.x_chart = Point(0.50, 0.55);
  mcp.eps = 0.4;
  sc.checks.push_back(std::move(mcp));
  return sc;
}

}  // namespace

std::vector<Scenario> builtin_suite() {
  return {translate_intervals(), translate_squares(), squares_1x2(),
          falsify_k1(),          sin_interval(),      sphere_caps(),
          hyperbolic_discs()};
}

Figure1Result reproduce_figure1(double h) {
  const ModelSpace space(Euclidean{2}, 0.0, 2.0);
  const Grid grid = build_grid(space, Box::rect(-5.2, -0.8, -3.2, 3.2), h);
  const CellSet A = cells_in_box(grid, Box::rect(-5.0, -4.0, -1.0, 1.0));
  const CellSet B_top = cells_in_box(grid, Box::rect(-2.0, -1.0, 2.0, 3.0));
  const CellSet B_bot = cells_in_box(grid, Box::rect(-2.0, -1.0, -3.0, -2.0));
  const CellSet B = set_union(B_top, B_bot);
  const CellSet A_top = cells_in_box(grid, Box::rect(-5.0, -4.0, 0.0, 1.0));
  const CellSet A_bot = cells_in_box(grid, Box::rect(-5.0, -4.0, -1.0, 0.0));

  // faithful area estimates: no dilation, refine h instead
  const MidpointOptions faithful{3, false};
  const Tolerance tol_model{1e-9, 1e-3, 2.3};

  Figure1Result res;
  res.h = h;
  res.set_A = A;
  res.set_B = B;

  res.mid_half = midpoint_set(space, A, B, 0.5, grid, faithful);
  const TransportPlan plan = solve_w2(space, uniform_on(space, A), uniform_on(space, B));
  res.support_half = support_set(rasterize(space, displacement_interpolate(space, plan, 0.5)));
  res.m_mid = res.mid_half.measure(space);
  res.m_support = res.support_half.measure(space);
  res.gap = res.m_mid - res.m_support;
  res.tol = tol_model.at(res.m_support, h);
  res.gap_strict = res.gap > 10.0 * res.tol;

  const std::pair<const CellSet*, const CellSet*> pairs[2] = {{&A_top, &B_top},
                                                              {&A_bot, &B_bot}};
  res.splits_equal = true;
  for (int p = 0; p < 2; ++p) {
    const TransportPlan sub =
        solve_w2(space, uniform_on(space, *pairs[p].first), uniform_on(space, *pairs[p].second));
    for (double t : {0.25, 0.5, 0.75}) {
      Figure1Result::SplitEntry e;
      e.pair = p + 1;
      e.t = t;
      e.m_mid =
          midpoint_set(space, *pairs[p].first, *pairs[p].second, t, grid, faithful).measure(space);
      e.m_support =
          support_set(rasterize(space, displacement_interpolate(space, sub, t))).measure(space);
      e.diff = std::abs(e.m_mid - e.m_support);
      if (e.diff > tol_model.at(e.m_support, h)) res.splits_equal = false;
      res.splits.push_back(e);
    }
  }
  return res;
}

SweepResult sweep_k(const Scenario& sc, double from, double to, int steps) {
  if (steps < 1) throw DomainError("sweep_k: need at least one step");
  if (!(from <= to)) throw DomainError("sweep_k: need from <= to");
  auto k_at = [&](int i) { return from + (to - from) * static_cast<double>(i) / steps; };
  auto passes = [&](int i) {
    Scenario probe = sc;
    for (CheckSpec& c : probe.checks) c.K = k_at(i);
    return run_scenario(probe).passed();
  };

  SweepResult res;
  const bool lo_ok = passes(0);
  res.tested.emplace_back(k_at(0), lo_ok);
  if (!lo_ok) return res;
  const bool hi_ok = passes(steps);
  res.tested.emplace_back(k_at(steps), hi_ok);
  int lo = 0;
  int hi = steps;
  if (hi_ok) {
    res.found = true;
    res.best_K = k_at(steps);
    return res;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    const bool ok = passes(mid);
    res.tested.emplace_back(k_at(mid), ok);
    (ok ? lo : hi) = mid;
  }
  res.found = true;
  res.best_K = k_at(lo);
  return res;
}

}  // namespace curv

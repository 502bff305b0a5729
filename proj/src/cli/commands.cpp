#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pleatlab/cli.hpp"
#include "pleatlab/curves.hpp"
#include "pleatlab/errors.hpp"
#include "pleatlab/portrait.hpp"

namespace pleatlab::cli {

using nlohmann::ordered_json;

namespace {

struct Target {
  std::optional<ImplicitOde> ode;
  std::optional<OracleId> oracle;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

Point3 parse_origin(const std::string& text) {
  double v[3];
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &v[0], &v[1], &v[2], &tail) != 3)
    throw DomainError("origin must be x,y,p");
  return {v[0], v[1], v[2]};
}

ChartPoint parse_seed(const std::string& text) {
  double x = 0, p = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf%c", &x, &p, &tail) != 2) throw DomainError("seed must be x,p");
  return {x, p};
}

Target resolve(const RunConfig& cfg, const std::optional<std::string>& origin) {
  const int sources = (cfg.equation ? 1 : 0) + (cfg.file ? 1 : 0) + (cfg.oracle ? 1 : 0);
  if (sources != 1) throw DomainError("give exactly one of -e/--equation, --file, --oracle");
  Target t;
  if (cfg.oracle) {
    t.oracle = parse_oracle_id(*cfg.oracle);
    Oracle o = make_oracle(*t.oracle);
    t.ode = o.ode;
    return t;
  }
  Bindings params;
  for (const auto& s : cfg.params) {
    auto [k, v] = parse_param(s);
    params[k] = v;
  }
  const std::string text = cfg.equation ? *cfg.equation : read_file(*cfg.file);
  t.ode = ImplicitOde::from_text(text, params, origin ? parse_origin(*origin) : Point3{});
  return t;
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw DomainError("cannot write " + cfg.out);
  f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_classify(const RunConfig& cfg, const Target& t, std::ostream& out) {
  if (!t.ode) throw DomainError("classify needs an implicit equation, not a planar oracle");
  ClassifyOptions opts;
  opts.epsilon = parse_epsilon(cfg.epsilon);
  const SingularClass sc = classify_singular_point(*t.ode, opts);
  ordered_json j = classify_json(sc);
  if (cfg.pretty) {
    std::ostringstream os;
    os << "kind       " << j["kind"].get<std::string>() << "\n";
    for (const char* key : {"b", "case", "stability", "well_folded", "eigenvalues", "resonance", "smoothness"})
      if (!j[key].is_null()) os << std::string(key) + std::string(11 - std::min<std::size_t>(10, std::strlen(key)), ' ')
                                << j[key].dump() << "\n";
    if (j.contains("degenerate_reason")) os << "reason     " << j["degenerate_reason"].get<std::string>() << "\n";
    emit(os.str(), cfg, out);
  } else {
    emit(dump(j), cfg, out);
  }
  return sc.kind == SingularKind::Degenerate ? kDegenerate : kOk;
}

std::string csv(const Trajectory& t) {
  std::string s = "t,x,p,y\n";
  char line[128];
  for (const auto& q : t.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", q.t, q.x, q.p, q.y);
    s += line;
  }
  return s;
}

IntegrationOptions integ_from(const RunConfig& cfg) {
  if (!(cfg.tol_rel > 0.0) || !(cfg.tol_abs > 0.0)) throw DomainError("tolerances must be positive");
  IntegrationOptions o;
  o.rel_tol = cfg.tol_rel;
  o.abs_tol = cfg.tol_abs;
  return o;
}

int cmd_trace(const RunConfig& cfg, const Target& t, std::ostream& out) {
  const IntegrationOptions integ = integ_from(cfg);
  Trajectory traj;
  if (cfg.curve == "orbit") {
    if (!cfg.seed) throw DomainError("--curve orbit needs --seed x,p");
    const ChartPoint seed = parse_seed(*cfg.seed);
    FlowLimits lim;
    double xh = 0.25, ph = 0.5;
    if (cfg.window) std::tie(xh, ph) = parse_window(*cfg.window);
    if (t.ode) {
      const ChartPoint o{t.ode->origin().x, t.ode->origin().p};
      lim.window = Window{o.x - xh, o.x + xh, o.p - ph, o.p + ph};
      lim.origin = o;
      lim.origin_radius = kStopRadius;
      traj = integrate_field(Field::chart(*t.ode), seed, cfg.direction, integ, lim, t.ode->origin().y);
    } else {
      lim.window = Window{-xh, xh, -ph, ph};
      lim.origin_radius = kStopRadius;
      traj = integrate_field(Field::planar(make_oracle(*t.oracle).planar), seed, cfg.direction, integ, lim);
    }
  } else {
    if (!t.ode) throw DomainError("planar oracles only support --curve orbit");
    if (cfg.curve == "criminant") {
      traj = trace_criminant(*t.ode);
    } else if (cfg.curve == "C" || cfg.curve == "C'") {
      CurveOptions c;
      c.integ = integ;
      traj = invariant_curve(*t.ode, cfg.curve == "C" ? CurveKind::Vertical : CurveKind::Horizontal, c).stitched;
    } else {
      throw DomainError("--curve must be criminant, C, C' or orbit");
    }
  }
  emit(csv(traj), cfg, out);
  return kOk;
}

ordered_json verify_block(const std::vector<CheckRow>& rows) {
  return {{"rows", rows_json(rows)}, {"pass", rows_pass(rows)}};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep) {
    if (cfg.equation || cfg.file || cfg.oracle) throw DomainError("--sweep runs the cubic family; drop -e/--file/--oracle");
    ordered_json sweep = ordered_json::array();
    int passed = 0, assigned = 0, total = 0;
    std::string table;
    for (double b : parse_sweep(*cfg.sweep)) {
      ++total;
      std::vector<CheckRow> rows;
      try {
        rows = verify_oracle(OracleId::cubic(b), cfg.fit_window);
      } catch (const std::exception& e) {
        rows.push_back({"oracle", OracleId::cubic(b).str(), std::string("error: ") + e.what(), 0.0, false, false});
      }
      ordered_json entry{{"b", b}};
      for (const auto& r : rows)
        if (r.name == "table1_case") {
          entry["case"] = r.measured;
          if (r.pass) ++assigned;
        }
      const bool ok = rows_pass(rows);
      if (ok) ++passed;
      entry["pass"] = ok;
      entry["rows"] = rows_json(rows);
      sweep.push_back(entry);
      table += "b = " + nlohmann::json(b).dump() + "\n" + rows_table(rows) + "\n";
    }
    ordered_json j{{"sweep", sweep},
                   {"table1_assignments", std::to_string(assigned) + "/" + std::to_string(total)},
                   {"passed", passed},
                   {"total", total},
                   {"pass", passed == total}};
    emit(cfg.pretty ? table + "table1 assignments " + j["table1_assignments"].get<std::string>() + "\n" : dump(j), cfg,
         out);
    return passed == total ? kOk : kError;
  }
  const Target t = resolve(cfg, std::nullopt);
  std::vector<CheckRow> rows;
  std::string target;
  if (t.oracle) {
    rows = verify_oracle(*t.oracle, cfg.fit_window);
    target = t.oracle->str();
  } else {
    rows = verify_pleated(*t.ode, std::nullopt, cfg.fit_window);
    target = to_string(t.ode->expr());
  }
  ordered_json j{{"target", target}};
  j.update(verify_block(rows));
  emit(cfg.pretty ? rows_table(rows) : dump(j), cfg, out);
  return rows_pass(rows) ? kOk : kError;
}

int cmd_portrait(const RunConfig& cfg, const Target& t, std::ostream& out) {
  if (!t.ode) throw DomainError("portrait needs an implicit equation");
  PortraitSpec spec;
  spec.integ.rel_tol = cfg.tol_rel;
  spec.integ.abs_tol = cfg.tol_abs;
  if (!(cfg.tol_rel > 0.0) || !(cfg.tol_abs > 0.0)) throw DomainError("tolerances must be positive");
  if (cfg.window) std::tie(spec.x_half, spec.p_half) = parse_window(*cfg.window);
  if (cfg.density) {
    spec.density = *cfg.density;
  } else if (const char* env = std::getenv("PLEATLAB_SEED_DENSITY"); env && *env) {
    char* end = nullptr;
    const long d = std::strtol(env, &end, 10);
    if (*end != '\0' || d < 1) throw DomainError("PLEATLAB_SEED_DENSITY must be a positive integer");
    spec.density = static_cast<int>(d);
  }
  const PortraitResult r = render(*t.ode, spec);
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  std::filesystem::create_directories(dir);
  const std::string base = r.case_name;
  auto write = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path.string());
    f << text;
    return path.string();
  };
  ordered_json manifest = r.manifest;
  if (t.oracle) manifest["oracle"] = t.oracle->str();
  ordered_json files = ordered_json::array();
  files.push_back(write(base + ".chart.svg", r.chart_svg));
  files.push_back(write(base + ".plane.svg", r.plane_svg));
  files.push_back(write(base + ".manifest.json", manifest.dump(2) + "\n"));
  ordered_json j{{"case", r.case_name}, {"files", files}, {"elements", r.elements.size()}, {"notes", r.notes}};
  out << (cfg.pretty ? r.case_name + ": " + std::to_string(r.elements.size()) + " elements\n" : dump(j));
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.oracle) throw DomainError("oracle needs --oracle id");
  const OracleId id = parse_oracle_id(*cfg.oracle);
  const Oracle o = make_oracle(id);
  ordered_json j{{"id", id.str()}};
  switch (id.kind) {
    case OracleKind::Cubic: {
      const double b = id.b;
      j["equation"] = o.equation;
      j["params"] = {{"b", b}};
      j["closed_forms"] = {{"criminant", "x = p^2/b, y = 2 p^3/3"},
                           {"C", "x = p^2/(3b-2), y = 2 p^3/(3(3b-2))"},
                           {"C'", "p = 0, y = 0"}};
      j["v0"] = 1.0 / (3.0 * b - 2.0);
      j["mK"] = 4.0 / 9.0 * b * b * b;
      j["mC"] = 4.0 / 9.0 * (3.0 * b - 2.0);
      if (b > 0.0 && b < 1.0 && b != 0.5) j["beta"] = node_beta(b);
      break;
    }
    case OracleKind::WellFolded:
      j["equation"] = o.equation;
      j["params"] = {{"alpha", id.alpha}};
      j["closed_forms"] = {{"criminant", "p = -alpha x, y = 0"}};
      break;
    case OracleKind::NodeNonres:
      j["field"] = "xi' = xi, eta' = beta eta";
      j["params"] = {{"beta", id.beta}};
      j["closed_forms"] = {{"integral_curves", "eta = c |xi|^beta, and xi = 0"}};
      break;
    case OracleKind::NodeRes:
      j["field"] = "xi' = xi, eta' = n eta + eps xi^n";
      j["params"] = {{"n", id.n}, {"eps", id.eps}};
      j["closed_forms"] = {{"integral_curves", "eta = xi^n (c + eps ln|xi|), and xi = 0"}};
      j["smoothness_at_O"] = id.eps ? ordered_json("C^" + std::to_string(id.n - 1)) : ordered_json("C^inf");
      break;
  }
  if (o.ode) j["classification"] = classify_json(classify_singular_point(*o.ode));
  emit(dump(j), cfg, out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular points of implicit ODEs F(x, y, p) = 0"};
  app.name("pleatlab");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::optional<std::string> origin;
  app.add_option("-e,--equation", cfg.equation, "F(x, y, p) as an expression");
  app.add_option("--file", cfg.file, "file holding the expression");
  app.add_option("-P,--param", cfg.params, "parameter binding name=value (repeatable)");
  app.add_option("--origin", origin, "distinguished point x,y,p (default 0,0,0)");
  app.add_option("--window", cfg.window, "chart half-widths: h or xh,ph");
  app.add_option("--tol-rel", cfg.tol_rel, "integrator relative tolerance");
  app.add_option("--tol-abs", cfg.tol_abs, "integrator absolute tolerance");
  app.add_option("--fit-window", cfg.fit_window, "|p| window of the semicubic fits");
  app.add_option("-o,--out", cfg.out, "output file (directory for portrait)");
  app.add_flag("--pretty", cfg.pretty, "human-readable tables instead of JSON");
  app.add_option("--oracle", cfg.oracle, "oracle id, e.g. cubic:b=2");
  app.add_option("--sweep", cfg.sweep, "cubic family sweep, e.g. b=-3,-1,0.25");
  app.add_option("--epsilon", cfg.epsilon, "resonant normal-form coefficient: 0, 1 or unknown");

  auto* classify = app.add_subcommand("classify", "classify the singular point at the origin");
  auto* trace = app.add_subcommand("trace", "write a curve as CSV");
  trace->add_option("--curve", cfg.curve, "criminant, C, C' or orbit");
  trace->add_option("--seed", cfg.seed, "orbit seed x,p");
  trace->add_option("--direction", cfg.direction, "orbit time direction, 1 or -1")->check(CLI::IsMember({1, -1}));
  auto* verify = app.add_subcommand("verify", "check the predicted invariants");
  auto* portrait = app.add_subcommand("portrait", "render chart and plane phase portraits");
  portrait->add_option("--density", cfg.density, "seed density (default from PLEATLAB_SEED_DENSITY or 2)");
  auto* oracle = app.add_subcommand("oracle", "describe an oracle family member");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pleatlab: " << e.what() << "\n";
    return kError;
  }

  try {
    if (*classify) return cmd_classify(cfg, resolve(cfg, origin), out);
    if (*trace) return cmd_trace(cfg, resolve(cfg, origin), out);
    if (*verify) return cmd_verify(cfg, out);
    if (*portrait) return cmd_portrait(cfg, resolve(cfg, origin), out);
    if (*oracle) return cmd_oracle(cfg, out);
  } catch (const std::exception& e) {
    err << "pleatlab: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace pleatlab::cli

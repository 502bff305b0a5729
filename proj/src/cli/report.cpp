#include <cmath>
#include <cstdio>
#include <sstream>

#include "pleatlab/cli.hpp"
#include "pleatlab/curves.hpp"
#include "pleatlab/errors.hpp"
#include "pleatlab/flow.hpp"

namespace pleatlab::cli {

using nlohmann::ordered_json;

namespace {

ordered_json smooth(const Smoothness& s) {
  if (s.is_infinite()) return "inf";
  return *s.order;
}

const char* eps_name(Epsilon e) {
  switch (e) {
    case Epsilon::Zero: return "0";
    case Epsilon::One: return "1";
    case Epsilon::Unknown: return "unknown";
  }
  return "?";
}

const char* ordering_name(Ordering o) { return o == Ordering::Less ? "<" : ">"; }

ordered_json eigen_json(const std::array<std::complex<double>, 2>& ev) {
  ordered_json a = ordered_json::array();
  const bool real = ev[0].imag() == 0.0 && ev[1].imag() == 0.0;
  for (const auto& z : ev) {
    if (real) a.push_back(z.real());
    else a.push_back({z.real(), z.imag()});
  }
  return a;
}

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

CheckRow failed(std::string name, ordered_json predicted, const std::exception& e) {
  return {std::move(name), std::move(predicted), std::string("error: ") + e.what(), 0.0, false, false};
}

CheckRow relative_row(std::string name, double predicted, double measured, double tol) {
  const double rel = std::abs(measured - predicted) / std::max(std::abs(predicted), 1e-300);
  return {std::move(name), predicted, measured, tol, std::isfinite(measured) && rel < tol, false};
}

}  // namespace

ordered_json classify_json(const SingularClass& sc) {
  ordered_json j;
  j["kind"] = to_string(sc.kind);
  j["b"] = nullptr;
  j["case"] = nullptr;
  j["eigenvalues"] = nullptr;
  j["stability"] = nullptr;
  j["well_folded"] = nullptr;
  j["resonance"] = nullptr;
  j["smoothness"] = nullptr;
  if (sc.pleated) {
    const auto& pi = *sc.pleated;
    j["b"] = pi.b;
    j["case"] = to_string(pi.row.id);
    j["eigenvalues"] = {pi.eigenvalues[0], pi.eigenvalues[1]};
    j["stability"] = to_string(pi.row.field);
    if (pi.resonance) {
      j["resonance"] = {{"form", to_string(pi.resonance->form)},
                        {"n", pi.resonance->n},
                        {"i", pi.resonance->relation.i},
                        {"k1", pi.resonance->relation.k1},
                        {"k2", pi.resonance->relation.k2}};
    }
    const auto& s = pi.smoothness;
    ordered_json sm{{"k", smooth(s.k)}, {"l", smooth(s.l)}, {"case", s.resonance_case},
                    {"epsilon_assumed", eps_name(s.epsilon_assumed)}};
    if (s.if_epsilon_zero)
      sm["if_epsilon_zero"] = {{"k", smooth(s.if_epsilon_zero->first)}, {"l", smooth(s.if_epsilon_zero->second)}};
    sm["reduction_s"] = smooth(s.reduction_s);
    j["smoothness"] = sm;
    ordered_json row{{"field", to_string(pi.row.field)},
                     {"sign_inv_b", pi.row.sign_inv_b},
                     {"sign_inv_cusp", pi.row.sign_inv_cusp}};
    row["inv_b_vs_inv_cusp"] = pi.row.inv_b_vs_inv_cusp ? ordered_json(ordering_name(*pi.row.inv_b_vs_inv_cusp)) : ordered_json();
    row["b3_vs_cusp"] = pi.row.b3_vs_cusp ? ordered_json(ordering_name(*pi.row.b3_vs_cusp)) : ordered_json();
    j["table1"] = row;
    j["normal_form"] = {{"sigma", pi.normal_form.sigma},
                        {"shift", pi.normal_form.shift},
                        {"c_before_shift", pi.normal_form.c_before_shift}};
  }
  if (sc.folded) {
    const auto& f = *sc.folded;
    j["eigenvalues"] = eigen_json(f.lin.eigenvalues);
    j["stability"] = to_string(f.stability);
    j["well_folded"] = f.well_folded;
    if (f.resonance) j["resonance"] = {{"i", f.resonance->i}, {"k1", f.resonance->k1}, {"k2", f.resonance->k2}};
    j["folded"] = {{"a", f.a}, {"b", f.b}, {"c", f.c}};
  }
  if (sc.kind == SingularKind::Degenerate) j["degenerate_reason"] = sc.degenerate_reason;
  const auto& m = sc.margins;
  j["margins"] = {{"tau", m.tau},   {"scale", m.scale}, {"F", m.F},   {"Fp", m.Fp},
                  {"Fpp", m.Fpp},   {"Fppp", m.Fppp},   {"Fxp", m.Fxp}, {"Fy", m.Fy},
                  {"inflection", m.inflection}};
  return j;
}

ordered_json rows_json(const std::vector<CheckRow>& rows) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rows)
    a.push_back({{"name", r.name},
                 {"predicted", r.predicted},
                 {"measured", r.measured},
                 {"tol", r.tol},
                 {"pass", r.pass},
                 {"informational", r.informational}});
  return a;
}

bool rows_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (!r.informational && !r.pass) return false;
  return true;
}

std::string rows_table(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-22s %-22s %-9s %s\n", "check", "predicted", "measured", "tol", "result");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-26s %-22s %-22s %-9.2g %s\n", r.name.c_str(), r.predicted.dump().c_str(),
                  r.measured.dump().c_str(), r.tol, r.informational ? "info" : (r.pass ? "pass" : "FAIL"));
    os << line;
  }
  return os.str();
}

std::vector<CheckRow> verify_pleated(const ImplicitOde& ode, std::optional<double> oracle_b, double fit_window) {
  std::vector<CheckRow> rows;
  const SingularClass sc = classify_singular_point(ode);
  if (!sc.pleated) {
    rows.push_back({"kind", "PleatedImproper", to_string(sc.kind), 0.0, false, false});
    return rows;
  }
  const double bm = sc.pleated->b;
  const double b = oracle_b.value_or(bm);
  if (oracle_b) rows.push_back({"b", b, bm, 1e-9, std::abs(b - bm) <= 1e-9 * std::max(1.0, std::abs(b)), false});

  Table1Row expected;
  try {
    expected = table1_case(b);
  } catch (const std::exception& e) {
    rows.push_back(failed("table1_case", nullptr, e));
    return rows;
  }
  rows.push_back({"table1_case", to_string(expected.id), to_string(sc.pleated->row.id), 0.0,
                  expected.id == sc.pleated->row.id, false});
  {
    const LinearPart lin = linear_part(chart_jacobian(ode));
    const bool saddle = lin.real && lin.eigenvalues[0].real() * lin.eigenvalues[1].real() < 0.0;
    const char* measured = saddle ? "saddle" : (lin.real ? "node" : "focus");
    rows.push_back({"field", to_string(expected.field), measured, 0.0,
                    std::string(measured) == to_string(expected.field), false});
  }

  FitOptions fopts;
  fopts.window = fit_window;
  const double v0 = 1.0 / (3.0 * b - 2.0);
  try {
    const CurveCCheck l = curve_c_check(ode, {}, fopts);
    if (l.invariance_residual) {
      rows.push_back({"c_invariance", 0.0, *l.invariance_residual, 1e-10, *l.invariance_residual < 1e-10, false});
      CheckRow r = relative_row("c_v0", v0, l.v0_fitted, 0.01);
      r.informational = true;
      if (!std::isfinite(l.v0_fitted)) r.measured = nullptr;
      rows.push_back(r);
    } else {
      rows.push_back(relative_row("c_v0", v0, l.v0_fitted, 0.01));
    }
  } catch (const std::exception& e) {
    rows.push_back(failed("c_v0", v0, e));
  }

  try {
    const ArrangementReport a = arrangement(ode, {}, fopts);
    rows.push_back(relative_row("mK", 4.0 / 9.0 * b * b * b, a.mK, 0.01));
    rows.push_back(relative_row("mC", 4.0 / 9.0 * (3.0 * b - 2.0), a.mC, 0.01));
    const int sk = sgn(a.fit_K.A), scp = sgn(a.fit_C.A);
    rows.push_back({"sign(1/b)", expected.sign_inv_b, sk, 0.0, sk == expected.sign_inv_b, false});
    rows.push_back({"sign(1/(3b-2))", expected.sign_inv_cusp, scp, 0.0, scp == expected.sign_inv_cusp, false});
    if (expected.inv_b_vs_inv_cusp) {
      const Ordering got = std::abs(a.fit_K.A) < std::abs(a.fit_C.A) ? Ordering::Less : Ordering::Greater;
      rows.push_back({"|1/b| vs |1/(3b-2)|", ordering_name(*expected.inv_b_vs_inv_cusp), ordering_name(got), 0.0,
                      got == *expected.inv_b_vs_inv_cusp, false});
    }
    if (expected.b3_vs_cusp) {
      const Ordering got = std::abs(a.mK) < std::abs(a.mC) ? Ordering::Less : Ordering::Greater;
      rows.push_back({"|b^3| vs |3b-2|", ordering_name(*expected.b3_vs_cusp), ordering_name(got), 0.0,
                      got == *expected.b3_vs_cusp, false});
    }
    const bool same = !(b > 0.0 && b < 2.0 / 3.0);
    rows.push_back({"same_semiplane", same, a.same_semiplane, 0.0, same == a.same_semiplane, false});
    if (same) {
      const bool tongue = b < -2.0 || b > 2.0 / 3.0;
      const ordered_json got = a.c_in_tongue ? ordered_json(*a.c_in_tongue) : ordered_json();
      rows.push_back({"c_in_tongue", tongue, got, 0.0, a.c_in_tongue == tongue, false});
    }
  } catch (const std::exception& e) {
    rows.push_back(failed("arrangement", nullptr, e));
  }
  return rows;
}

namespace {

double closed_form_error(const Oracle& o, double c) {
  const double xi0 = 1e-3;
  IntegrationOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-15;
  opts.max_step = 0.01;
  FlowLimits lim;
  lim.window = Window{0.0, 1.0, -1e6, 1e6};
  const Trajectory t =
      integrate_field(Field::planar(o.planar), {xi0, o.integral_curve(c, xi0)}, 1, opts, lim);
  if (t.meta.stop != StopReason::WindowExit || t.samples.back().x < 1.0 - 1e-9)
    throw IntegrationError("node orbit did not reach xi = 1");
  double worst = 0.0;
  for (const auto& s : t.samples) worst = std::max(worst, std::abs(s.p - o.integral_curve(c, s.x)));
  return worst;
}

}  // namespace

std::vector<CheckRow> verify_oracle(const OracleId& id, double fit_window) {
  const Oracle o = make_oracle(id);
  std::vector<CheckRow> rows;
  switch (id.kind) {
    case OracleKind::Cubic:
      return verify_pleated(*o.ode, id.b, fit_window);
    case OracleKind::WellFolded: {
      const double a = id.alpha;
      std::string expected = "Degenerate";
      if (a < -kClassifyMargin) expected = "saddle";
      else if (a > kClassifyMargin && a < 0.125 - kClassifyMargin) expected = "node";
      else if (a > 0.125 + kClassifyMargin) expected = "focus";
      const SingularClass sc = classify_singular_point(*o.ode);
      const std::string kind_expected = expected == "Degenerate" ? "Degenerate" : "FoldedImproper";
      rows.push_back({"kind", kind_expected, to_string(sc.kind), 0.0, kind_expected == to_string(sc.kind), false});
      if (expected != "Degenerate") {
        const std::string got = sc.folded ? to_string(sc.folded->stability) : "none";
        rows.push_back({"stability", expected, got, 0.0, got == expected, false});
      }
      return rows;
    }
    case OracleKind::NodeNonres:
    case OracleKind::NodeRes:
      for (double c : {1.0, -0.5, 5.0}) {
        const std::string name = "closed_form c=" + nlohmann::json(c).dump();
        try {
          const double err = closed_form_error(o, c);
          rows.push_back({name, 0.0, err, 1e-8, err < 1e-8, false});
        } catch (const std::exception& e) {
          rows.push_back(failed(name, 0.0, e));
        }
      }
      return rows;
  }
  return rows;
}

}  // namespace pleatlab::cli

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Usage: pleatlab_acceptance [output-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pleatlab/classify.hpp"
#include "pleatlab/curves.hpp"
#include "pleatlab/flow.hpp"
#include "pleatlab/nflab.hpp"
#include "pleatlab/portrait.hpp"
#include "support/ad_check.hpp"

using namespace pleatlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ImplicitOde cubic(double b, const std::string& extra = "") {
  return ImplicitOde::from_text("b*x*p - p^3/3 - y" + extra, {{"b", b}});
}

const std::string kPerturbation = " + p^4 + x^2*p";  // phi = p^4, x psi with psi = x p
const double kRepresentatives[] = {-3.0, -1.0, 0.25, 0.55, 0.8, 2.0};

Outcome c1_jets() {
  const fdo::AdReport rep = fdo::ad_check(50, 20240917u);
  Outcome o;
  o.pass = rep.expressions == 50 && rep.mismatches.empty();
  o.detail = std::to_string(rep.expressions) + " expressions, " + std::to_string(rep.partials) +
             " partials, max rel err " + fmt("%.2e", rep.max_rel) + ", " +
             std::to_string(rep.mismatches.size()) + " mismatches";
  return o;
}

Outcome c2_criminant() {
  double worst = 0.0;
  bool covered = true;
  for (double b : kRepresentatives) {
    const Trajectory k = trace_criminant(cubic(b));
    double lo = 0.0, hi = 0.0;
    for (const auto& s : k.samples) {
      if (std::abs(s.p) > 0.3 + 1e-12) continue;
      worst = std::max({worst, std::abs(s.x - s.p * s.p / b), std::abs(s.y - 2.0 * s.p * s.p * s.p / 3.0)});
      lo = std::min(lo, s.p);
      hi = std::max(hi, s.p);
    }
    covered = covered && lo <= -0.3 + 1e-9 && hi >= 0.3 - 1e-9;
  }
  return {worst < 1e-8 && covered, "max deviation " + fmt("%.2e", worst) + " on |p| <= 0.3 (tol 1e-8)"};
}

Outcome c3_v0() {
  Outcome o{true, ""};
  double worst = 0.0;
  for (double b : {-3.0, -1.0, 0.25, 0.8, 2.0}) {
    const CurveCCheck r = curve_c_check(cubic(b));
    const double rel = std::abs(r.v0_fitted - 1.0 / (3.0 * b - 2.0)) / std::abs(1.0 / (3.0 * b - 2.0));
    worst = std::max(worst, rel);
    o.pass = o.pass && rel < 0.01;
  }
  const double inv = cubic_invariance_residual(0.55);
  o.pass = o.pass && inv < 1e-10;
  o.detail = "max v0 rel err " + fmt("%.2e", worst) + " (tol 1e-2); N2 invariance residual " + fmt("%.2e", inv) +
             " (tol 1e-10)";
  return o;
}

int sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Outcome c4_table1() {
  Outcome o{true, ""};
  double worst = 0.0;
  int rows_ok = 0;
  for (double b : kRepresentatives) {
    const ImplicitOde ode = cubic(b);
    const SingularClass sc = classify_singular_point(ode);
    const Table1Row row = table1_case(b);
    const ArrangementReport ar = arrangement(ode);
    const double mK = 4.0 / 9.0 * b * b * b, mC = 4.0 / 9.0 * (3.0 * b - 2.0);
    const double ek = std::abs(ar.mK - mK) / std::abs(mK), ec = std::abs(ar.mC - mC) / std::abs(mC);
    worst = std::max({worst, ek, ec});

    bool ok = sc.kind == SingularKind::PleatedImproper && sc.pleated->row.id == row.id;
    // row 1: field type
    const LinearPart lp = linear_part(chart_jacobian(ode));
    const bool saddle = lp.eigenvalues[0].real() * lp.eigenvalues[1].real() < 0;
    ok = ok && (saddle ? Stability::Saddle : Stability::Node) == row.field;
    // row 2: signs read off the fits
    ok = ok && sign(ar.fit_K.A) == row.sign_inv_b && sign(ar.fit_C.A) == row.sign_inv_cusp;
    ok = ok && sign(ar.mK) == row.sign_inv_b && sign(ar.mC) == row.sign_inv_cusp;
    // rows 3 and 4: magnitude comparisons where the table has them
    if (row.inv_b_vs_inv_cusp)
      ok = ok && (std::abs(ar.fit_K.A) > std::abs(ar.fit_C.A) ? Ordering::Greater : Ordering::Less) ==
                     *row.inv_b_vs_inv_cusp;
    if (row.b3_vs_cusp)
      ok = ok && (std::abs(ar.mK) > std::abs(ar.mC) ? Ordering::Greater : Ordering::Less) == *row.b3_vs_cusp;
    ok = ok && ek < 0.01 && ec < 0.01;
    rows_ok += ok ? 1 : 0;
    o.pass = o.pass && ok;
  }
  o.detail = std::to_string(rows_ok) + "/6 cases reproduce their column; max m rel err " + fmt("%.2e", worst) +
             " (tol 1e-2)";
  return o;
}

Outcome c5_wellfolded() {
  const std::pair<double, Stability> cases[] = {
      {-1.0, Stability::Saddle}, {1.0 / 16, Stability::Node}, {0.25, Stability::Focus}};
  Outcome o{true, ""};
  for (const auto& [alpha, want] : cases) {
    const SingularClass sc = classify_singular_point(make_oracle(OracleId::wellfolded(alpha)).ode.value());
    const bool ok = sc.kind == SingularKind::FoldedImproper && sc.folded->stability == want;
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : ", ") + fmt("alpha=%g -> ", alpha) +
                (sc.folded ? to_string(sc.folded->stability) : to_string(sc.kind));
  }
  return o;
}

Outcome c6_resonance() {
  Outcome o{true, ""};
  auto res = [](double b) { return classify_singular_point(cubic(b)).pleated->resonance; };
  const auto a = res(1.0 / 3), b = res(0.75), c = res(0.55);
  o.pass = a && a->form == NodeResonance::Form::InverseSuccessor && a->n == 2;
  o.pass = o.pass && b && b->form == NodeResonance::Form::SuccessorRatio && b->n == 3;
  o.pass = o.pass && !c;
  auto show = [](const std::optional<NodeResonance>& r) {
    return r ? std::string(to_string(r->form)) + " n=" + std::to_string(r->n) : std::string("none");
  };
  o.detail = "b=1/3: " + show(a) + "; b=3/4: " + show(b) + "; b=0.55: " + show(c) + " (scan bound " +
             std::to_string(kResonanceMaxOrder) + ")";
  return o;
}

Outcome c7_perturbation() {
  Outcome o{true, ""};
  double worst = 0.0;
  for (double b : {-3.0, 0.25, 0.8, 2.0}) {
    const ImplicitOde plain = cubic(b), pert = cubic(b, kPerturbation);
    const SingularClass s0 = classify_singular_point(plain), s1 = classify_singular_point(pert);
    const bool same = s1.kind == SingularKind::PleatedImproper && s1.pleated->row.id == s0.pleated->row.id;
    const double v0 = curve_c_check(plain).v0_fitted, v1 = curve_c_check(pert).v0_fitted;
    const double shift = std::abs(v1 - v0) / std::abs(v0);
    worst = std::max(worst, shift);
    o.pass = o.pass && same && shift < 0.02;
  }
  o.detail = "cases unchanged, max v0 shift " + fmt("%.2e", worst) + " (tol 2e-2)";
  return o;
}

Outcome c8_reduction() {
  const ImplicitOde pert = cubic(2.0, " + x^2*p");
  const Form12Reduction r = reduce_to_form12(pert, 0.1);
  double direct = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -0.1 + 0.2 * i / 200;
    direct = std::max(direct, std::abs(r.G(pert, x, 0.0, 0.0)));
  }
  const ImplicitOde plain = cubic(2.0);
  const Form12Reduction id = reduce_to_form12(plain, 0.1);
  double u_max = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -0.1 + 0.2 * i / 200;
    u_max = std::max({u_max, std::abs(id.u.value(x)), std::abs(id.u.derivative(x))});
  }
  const bool pass = r.max_residual < 1e-6 && direct < 1e-6 && u_max < 1e-12;
  return {pass, "residual " + fmt("%.2e", std::max(r.max_residual, direct)) + " on |x| <= 0.1 (tol 1e-6); max |u|, |u'| " +
                    fmt("%.2e", u_max) + " unperturbed (tol 1e-12)"};
}

std::vector<std::pair<double, double>> plane_points(const PortraitElement& e) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : e.curve.samples) out.emplace_back(s.x, s.y);
  return out;
}

const PortraitElement* element(const PortraitResult& r, const std::string& id) {
  for (const auto& e : r.elements)
    if (e.id == id) return &e;
  return nullptr;
}

// Tongue of the semicubic pi(K): both branches out to |x| = reach, closed.
std::vector<std::pair<double, double>> tongue(const PortraitElement& k, double reach) {
  std::vector<std::pair<double, double>> upper, lower;
  for (const auto& s : k.curve.samples) {
    if (std::abs(s.x) > reach) continue;
    (s.p >= 0 ? upper : lower).emplace_back(s.x, s.y);
  }
  std::vector<std::pair<double, double>> poly(lower.begin(), lower.end());
  poly.insert(poly.end(), upper.begin(), upper.end());
  return poly;
}

Outcome c9_portraits(const std::filesystem::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(dir);
  PortraitSpec spec;
  std::map<std::string, PortraitResult> results;
  for (double b : kRepresentatives) {
    PortraitResult r = render(cubic(b), spec);
    for (const auto& [suffix, text] : std::vector<std::pair<std::string, std::string>>{
             {".chart.svg", r.chart_svg}, {".plane.svg", r.plane_svg}, {".manifest.json", r.manifest.dump(2) + "\n"}}) {
      std::ofstream f(dir / (r.case_name + suffix), std::ios::binary);
      f << text;
    }
    results.emplace(r.case_name, std::move(r));
  }

  Outcome o{results.size() == 6, ""};
  for (const char* name : {"S1", "S2", "N1", "N2", "N3", "S3"})
    for (const char* suffix : {".chart.svg", ".plane.svg"})
      o.pass = o.pass && std::filesystem::file_size(dir / (std::string(name) + suffix)) > 0;

  // saddles: exactly four bold separatrix branches meeting at O
  std::string seps;
  for (const char* name : {"S1", "S2", "S3"}) {
    const auto& r = results.at(name);
    int n = 0;
    for (const auto* e : r.of_kind("separatrix")) {
      const auto& first = e->curve.samples.front();
      n += (e->style == "bold" && std::hypot(first.x, first.p) < 1e-3) ? 1 : 0;
    }
    o.pass = o.pass && n == 4 && r.of_kind("separatrix").size() == 4;
    seps += std::string(seps.empty() ? "" : ",") + std::to_string(n);
  }

  // N1: the cusps of pi(C) and pi(K) open into opposite half-planes x > 0, x < 0
  bool opposite = false;
  {
    const auto& r = results.at("N1");
    const PortraitElement* k = element(r, "K");
    const PortraitElement *cp = element(r, "C+"), *cm = element(r, "C-");
    if (k && cp && cm) {
      auto side = [](const PortraitElement& e) {
        int pos = 0, neg = 0;
        for (const auto& s : e.curve.samples) {
          if (s.x > 1e-9) ++pos;
          if (s.x < -1e-9) ++neg;
        }
        return pos > 0 && neg == 0 ? 1 : (neg > 0 && pos == 0 ? -1 : 0);
      };
      const int sk = side(*k), sc = side(*cp);
      opposite = sk != 0 && sc != 0 && sk == -sc && side(*cm) == sc;
    }
  }
  o.pass = o.pass && opposite;

  // S3 and N3: pi(C) inside the tongue of pi(K)
  std::string tongue_info;
  for (const char* name : {"S3", "N3"}) {
    const auto& r = results.at(name);
    const PortraitElement* k = element(r, "K");
    bool inside = k != nullptr;
    int tested = 0;
    if (k) {
      double k_reach = 0.0;
      for (const auto& s : k->curve.samples) k_reach = std::max(k_reach, std::abs(s.x));
      const auto poly = tongue(*k, k_reach);
      for (const char* cid : {"C+", "C-"}) {
        const PortraitElement* c = element(r, cid);
        if (!c) {
          inside = false;
          continue;
        }
        for (const auto& [x, y] : plane_points(*c)) {
          if (std::abs(x) < 1e-9 || std::abs(x) > 0.95 * k_reach) continue;
          ++tested;
          inside = inside && polygon_contains(poly, x, y);
        }
      }
    }
    inside = inside && tested > 0;
    o.pass = o.pass && inside;
    tongue_info += std::string(tongue_info.empty() ? "" : ", ") + name + (inside ? " inside" : " NOT inside") + " (" +
                   std::to_string(tested) + " pts)";
  }

  // byte-identical rerun
  bool identical = true;
  for (double b : kRepresentatives) {
    const PortraitResult again = render(cubic(b), spec);
    const auto& first = results.at(again.case_name);
    identical = identical && again.chart_svg == first.chart_svg && again.plane_svg == first.plane_svg &&
                again.manifest.dump() == first.manifest.dump();
  }
  o.pass = o.pass && identical;

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && secs < 60.0;
  o.detail = "6 pairs in " + dir.string() + "; separatrices S1,S2,S3 = " + seps + "; N1 opposite half-planes " +
             (opposite ? "yes" : "no") + "; " + tongue_info + "; rerun " + (identical ? "identical" : "differs") +
             "; " + fmt("%.1f s", secs) + " incl. rerun (limit 60 s)";
  return o;
}

double node_error(const OracleId& id, double c) {
  const Oracle o = make_oracle(id);
  IntegrationOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-15;
  opts.max_step = 0.01;
  FlowLimits lim;
  lim.extra = [](const ChartPoint& z) { return z.x >= 1.0 ? StopReason::RangeEnd : StopReason::None; };
  const double xi0 = 1e-3;
  const Trajectory tr = integrate_field(Field::planar(o.planar), {xi0, o.integral_curve(c, xi0)}, 1, opts, lim);
  if (tr.meta.stop != StopReason::RangeEnd) return INFINITY;
  double worst = 0.0;
  for (const auto& s : tr.samples)
    if (s.x <= 1.0) worst = std::max(worst, std::abs(s.p - o.integral_curve(c, s.x)));
  return worst;
}

Outcome c10_node_forms() {
  double worst = 0.0;
  int runs = 0;
  for (double beta : {4.0, 3.0, 2.5, 1.5})
    for (double c : {1.0, -0.5, 5.0}) worst = std::max(worst, node_error(OracleId::node_nonres(beta), c)), ++runs;
  for (int n : {2, 3, 4})
    for (int eps : {0, 1})
      for (double c : {1.0, 0.0, -0.5}) worst = std::max(worst, node_error(OracleId::node_res(n, eps), c)), ++runs;
  return {worst < 1e-8, std::to_string(runs) + " curves on xi in [1e-3, 1], max error " + fmt("%.2e", worst) +
                            " (tol 1e-8)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1  jet partials vs finite differences", c1_jets},
      {"2  criminant of the cubic family", c2_criminant},
      {"3  quadratic coefficient v0 of C", c3_v0},
      {"4  case table and semicubic invariants", c4_table1},
      {"5  well-folded thresholds", c5_wellfolded},
      {"6  resonance detection", c6_resonance},
      {"7  flat perturbations", c7_perturbation},
      {"8  reduction along C'", c8_reduction},
      {"9  phase portraits", [&] { return c9_portraits(out); }},
      {"10 node normal forms", c10_node_forms},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-42s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

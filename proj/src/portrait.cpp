#include "pleatlab/portrait.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "pleatlab/errors.hpp"
#include "pleatlab/svg.hpp"

namespace pleatlab {

Trajectory integrate(const Field& field, const ChartPoint& seed, const PortraitSpec& spec, int direction,
                     const ChartPoint& origin, double y_seed) {
  if (!(spec.integ.rel_tol > 0.0) || !(spec.integ.abs_tol > 0.0))
    throw IntegrationError("tolerances must be positive");
  FlowLimits lim;
  lim.window = spec.window_around(origin);
  lim.max_arc = spec.max_arc;
  lim.origin = origin;
  lim.origin_radius = spec.stop_radius;
  return integrate_field(field, seed, direction, spec.integ, lim, y_seed);
}

std::vector<ChartPoint> seed_grid(const Window& w, int density, const ChartPoint& origin, double stop_radius) {
  if (density < 1) throw DomainError("seed density must be at least 1");
  std::vector<ChartPoint> seeds;
  auto keep = [&](const ChartPoint& z) {
    if (distance(z, origin) > 5.0 * stop_radius) seeds.push_back(z);
  };
  const int per_side = 4 * density;
  auto lerp = [](double a, double b, double s) { return a + (b - a) * s; };
  for (int k = 0; k < per_side; ++k) keep(ChartPoint{lerp(w.x_min, w.x_max, (k + 0.5) / per_side), w.p_min});
  for (int k = 0; k < per_side; ++k) keep(ChartPoint{w.x_max, lerp(w.p_min, w.p_max, (k + 0.5) / per_side)});
  for (int k = 0; k < per_side; ++k) keep(ChartPoint{lerp(w.x_max, w.x_min, (k + 0.5) / per_side), w.p_max});
  for (int k = 0; k < per_side; ++k) keep(ChartPoint{w.x_min, lerp(w.p_max, w.p_min, (k + 0.5) / per_side)});
  const int cells = 2 * density;
  for (int i = 1; i < cells; ++i)
    for (int j = 1; j < cells; ++j) {
      keep(ChartPoint{lerp(w.x_min, w.x_max, static_cast<double>(j) / cells),
                      lerp(w.p_max, w.p_min, static_cast<double>(i) / cells)});
    }
  return seeds;
}

std::vector<const PortraitElement*> PortraitResult::of_kind(const std::string& kind) const {
  std::vector<const PortraitElement*> out;
  for (const auto& e : elements)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

std::string portrait_case_name(const SingularClass& cls) {
  if (cls.kind == SingularKind::PleatedImproper && cls.pleated) return to_string(cls.pleated->row.id);
  if (cls.kind == SingularKind::FoldedImproper && cls.folded)
    return std::string("FoldedImproper-") + to_string(cls.folded->stability);
  return to_string(cls.kind);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Both time directions from one seed, ordered along the flow.
Trajectory full_orbit(const Field& field, const ChartPoint& seed, const PortraitSpec& spec, const ChartPoint& o,
                      double y0) {
  Trajectory back = integrate(field, seed, spec, -1, o, y0);
  Trajectory fwd = integrate(field, seed, spec, 1, o, y0);
  Trajectory out;
  out.meta.seed = seed;
  out.samples.assign(back.samples.rbegin(), back.samples.rend());
  if (!out.samples.empty() && !fwd.samples.empty()) out.samples.pop_back();
  out.samples.insert(out.samples.end(), fwd.samples.begin(), fwd.samples.end());
  out.meta.stop = fwd.meta.stop;
  return out;
}

Trajectory clip_to(const Trajectory& t, const Window& w) {
  Trajectory out = t;
  out.samples.clear();
  for (const auto& s : t.samples)
    if (w.contains({s.x, s.p})) out.samples.push_back(s);
  return out;
}

}  // namespace

PortraitResult render(const ImplicitOde& ode, const PortraitSpec& spec) {
  if (!(spec.x_half > 0.0) || !(spec.p_half > 0.0)) throw DomainError("window must contain O");
  PortraitResult res;
  res.cls = classify_singular_point(ode);
  res.case_name = portrait_case_name(res.cls);
  const ChartPoint o{ode.origin().x, ode.origin().p};
  const double y0 = ode.origin().y;
  const Window win = spec.window_around(o);
  const Field field = Field::chart(ode);

  const std::vector<ChartPoint> seeds = spec.seeds.empty() ? seed_grid(win, spec.density, o, spec.stop_radius) : spec.seeds;
  std::vector<Trajectory> orbits(seeds.size());
  {
    std::atomic<std::size_t> next{0};
    unsigned n = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));
    auto worker = [&] {
      for (std::size_t i = next++; i < seeds.size(); i = next++) orbits[i] = full_orbit(field, seeds[i], spec, o, y0);
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (orbits[i].size() < 2) {
      res.notes.push_back("seed " + std::to_string(i) + " produced no trajectory (" +
                          to_string(orbits[i].meta.stop) + ")");
      continue;
    }
    orbits[i].meta.label = "seed:" + std::to_string(i);
    res.elements.push_back({"t" + std::to_string(i), "trajectory", "thin",
                            "seed:" + std::to_string(i) + "@(" + fmt(seeds[i].x) + "," + fmt(seeds[i].p) + ")",
                            std::move(orbits[i])});
  }

  try {
    TraceOptions t;
    t.p_min = win.p_min;
    t.p_max = win.p_max;
    t.step = spec.p_half / 100.0;
    Trajectory k = clip_to(trace_criminant(ode, t), win);
    if (k.size() >= 2) res.elements.push_back({"K", "criminant", "dashed", "locus:criminant", std::move(k)});
  } catch (const Error& e) {
    res.notes.push_back(std::string("criminant omitted: ") + e.what());
  }

  const bool pleated = res.cls.kind == SingularKind::PleatedImproper;
  const bool folded = res.cls.kind == SingularKind::FoldedImproper && res.cls.folded &&
                      res.cls.folded->stability != Stability::Focus;
  if (pleated || folded) {
    const LinearPart lin = linear_part(chart_jacobian(ode));
    const bool saddle = lin.real && lin.eigenvalues[0].real() * lin.eigenvalues[1].real() < 0.0;
    for (CurveKind which : {CurveKind::Vertical, CurveKind::Horizontal}) {
      try {
        CurveOptions c;
        c.window = win;
        c.integ = spec.integ;
        c.stop_radius = spec.stop_radius;
        double reach = spec.p_half;
        if (lin.directions) {
          const auto& d = *lin.directions;
          const int vert = std::abs(d[0].p) >= std::abs(d[1].p) ? 0 : 1;
          const ChartPoint e = d[which == CurveKind::Vertical ? vert : 1 - vert];
          reach = std::min(std::abs(e.x) > 1e-12 ? spec.x_half / std::abs(e.x) : 1e300,
                           std::abs(e.p) > 1e-12 ? spec.p_half / std::abs(e.p) : 1e300);
        }
        c.arc = saddle ? spec.max_arc : 0.9 * reach;
        const InvariantCurve ic = invariant_curve(ode, which, c);
        for (int k = 0; k < 2; ++k) {
          Trajectory b = clip_to(ic.branches[k], win);
          if (b.size() < 2) continue;
          const std::string id = b.meta.label;
          res.elements.push_back({id, saddle ? "separatrix" : "invariant_curve", "bold", "locus:" + id, std::move(b)});
        }
      } catch (const Error& e) {
        res.notes.push_back(std::string(to_string(which)) + " omitted: " + e.what());
      }
    }
  }

  // Assemble both panes in element order.
  const double yh = spec.y_half();
  SvgCanvas chart(spec.style.width, spec.style.height, {win.x_min, win.x_max, win.p_min, win.p_max},
                  res.case_name + " (x, p)");
  SvgCanvas plane(spec.style.width, spec.style.height, {win.x_min, win.x_max, y0 - yh, y0 + yh},
                  res.case_name + " (x, y)");
  for (const auto& e : res.elements) {
    Stroke st;
    if (e.style == "thin") {
      st = {"#606060", spec.style.thin, ""};
    } else if (e.style == "dashed") {
      st = {"#1f4fbf", spec.style.dashed, spec.style.dashed_loci ? "6 4" : ""};
    } else {
      st = {"#000000", spec.style.bold_curves ? spec.style.bold : spec.style.thin, ""};
    }
    std::vector<std::pair<double, double>> cp, pp;
    cp.reserve(e.curve.size());
    pp.reserve(e.curve.size());
    for (const auto& s : e.curve.samples) {
      cp.emplace_back(s.x, s.p);
      pp.emplace_back(s.x, s.y);
    }
    chart.polyline(e.id, e.kind, cp, st);
    plane.polyline(e.id, e.kind, pp, st);
  }
  chart.dot("O", o.x, o.p, 3.0, "#c00000");
  plane.dot("O", o.x, y0, 3.0, "#c00000");
  chart.axis_labels("x", "p");
  plane.axis_labels("x", "y");
  res.chart_svg = chart.str();
  res.plane_svg = plane.str();

  nlohmann::ordered_json m;
  m["case"] = res.case_name;
  m["kind"] = to_string(res.cls.kind);
  if (res.cls.pleated) m["b"] = res.cls.pleated->b;
  else m["b"] = nullptr;
  m["experimental"] = res.cls.folded && res.cls.folded->stability == Stability::Focus;
  m["equation"] = to_string(ode.expr());
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ode.params()) params[k] = v;
  m["params"] = params;
  m["origin"] = {ode.origin().x, ode.origin().y, ode.origin().p};
  m["window"] = {{"x_half", spec.x_half}, {"p_half", spec.p_half}};
  m["plane_y_half"] = yh;
  m["plane_y_scaling"] = "x_half^(3/2)";
  m["defaults"] = {{"density", spec.density},
                   {"seeds", seeds.size()},
                   {"rel_tol", spec.integ.rel_tol},
                   {"abs_tol", spec.integ.abs_tol},
                   {"initial_step", spec.integ.initial_step},
                   {"max_step", spec.integ.max_step},
                   {"min_step", spec.integ.min_step},
                   {"max_steps", spec.integ.max_steps},
                   {"max_arc", spec.max_arc},
                   {"stop_radius", spec.stop_radius},
                   {"seed_radius", kSeedRadius},
                   {"shooting_bisections", kShootingBisections},
                   {"classify_margin", kClassifyMargin},
                   {"canvas", {spec.style.width, spec.style.height}}};
  nlohmann::ordered_json elems = nlohmann::ordered_json::array();
  for (const auto& e : res.elements)
    elems.push_back({{"id", e.id},
                     {"kind", e.kind},
                     {"style", e.style},
                     {"source", e.source},
                     {"points", e.curve.size()},
                     {"stop", to_string(e.curve.meta.stop)}});
  elems.push_back({{"id", "O"}, {"kind", "origin"}, {"style", "marker"}, {"source", "origin"}, {"points", 1}});
  m["elements"] = elems;
  m["notes"] = res.notes;
  res.manifest = m;
  return res;
}

bool polygon_contains(const std::vector<std::pair<double, double>>& poly, double x, double y) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto [xi, yi] = poly[i];
    const auto [xj, yj] = poly[j];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

namespace {

bool segments_cross(ChartPoint a, ChartPoint b, ChartPoint c, ChartPoint d) {
  auto orient = [](ChartPoint p, ChartPoint q, ChartPoint r) {
    return (q.x - p.x) * (r.p - p.p) - (q.p - p.p) * (r.x - p.x);
  };
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

bool polylines_cross(const std::vector<Trajectory>& curves, const ChartPoint& center, double exclusion) {
  struct Seg {
    std::size_t curve;
    ChartPoint a, b;
  };
  std::vector<Seg> segs;
  double xmin = 1e300, xmax = -1e300, pmin = 1e300, pmax = -1e300;
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (std::size_t i = 1; i < curves[c].size(); ++i) {
      const ChartPoint a = curves[c].chart(i - 1), b = curves[c].chart(i);
      if (distance(a, center) <= exclusion || distance(b, center) <= exclusion) continue;
      segs.push_back({c, a, b});
      xmin = std::min({xmin, a.x, b.x});
      xmax = std::max({xmax, a.x, b.x});
      pmin = std::min({pmin, a.p, b.p});
      pmax = std::max({pmax, a.p, b.p});
    }
  if (segs.empty()) return false;
  const int g = 256;
  const double cw = std::max(xmax - xmin, 1e-300) / g, ch = std::max(pmax - pmin, 1e-300) / g;
  auto cell = [&](double v, double lo, double w) { return std::clamp(static_cast<int>((v - lo) / w), 0, g - 1); };
  std::map<long, std::vector<std::size_t>> grid;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& sg = segs[s];
    const int x0 = cell(std::min(sg.a.x, sg.b.x), xmin, cw), x1 = cell(std::max(sg.a.x, sg.b.x), xmin, cw);
    const int p0 = cell(std::min(sg.a.p, sg.b.p), pmin, ch), p1 = cell(std::max(sg.a.p, sg.b.p), pmin, ch);
    for (int i = x0; i <= x1; ++i)
      for (int j = p0; j <= p1; ++j) grid[static_cast<long>(i) * g + j].push_back(s);
  }
  for (const auto& [key, list] : grid)
    for (std::size_t u = 0; u < list.size(); ++u)
      for (std::size_t v = u + 1; v < list.size(); ++v) {
        const Seg& s1 = segs[list[u]];
        const Seg& s2 = segs[list[v]];
        if (s1.curve == s2.curve) continue;
        if (segments_cross(s1.a, s1.b, s2.a, s2.b)) return true;
      }
  return false;
}

}  // namespace pleatlab

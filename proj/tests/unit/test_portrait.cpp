#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "pleatlab/nflab.hpp"
#include "pleatlab/portrait.hpp"

using namespace pleatlab;

namespace {

ImplicitOde cubic(double b) { return ImplicitOde::from_text("b*x*p - p^3/3 - y", {{"b", b}}); }

// Distance from (x, y) to the discriminant {(q^2/b, 2q^3/3)}, searched near q0.
double discriminant_distance(double b, double x, double y, double q0) {
  auto d = [&](double q) { return std::hypot(x - q * q / b, y - 2.0 * q * q * q / 3.0); };
  double best = q0, bd = d(q0);
  for (double q = q0 - 0.05; q <= q0 + 0.05; q += 1e-5)
    if (const double v = d(q); v < bd) bd = v, best = q;
  double lo = best - 2e-5, hi = best + 2e-5;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (d(m1) < d(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(bd, d(0.5 * (lo + hi)));
}

double plane_speed(const ImplicitOde& ode, const TrajectorySample& s) {
  const ChartVector v = chart_field(ode, {s.x, s.p}, s.y);
  return std::abs(v.dx) * std::hypot(1.0, s.p);
}

}  // namespace

TEST_SUITE("portrait") {

TEST_CASE("seed grid counts") {
  const Window unit{0.0, 1.0, 0.0, 1.0};
  auto on_boundary = [](const ChartPoint& s) { return s.x == 0.0 || s.x == 1.0 || s.p == 0.0 || s.p == 1.0; };
  // O at a corner: no seed is near it
  const auto g1 = seed_grid(unit, 1, {0.0, 0.0});
  CHECK(std::count_if(g1.begin(), g1.end(), on_boundary) == 16);
  CHECK(g1.size() == 16 + 1);
  const auto g2 = seed_grid(unit, 2, {0.0, 0.0});
  CHECK(g2.size() == 32 + 9);
  CHECK(std::count_if(g2.begin(), g2.end(), on_boundary) == 32);
  const std::set<std::pair<double, double>> unique = [&] {
    std::set<std::pair<double, double>> u;
    for (const auto& s : g2) u.insert({s.x, s.p});
    return u;
  }();
  CHECK(unique.size() == g2.size());
}

TEST_CASE("seed grid excludes the disc around O") {
  const Window w{-0.25, 0.25, -0.5, 0.5};
  for (int d = 1; d <= 5; ++d)
    for (double r : {1e-5, 1e-2, 0.2}) {
      const auto seeds = seed_grid(w, d, {0.0, 0.0}, r);
      for (const auto& s : seeds) {
        CHECK(std::hypot(s.x, s.p) > 5 * r);
        CHECK(w.contains(s));
      }
    }
  // the centre lattice point is O itself when the window is centred
  CHECK(seed_grid(w, 2, {0.0, 0.0}).size() == 40);
}

TEST_CASE("backward node orbit approaches O along the weak axis") {
  const Oracle o = make_oracle(OracleId::node_nonres(4.0));
  PortraitSpec spec;
  spec.x_half = spec.p_half = 2.0;
  spec.max_arc = 10.0;
  const Trajectory tr = integrate(Field::planar(o.planar), {1.0, 0.5}, spec, -1);
  CHECK(tr.meta.stop == StopReason::ReachedOrigin);
  const auto& last = tr.samples.back();
  CHECK(std::hypot(last.x, last.p) < 2e-5);
  CHECK(std::abs(last.p) / std::hypot(last.x, last.p) < 1e-6);
  // the orbit stays on eta = 0.5 xi^4
  for (const auto& s : tr.samples) CHECK(std::abs(s.p - 0.5 * std::pow(s.x, 4)) < 1e-8);
}

TEST_CASE("case names") {
  const double bs[] = {-3.0, -1.0, 0.25, 0.55, 0.8, 2.0};
  const char* names[] = {"S1", "S2", "N1", "N2", "N3", "S3"};
  for (int i = 0; i < 6; ++i) CHECK(portrait_case_name(classify_singular_point(cubic(bs[i]))) == names[i]);
}

TEST_CASE("render S3") {
  PortraitSpec spec;
  spec.density = 1;
  const PortraitResult r = render(cubic(2.0), spec);
  CHECK(r.case_name == "S3");
  CHECK(r.of_kind("separatrix").size() == 4);
  CHECK(r.of_kind("criminant").size() == 1);
  CHECK(r.of_kind("trajectory").size() >= 16);
  for (const auto* e : r.of_kind("separatrix")) CHECK(e->style == "bold");
  for (const auto* e : r.of_kind("criminant")) CHECK(e->style == "dashed");
  CHECK(r.chart_svg.find("<svg") != std::string::npos);
  CHECK(r.chart_svg.find("</svg>") != std::string::npos);
  CHECK(r.plane_svg.find("<svg") != std::string::npos);

  const auto& m = r.manifest;
  CHECK(m["case"] == "S3");
  CHECK(m["b"].get<double>() == doctest::Approx(2.0));
  CHECK(m.contains("defaults"));
  CHECK(m.contains("window"));
  CHECK(m.contains("plane_y_half"));
  CHECK(m["elements"].size() == r.elements.size() + 1);
  CHECK(m["elements"].back()["kind"] == "origin");
  for (const auto& el : m["elements"]) {
    CHECK(el.contains("kind"));
    CHECK(el.contains("style"));
    CHECK(el.contains("source"));
  }
}

TEST_CASE("render nodes") {
  PortraitSpec spec;
  spec.density = 1;
  const PortraitResult n1 = render(cubic(0.25), spec);
  CHECK(n1.case_name == "N1");
  CHECK(n1.of_kind("separatrix").empty());
  CHECK(n1.of_kind("invariant_curve").size() >= 2);
}

TEST_CASE("output is deterministic across runs and thread counts") {
  PortraitSpec spec;
  spec.density = 1;
  spec.threads = 1;
  const PortraitResult a = render(cubic(0.8), spec);
  spec.threads = 4;
  const PortraitResult b = render(cubic(0.8), spec);
  const PortraitResult c = render(cubic(0.8), spec);
  CHECK(a.chart_svg == b.chart_svg);
  CHECK(a.plane_svg == b.plane_svg);
  CHECK(a.manifest.dump() == b.manifest.dump());
  CHECK(b.chart_svg == c.chart_svg);
  CHECK(b.plane_svg == c.plane_svg);
}

TEST_CASE("trajectories do not cross away from O") {
  for (double b : {-3.0, -1.0, 0.25, 0.55, 0.8, 2.0}) {
    PortraitSpec spec;
    const PortraitResult r = render(cubic(b), spec);
    std::vector<Trajectory> curves;
    for (const auto* e : r.of_kind("trajectory")) curves.push_back(e->curve);
    // orbits of a node with ratio beta close up like r^beta; below
    // abs_tol^(1/beta) neighbours are closer than the integration error
    double radius = 10 * spec.stop_radius;
    if (b > 0 && b < 1) radius = std::max(radius, std::pow(spec.integ.abs_tol, 1.0 / node_beta(b)));
    INFO("b = " << b << " exclusion " << radius);
    CHECK_FALSE(polylines_cross(curves, {0.0, 0.0}, radius));
  }
}

TEST_CASE("cusps of projected solutions sit on the discriminant") {
  for (double b : {-1.0, 0.25, 2.0}) {
    const ImplicitOde ode = cubic(b);
    PortraitSpec spec;
    const PortraitResult r = render(ode, spec);
    int cusps = 0;
    for (const auto* e : r.of_kind("trajectory")) {
      const PlaneCurve pc = project(e->curve);
      const auto& s = e->curve.samples;
      for (std::size_t i = 2; i < pc.points.size(); ++i) {
        if (!pc.points[i].x_reversal) continue;
        // x turns at sample i-1; the turn lies within one step on either side
        const std::size_t k = i - 1;
        const double speed = std::max({plane_speed(ode, s[k - 1]), plane_speed(ode, s[k]), plane_speed(ode, s[k + 1])});
        const double step = std::max(std::abs(s[k].t - s[k - 1].t), std::abs(s[k + 1].t - s[k].t)) * speed;
        const double dist = discriminant_distance(b, s[k].x, s[k].y, s[k].p);
        INFO("b = " << b << " at (" << s[k].x << ", " << s[k].p << ") dist " << dist << " step " << step);
        CHECK(dist <= 2.0 * step + 1e-12);
        ++cusps;
      }
    }
    INFO("b = " << b);
    CHECK(cusps > 0);
  }
}

TEST_CASE("polygon containment") {
  const std::vector<std::pair<double, double>> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_contains(square, 0.5, 0.5));
  CHECK_FALSE(polygon_contains(square, 1.5, 0.5));
  CHECK_FALSE(polygon_contains(square, -0.1, 0.5));
  // concave: a tongue between y = +-x^1.5
  std::vector<std::pair<double, double>> tongue;
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    tongue.push_back({x, std::pow(x, 1.5)});
  }
  for (int i = 50; i >= 0; --i) {
    const double x = i / 50.0;
    tongue.push_back({x, -std::pow(x, 1.5)});
  }
  CHECK(polygon_contains(tongue, 0.5, 0.1));
  CHECK_FALSE(polygon_contains(tongue, 0.5, 0.5));
  CHECK_FALSE(polygon_contains(tongue, -0.1, 0.0));
}

TEST_CASE("polyline crossings") {
  auto line = [](ChartPoint a, ChartPoint b, int n = 10) {
    Trajectory t;
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      t.samples.push_back({s, a.x + s * (b.x - a.x), a.p + s * (b.p - a.p), 0.0});
    }
    return t;
  };
  const Trajectory d1 = line({-1, -1}, {1, 1}), d2 = line({-1, 1.3}, {1, -0.7}, 7);
  CHECK(polylines_cross({d1, d2}, {5.0, 5.0}, 0.1));
  CHECK_FALSE(polylines_cross({d1, d2}, {0.15, 0.15}, 0.5));
  const Trajectory h1 = line({-1, 0.2}, {1, 0.2}), h2 = line({-1, -0.2}, {1, -0.2});
  CHECK_FALSE(polylines_cross({h1, h2}, {5.0, 5.0}, 0.1));
}

}

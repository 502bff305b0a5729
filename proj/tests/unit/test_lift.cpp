#include <doctest.h>

#include <random>

#include "pleatlab/curves.hpp"
#include "pleatlab/lift.hpp"

using namespace pleatlab;

TEST_SUITE("lift") {

TEST_CASE("lifted field of p^2 - x at (1,0,1)") {
  const auto ode = ImplicitOde::from_text("p^2 - x");
  const LiftedVector v = lifted_field(ode, {1.0, 0.0, 1.0});
  CHECK(v.dx == 2.0);
  CHECK(v.dy == 2.0);
  CHECK(v.dp == 1.0);
}

TEST_CASE("O is a zero of the lifted field") {
  for (const char* text : {"2*x*p - p^3/3 - y", "(p - x)^2 - y"}) {
    const LiftedVector v = lifted_field(ImplicitOde::from_text(text), {});
    CHECK(v.dx == 0.0);
    CHECK(v.dy == 0.0);
    CHECK(v.dp == 0.0);
  }
}

TEST_CASE("off-surface points are rejected") {
  const auto ode = ImplicitOde::from_text("p^2 - x");
  CHECK_THROWS_AS(lifted_field(ode, {0.0, 0.0, 1.0}), OffSurfaceError);
  CHECK(ode.on_surface({4.0, 7.0, 2.0}));
  CHECK_FALSE(ode.on_surface({4.0, 7.0, 2.1}));
}

TEST_CASE("contact identity dy = p dx") {
  const auto ode = ImplicitOde::from_text("sin(x) + p^3 - 2*x*p + x^2*p - y*(1 + x^2)");
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(rng), p = u(rng);
    const double y = solve_surface_y(ode, x, p, 0.0);
    const LiftedVector v = lifted_field(ode, {x, y, p});
    CHECK(v.dy == p * v.dx);
  }
}

TEST_CASE("chart field of the cubic family") {
  const auto ode = ImplicitOde::from_text("b*x*p - p^3/3 - y", {{"b", 2.0}});
  const ChartVector v = chart_field(ode, {1.0, 1.0}, 0.0);
  CHECK(v.dx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.dp == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(v.y == doctest::Approx(2.0 - 1.0 / 3.0).epsilon(1e-12));
  for (double p : {-0.4, -0.1, 0.05, 0.3}) {
    const ChartVector w = chart_field(ode, {p * p / 2.0, p}, 0.0);
    CHECK(std::abs(w.dx) < 1e-14);
  }
}

TEST_CASE("chart field agrees with the lifted field on the surface") {
  const auto ode = ImplicitOde::from_text("x*p + cos(p) - 1 + x^3 - y*(2 + sin(x*p))");
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int trial = 0; trial < 200; ++trial) {
    const ChartPoint at{u(rng), u(rng)};
    const ChartVector c = chart_field(ode, at, 0.0);
    const LiftedVector l = lifted_field(ode, {at.x, c.y, at.p});
    const double scale = std::max(std::hypot(l.dx, l.dp), 1e-300);
    CHECK(std::hypot(c.dx - l.dx, c.dp - l.dp) / scale < 1e-9);
  }
}

TEST_CASE("chart breakdown when F_y vanishes") {
  const auto ode = ImplicitOde::from_text("p^2 - x");
  CHECK_THROWS_AS(chart_field(ode, {0.5, 0.1}, 0.0), ChartBreakdown);
}

TEST_CASE("surface chart keeps its warm start") {
  const auto ode = ImplicitOde::from_text("y^3 + y - x - p");
  SurfaceChart chart(ode, 0.0);
  const double y = chart.accept({1.0, 1.0});
  CHECK(y * y * y + y == doctest::Approx(2.0));
  CHECK(chart.y() == y);
}

TEST_CASE("locus residuals") {
  const auto fold = ImplicitOde::from_text("p^2 - x");
  LocusResidual r = locus_residual(fold, {1.0, 0.0, 1.0}, Locus::Criminant);
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 == 2.0);
  CHECK_FALSE(r.vanishes(1e-12));
  r = locus_residual(fold, {0.0, 0.0, 0.0}, Locus::Criminant);
  CHECK(r.vanishes(0.0));

  const auto cubic = ImplicitOde::from_text("2*x*p - p^3/3 - y");
  r = locus_residual(cubic, {}, Locus::Inflection);
  CHECK(r.which == Locus::Inflection);
  CHECK(r.vanishes(0.0));
  // F_x + p F_y at (x, y, p) = (0.1, *, 0.3): 2p - p
  const double y = 0.2 * 0.3 - 0.009;
  r = locus_residual(cubic, {0.1, y, 0.3}, Locus::Inflection);
  CHECK(std::abs(r.r1) < 1e-15);
  CHECK(r.r2 == doctest::Approx(0.3));
}

TEST_CASE("criminant samples satisfy F = F_p = 0") {
  for (double b : {-3.0, 0.8, 2.0}) {
    const auto ode = ImplicitOde::from_text("b*x*p - p^3/3 + p^4 + x^2*p - y", {{"b", b}});
    const Trajectory k = trace_criminant(ode);
    REQUIRE(k.size() > 20);
    for (const auto& s : k.samples) CHECK(locus_residual(ode, {s.x, s.y, s.p}, Locus::Criminant).vanishes(1e-10));
  }
}

TEST_CASE("projection keeps every sample and flags reversals of dx") {
  Trajectory tr;
  // vertical segment in the chart: x constant
  for (int i = 0; i < 11; ++i) tr.samples.push_back({double(i), 0.2, -0.5 + 0.1 * i, 0.3});
  PlaneCurve pc = project(tr);
  REQUIRE(pc.points.size() == 11);
  for (const auto& q : pc.points) {
    CHECK(q.x == 0.2);
    CHECK(q.y == 0.3);
    CHECK_FALSE(q.x_reversal);
  }
  Trajectory cusp;
  for (int i = -5; i <= 5; ++i) {
    const double p = 0.1 * i;
    cusp.samples.push_back({p, p * p, p, p * p * p});
  }
  pc = project(cusp);
  int flips = 0;
  for (const auto& q : pc.points) flips += q.x_reversal ? 1 : 0;
  CHECK(flips == 1);
  CHECK(pc.points[6].x_reversal);
}

TEST_CASE("solutions through a fold cusp on the discriminant") {
  // (y - c)^2 = x^3 lifts to the surface p^2 = (9/4) x; the cusp of each
  // solution sits on the discriminant x = 0.
  const auto ode = ImplicitOde::from_text("4*p^2 - 9*x");
  for (double p = -0.6; p <= 0.6; p += 0.1) {
    const double x = 4.0 * p * p / 9.0;
    const LiftedVector v = lifted_field(ode, {x, 0.0, p});
    CHECK(v.dp == doctest::Approx(9.0));
    CHECK(v.dx == doctest::Approx(8.0 * p));
  }
}

}

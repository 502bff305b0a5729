#include <doctest.h>

#include <cmath>

#include "pleatlab/flow.hpp"
#include "pleatlab/integrator.hpp"
#include "pleatlab/lift.hpp"
#include "pleatlab/portrait.hpp"

using namespace pleatlab;

TEST_SUITE("integrator") {

TEST_CASE("rotation stays on the circle") {
  const PlanarRhs rot = [](const ChartPoint& z) { return ChartPoint{-z.p, z.x}; };
  IntegrationOptions o;
  o.max_step = 0.1;
  const StepMonitor until = [](double t, const ChartPoint&) {
    return t >= 2.0 * M_PI ? StopReason::RangeEnd : StopReason::None;
  };
  const IntegrationRun run = integrate_dopri5(rot, {1.0, 0.0}, 1, o, until);
  CHECK(run.stop == StopReason::RangeEnd);
  for (const auto& z : run.states) CHECK(std::abs(std::hypot(z.x, z.p) - 1.0) < 1e-7);
  const double t = run.t.back();
  CHECK(std::abs(run.states.back().x - std::cos(t)) < 1e-7);
  CHECK(std::abs(run.states.back().p - std::sin(t)) < 1e-7);
}

TEST_CASE("backward direction reverses time") {
  const PlanarRhs lin = [](const ChartPoint& z) { return ChartPoint{z.x, -2.0 * z.p}; };
  // t runs negative
  const StepMonitor until = [](double t, const ChartPoint&) {
    return t <= -1.0 ? StopReason::RangeEnd : StopReason::None;
  };
  const IntegrationRun run = integrate_dopri5(lin, {1.0, 1.0}, -1, {}, until);
  REQUIRE(run.stop == StopReason::RangeEnd);
  const double t = -run.t.back();
  CHECK(run.states.back().x == doctest::Approx(std::exp(-t)).epsilon(1e-7));
  CHECK(run.states.back().p == doctest::Approx(std::exp(2.0 * t)).epsilon(1e-7));
}

TEST_CASE("region exit is located on the boundary") {
  const PlanarRhs drift = [](const ChartPoint&) { return ChartPoint{1.0, 0.5}; };
  const RegionCheck inside = [](const ChartPoint& z) {
    return z.x > 0.73 ? StopReason::WindowExit : StopReason::None;
  };
  IntegrationOptions o;
  o.max_step = 0.2;
  const IntegrationRun run = integrate_dopri5(drift, {0.0, 0.0}, 1, o, {}, inside);
  CHECK(run.stop == StopReason::WindowExit);
  CHECK(std::abs(run.states.back().x - 0.73) < 1e-9);
  CHECK(run.states.back().p == doctest::Approx(0.365));
}

TEST_CASE("a throwing field ends the run and keeps the samples") {
  const PlanarRhs rhs = [](const ChartPoint& z) {
    if (z.x > 0.5) throw ChartBreakdown("test");
    return ChartPoint{1.0, 0.0};
  };
  const IntegrationRun run = integrate_dopri5(rhs, {0.0, 0.0}, 1, {});
  CHECK(run.stop == StopReason::ChartBreakdown);
  CHECK(run.states.size() > 1);
  CHECK(run.states.back().x <= 0.5 + 1e-12);
}

TEST_CASE("step budget") {
  const PlanarRhs rhs = [](const ChartPoint&) { return ChartPoint{1.0, 0.0}; };
  IntegrationOptions o;
  o.max_steps = 10;
  o.max_step = 1e-3;
  const IntegrationRun run = integrate_dopri5(rhs, {0.0, 0.0}, 1, o);
  CHECK(run.stop == StopReason::StepBudget);
  CHECK(run.states.size() <= 11);
}

TEST_CASE("x-axis is invariant for the cubic family") {
  const auto ode = ImplicitOde::from_text("b*x*p - p^3/3 - y", {{"b", 2.0}});
  PortraitSpec spec;
  const Trajectory tr = integrate(Field::chart(ode), {0.1, 0.0}, spec, 1);
  REQUIRE(tr.size() > 2);
  CHECK(tr.meta.stop == StopReason::WindowExit);
  for (const auto& s : tr.samples) CHECK(std::abs(s.p) < 1e-9);
  const Trajectory back = integrate(Field::chart(ode), {0.1, 0.0}, spec, -1);
  CHECK(back.meta.stop == StopReason::ReachedOrigin);
}

TEST_CASE("tighter tolerances move the endpoint by less than 1e-6") {
  const auto ode = ImplicitOde::from_text("b*x*p - p^3/3 - y", {{"b", 2.0}});
  // endpoint on the window boundary
  PortraitSpec coarse, fine;
  fine.integ.rel_tol = coarse.integ.rel_tol / 10;
  fine.integ.abs_tol = coarse.integ.abs_tol / 10;
  const Trajectory a = integrate(Field::chart(ode), {0.04, 0.02}, coarse, 1);
  const Trajectory b = integrate(Field::chart(ode), {0.04, 0.02}, fine, 1);
  REQUIRE(a.meta.stop == StopReason::WindowExit);
  REQUIRE(b.meta.stop == StopReason::WindowExit);
  CHECK(distance(a.chart(a.size() - 1), b.chart(b.size() - 1)) < 1e-6);
}

TEST_CASE("chart samples carry the surface y") {
  const auto ode = ImplicitOde::from_text("b*x*p - p^3/3 + p^4 - y", {{"b", -1.0}});
  FlowLimits lim;
  lim.max_arc = 0.3;
  const Trajectory tr = integrate_field(Field::chart(ode), {0.05, 0.2}, 1, {}, lim);
  for (const auto& s : tr.samples) CHECK(std::abs(ode.value({s.x, s.y, s.p})) < 1e-12);
}

TEST_CASE("planar fields have no y") {
  FlowLimits lim;
  lim.max_arc = 0.1;
  const Trajectory tr =
      integrate_field(Field::planar([](const ChartPoint& z) { return ChartPoint{z.x, 2 * z.p}; }), {0.5, 0.5}, 1, {}, lim);
  CHECK(tr.meta.stop == StopReason::ArcBudget);
  CHECK(std::isnan(tr.samples.back().y));
}

}

#include "pleatlab/flow.hpp"

#include <cmath>

namespace pleatlab {

Trajectory integrate_field(const Field& field, const ChartPoint& seed, int direction,
                           const IntegrationOptions& opts, const FlowLimits& limits,
                           double y_seed) {
  Trajectory traj;
  traj.meta.seed = seed;
  traj.meta.direction = direction >= 0 ? 1 : -1;

  std::optional<SurfaceChart> chart;
  PlanarRhs rhs;
  double y0 = std::nan("");
  if (field.ode()) {
    try {
      chart.emplace(*field.ode(), y_seed);
      y0 = chart->accept(seed);
    } catch (const ChartBreakdown&) {
      traj.meta.stop = StopReason::ChartBreakdown;
      return traj;
    } catch (const NewtonDivergence&) {
      traj.meta.stop = StopReason::ChartBreakdown;
      return traj;
    }
    rhs = [&chart](const ChartPoint& z) {
      const ChartVector v = chart->field(z);
      return ChartPoint{v.dx, v.dp};
    };
  } else {
    rhs = field.rhs();
  }

  std::vector<double> ys{y0};
  double arc = 0.0;
  ChartPoint last = seed;
  auto monitor = [&](double, const ChartPoint& z) -> StopReason {
    ys.push_back(chart ? chart->accept(z) : std::nan(""));
    arc += distance(last, z);
    last = z;
    if (arc >= limits.max_arc) return StopReason::ArcBudget;
    if (limits.extra) return limits.extra(z);
    return StopReason::None;
  };
  auto region = [&](const ChartPoint& z) -> StopReason {
    if (limits.window && !limits.window->contains(z)) return StopReason::WindowExit;
    if (limits.origin_radius > 0.0 && distance(z, limits.origin) < limits.origin_radius)
      return StopReason::ReachedOrigin;
    return StopReason::None;
  };

  IntegrationRun run = integrate_dopri5(rhs, seed, direction, opts, monitor, region);
  // Region stops return before the monitor runs; recover y for the last state.
  while (ys.size() < run.states.size()) {
    try {
      ys.push_back(chart ? chart->accept(run.states[ys.size()]) : std::nan(""));
    } catch (const Error&) {
      run.states.resize(ys.size());
      run.t.resize(ys.size());
      run.stop = StopReason::ChartBreakdown;
    }
  }
  traj.samples.reserve(run.states.size());
  for (std::size_t i = 0; i < run.states.size(); ++i)
    traj.samples.push_back({run.t[i], run.states[i].x, run.states[i].p, ys[i]});
  traj.meta.stop = run.stop;
  return traj;
}

}  // namespace pleatlab

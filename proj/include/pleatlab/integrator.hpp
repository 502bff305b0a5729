#pragma once

// Adaptive Dormand-Prince 5(4) integrator for autonomous planar fields.

#include <functional>
#include <vector>

#include "pleatlab/trajectory.hpp"

namespace pleatlab {

struct IntegrationOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.05;
  double min_step = 1e-13;
  long max_steps = 200000;
};

using PlanarRhs = std::function<ChartPoint(const ChartPoint&)>;

/// Called on each accepted state; a non-None result stops the run.
using StepMonitor = std::function<StopReason(double t, const ChartPoint& state)>;

/// Returns a non-None reason when a state is outside the admissible region.
/// The run is stopped at the first crossing, located by step bisection.
using RegionCheck = std::function<StopReason(const ChartPoint& state)>;

struct IntegrationRun {
  std::vector<double> t;
  std::vector<ChartPoint> states;
  StopReason stop = StopReason::None;
  long rejected_steps = 0;
};

/// Integrates dz/dt = direction * rhs(z) from z0. Exceptions thrown by `rhs`
/// (for example ChartBreakdown) end the run with the matching stop reason; the
/// states accepted so far are kept.
IntegrationRun integrate_dopri5(const PlanarRhs& rhs, ChartPoint z0, int direction,
                                const IntegrationOptions& opts, const StepMonitor& monitor = {},
                                const RegionCheck& region = {});

}  // namespace pleatlab

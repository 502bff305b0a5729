#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "pleatlab/integrator.hpp"
#include "pleatlab/lift.hpp"
#include "pleatlab/trajectory.hpp"

namespace pleatlab {

struct Window {
  double x_min = -0.25, x_max = 0.25;
  double p_min = -0.5, p_max = 0.5;

  bool contains(const ChartPoint& z) const {
    return z.x >= x_min && z.x <= x_max && z.p >= p_min && z.p <= p_max;
  }
  double width() const { return x_max - x_min; }
  double height() const { return p_max - p_min; }
};

/// A planar vector field: either the chart field of an implicit ODE (y is
/// recovered on the surface) or a plain autonomous field (y is NaN).
class Field {
 public:
  static Field chart(const ImplicitOde& ode) { return Field(&ode, {}); }
  static Field planar(PlanarRhs rhs) { return Field(nullptr, std::move(rhs)); }

  const ImplicitOde* ode() const { return ode_; }
  const PlanarRhs& rhs() const { return rhs_; }

 private:
  Field(const ImplicitOde* ode, PlanarRhs rhs) : ode_(ode), rhs_(std::move(rhs)) {}
  const ImplicitOde* ode_;
  PlanarRhs rhs_;
};

struct FlowLimits {
  std::optional<Window> window;
  double max_arc = std::numeric_limits<double>::infinity();
  /// Stop on entering the disc of this radius around `origin` (0 disables).
  double origin_radius = 0.0;
  ChartPoint origin;
  /// Extra per-step stop condition.
  std::function<StopReason(const ChartPoint&)> extra;
};

/// Integrates from `seed` in time direction `direction` (+1 / -1). For chart
/// fields `y_seed` warm-starts the surface solve.
Trajectory integrate_field(const Field& field, const ChartPoint& seed, int direction,
                           const IntegrationOptions& opts, const FlowLimits& limits,
                           double y_seed = 0.0);

}  // namespace pleatlab

#pragma once

// Geometry of an implicit ODE F(x, y, p) = 0, p = dy/dx: the surface {F = 0},
// the lifted field X = (F_p, p F_p, -(F_x + p F_y)), the criminant
// {F = F_p = 0}, the inflection curve {F = F_x + p F_y = 0}, and the
// projection pi(x, y, p) = (x, y).

#include <optional>

#include "pleatlab/expr.hpp"
#include "pleatlab/jet.hpp"
#include "pleatlab/trajectory.hpp"

namespace pleatlab {

/// Membership test for the surface, relative to max(1, |x|, |y|, |p|).
inline constexpr double kSurfaceTolerance = 1e-9;
/// Below this |F_y| the surface is not treated as a graph y = g(x, p).
inline constexpr double kChartBreakdown = 1e-6;

class ImplicitOde {
 public:
  ImplicitOde(Expr f, Bindings params = {}, Point3 origin = {});

  /// Parse-and-bind convenience; throws ParseError / UnboundParameter.
  static ImplicitOde from_text(std::string_view text, Bindings params = {}, Point3 origin = {});

  const Expr& expr() const { return f_; }
  const Bindings& params() const { return params_; }
  const Point3& origin() const { return origin_; }

  double value(const Point3& at) const { return evaluate(f_, params_, at); }
  template <int Order = 3>
  TaylorJet<Order> jet(const Point3& at) const {
    return eval_jet<Order>(f_, params_, at);
  }

  /// Surface membership with the scaled tolerance.
  bool on_surface(const Point3& at, double tol = kSurfaceTolerance) const;

 private:
  Expr f_;
  Bindings params_;
  Point3 origin_;
};

struct LiftedVector {
  double dx = 0.0, dy = 0.0, dp = 0.0;
};

enum class Locus { Criminant, Inflection };

struct LocusResidual {
  Locus which = Locus::Criminant;
  double r1 = 0.0, r2 = 0.0;
  bool vanishes(double tol) const { return std::abs(r1) <= tol && std::abs(r2) <= tol; }
};

/// Components (F_p, p F_p, -(F_x + p F_y)); throws OffSurfaceError off {F = 0}.
LiftedVector lifted_field(const ImplicitOde& ode, const Point3& point);

LocusResidual locus_residual(const ImplicitOde& ode, const Point3& point, Locus which);

/// Chart field value together with the y it was evaluated at.
struct ChartVector {
  double dx = 0.0, dp = 0.0;
  double y = 0.0;
};

/// Solve F(x, y, p) = 0 for y by Newton's method from `y_guess`.
/// Throws ChartBreakdown when |F_y| < kChartBreakdown, NewtonDivergence otherwise.
double solve_surface_y(const ImplicitOde& ode, double x, double p, double y_guess);

/// (F_p, -(F_x + p F_y)) at (x, g(x, p), p), where y = g(x, p) is found by
/// Newton's method warm-started at `y_guess`.
ChartVector chart_field(const ImplicitOde& ode, const ChartPoint& at, double y_guess);

/// Per-trajectory chart state: keeps the last y so consecutive solves warm-start.
class SurfaceChart {
 public:
  SurfaceChart(const ImplicitOde& ode, double y_start) : ode_(&ode), y_(y_start) {}

  ChartVector field(const ChartPoint& at) const { return chart_field(*ode_, at, y_); }
  /// Re-anchor the warm start at an accepted point; returns the y there.
  double accept(const ChartPoint& at);
  double y() const { return y_; }

 private:
  const ImplicitOde* ode_;
  double y_;
};

/// Drops p. Sample order is preserved; `x_reversal` marks sign changes of dx.
PlaneCurve project(const Trajectory& curve);

}  // namespace pleatlab

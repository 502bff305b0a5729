#include "pleatlab/lift.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pleatlab {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::WindowExit: return "window_exit";
    case StopReason::ArcBudget: return "arc_budget";
    case StopReason::ReachedOrigin: return "reached_origin";
    case StopReason::StepBudget: return "step_budget";
    case StopReason::RangeEnd: return "range_end";
    case StopReason::ChartBreakdown: return "chart_breakdown";
    case StopReason::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

ImplicitOde::ImplicitOde(Expr f, Bindings params, Point3 origin)
    : f_(std::move(f)), params_(std::move(params)), origin_(origin) {
  for (const auto& name : f_.parameters())
    if (!params_.count(name)) throw UnboundParameter(name);
}

ImplicitOde ImplicitOde::from_text(std::string_view text, Bindings params, Point3 origin) {
  return ImplicitOde(parse(text), std::move(params), origin);
}

namespace {

double surface_scale(const Point3& at) {
  return std::max({1.0, std::abs(at.x), std::abs(at.y), std::abs(at.p)});
}

}  // namespace

bool ImplicitOde::on_surface(const Point3& at, double tol) const {
  return std::abs(value(at)) <= tol * surface_scale(at);
}

LiftedVector lifted_field(const ImplicitOde& ode, const Point3& point) {
  const Partials<1> d(ode.jet<1>(point));
  if (std::abs(d.F()) > kSurfaceTolerance * surface_scale(point))
    throw OffSurfaceError("point is off the surface: |F| = " + std::to_string(std::abs(d.F())));
  LiftedVector v;
  v.dx = d.Fp();
  v.dy = point.p * d.Fp();
  v.dp = -(d.Fx() + point.p * d.Fy());
  return v;
}

LocusResidual locus_residual(const ImplicitOde& ode, const Point3& point, Locus which) {
  const Partials<1> d(ode.jet<1>(point));
  LocusResidual r;
  r.which = which;
  r.r1 = d.F();
  r.r2 = which == Locus::Criminant ? d.Fp() : d.Fx() + point.p * d.Fy();
  return r;
}

double solve_surface_y(const ImplicitOde& ode, double x, double p, double y_guess) {
  double y = y_guess;
  constexpr int kMaxIter = 50;
  for (int it = 0; it < kMaxIter; ++it) {
    const Partials<1> d(ode.jet<1>({x, y, p}));
    if (std::abs(d.Fy()) < kChartBreakdown)
      throw ChartBreakdown("|F_y| below chart threshold at (x, p) = (" + std::to_string(x) + ", " +
                           std::to_string(p) + ")");
    const double step = d.F() / d.Fy();
    y -= step;
    if (!std::isfinite(y)) break;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) return y;
    if (std::abs(d.F()) <= 1e-15 * surface_scale({x, y, p})) return y;
  }
  if (std::isfinite(y) && ode.on_surface({x, y, p}, 1e-12)) return y;
  throw NewtonDivergence("surface Newton solve for y did not converge");
}

ChartVector chart_field(const ImplicitOde& ode, const ChartPoint& at, double y_guess) {
  const double y = solve_surface_y(ode, at.x, at.p, y_guess);
  const Partials<1> d(ode.jet<1>({at.x, y, at.p}));
  return {d.Fp(), -(d.Fx() + at.p * d.Fy()), y};
}

double SurfaceChart::accept(const ChartPoint& at) {
  y_ = solve_surface_y(*ode_, at.x, at.p, y_);
  return y_;
}

PlaneCurve project(const Trajectory& curve) {
  PlaneCurve out;
  out.label = curve.meta.label;
  out.points.reserve(curve.size());
  double last_dx = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& s = curve.samples[i];
    PlanePoint pt{s.x, s.y, s.t, false};
    if (i > 0) {
      const double dx = s.x - curve.samples[i - 1].x;
      if (dx != 0.0) {
        if (last_dx != 0.0 && (dx > 0) != (last_dx > 0)) pt.x_reversal = true;
        last_dx = dx;
      }
    }
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace pleatlab

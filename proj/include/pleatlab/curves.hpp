#pragma once

// Curves through a pleated improper point: the criminant, the invariant
// curves tangent to the eigendirections of the chart field, semicubic fits of
// their projections, and the reduction along the horizontal invariant curve.

#include <array>
#include <optional>
#include <vector>

#include "pleatlab/classify.hpp"
#include "pleatlab/fit.hpp"
#include "pleatlab/flow.hpp"
#include "pleatlab/integrator.hpp"
#include "pleatlab/lift.hpp"
#include "pleatlab/trajectory.hpp"

namespace pleatlab {

inline constexpr double kSeedRadius = 1e-4;
inline constexpr double kStopRadius = 1e-5;
inline constexpr int kShootingBisections = 60;

struct TraceOptions {
  double p_min = -0.3;
  double p_max = 0.3;
  double step = 0.01;
  double residual = 1e-10;
  int max_newton = 30;
};

/// Traces {F = 0, F_p = 0} parametrized by p through O, correcting (x, y) by
/// Newton's method. Sample t is p - p0. Throws TraceError on a singular
/// corrector Jacobian or divergence.
Trajectory trace_criminant(const ImplicitOde& ode, const TraceOptions& opts = {});

enum class CurveKind {
  Vertical,    // C: tangent to the p-axis
  Horizontal,  // C': tangent to the x-axis
};

const char* to_string(CurveKind k);

enum class SeedOrder { Linear, Quadratic };

struct CurveOptions {
  double arc = 0.3;
  double seed_radius = kSeedRadius;
  double stop_radius = kStopRadius;
  int bisections = kShootingBisections;
  SeedOrder seed_order = SeedOrder::Quadratic;
  IntegrationOptions integ;
  std::optional<Window> window;
};

struct InvariantCurve {
  enum class Method { SaddleSeparatrix, NodeStrongShooting, NodeWeakBackward };

  CurveKind which = CurveKind::Vertical;
  Method method = Method::SaddleSeparatrix;
  double eigenvalue = 0.0;        // along the curve
  double other_eigenvalue = 0.0;  // transverse
  ChartPoint direction;           // unit eigendirection, dominant component positive
  /// Branches leaving O along +direction and -direction; samples ordered from O outward.
  std::array<Trajectory, 2> branches;
  /// Branch[1] reversed, O, branch[0].
  Trajectory stitched;
};

const char* to_string(InvariantCurve::Method m);

/// Throws DegenerateError for a focus or a node with equal eigenvalues, and
/// IntegrationError when shooting or a branch fails to reach O.
InvariantCurve invariant_curve(const ImplicitOde& ode, CurveKind which, const CurveOptions& opts = {});

/// Maps samples to the normalized coordinates of the pleated improper point.
Trajectory to_normalized(const Trajectory& curve, const NormalFormCoeffs& nf);

struct CurveCCheck {
  double b = 0.0;
  Table1Case case_id = Table1Case::S1;
  double v0_predicted = 0.0;
  double v0_fitted = 0.0;
  double rel_err = 0.0;
  double B_predicted = 0.0;
  double B_fitted = 0.0;
  /// Generic fits in N2 are not covered by the quadratic-tangency statement.
  bool informational = false;
  /// N2 only: max invariance residual of x = p^2/(3b - 2) under the cubic field.
  std::optional<double> invariance_residual;
  SemicubicFit fit;
};

/// Residual of x = v0 p^2 under the chart field of b x p - p^3/3 - y, sampled
/// on |p| <= p_max.
double cubic_invariance_residual(double b, double p_max = 0.2, int points = 401);

CurveCCheck curve_c_check(const ImplicitOde& ode, const CurveOptions& copts = {},
                         const FitOptions& fopts = {});

struct ArrangementReport {
  double b = 0.0;
  bool same_semiplane = false;
  std::optional<bool> c_in_tongue;  // only when same_semiplane
  double mK = 0.0;
  double mC = 0.0;
  SemicubicFit fit_K;
  SemicubicFit fit_C;
};

ArrangementReport arrangement(const ImplicitOde& ode, const CurveOptions& copts = {},
                              const FitOptions& fopts = {});

/// Piecewise cubic Hermite interpolant of u with u' given; no extrapolation.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> xs, std::vector<double> us, std::vector<double> dus);

  double value(double x) const;
  double derivative(double x) const;
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  std::size_t size() const { return xs_.size(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& us() const { return us_; }

 private:
  std::size_t segment(double x) const;
  std::vector<double> xs_, us_, dus_;
};

/// y = u(x) is the solution whose 1-graph is C'. Substituting y = Y + u(x)
/// gives G(x, Y, P) = F(x, Y + u(x), P + u'(x)) with Y = 0 a solution.
struct Form12Reduction {
  HermiteTable u;
  double x_window = 0.1;
  double max_residual = 0.0;  // max |G(x, 0, 0)| over the window
  double u_at_origin = 0.0;
  double du_at_origin = 0.0;
  Smoothness s;

  double G(const ImplicitOde& ode, double x, double Y, double P) const;
};

/// Throws TraceError when C' does not cover |x - x0| <= x_window as a graph.
Form12Reduction reduce_to_form12(const ImplicitOde& ode, double x_window = 0.1,
                                 const CurveOptions& opts = {}, Epsilon eps = Epsilon::Unknown);

}  // namespace pleatlab

#pragma once

#include <optional>

#include "pleatlab/trajectory.hpp"

namespace pleatlab {

inline constexpr double kDefaultFitWindow = 0.1;

enum class FitMode {
  Chart,  // x = A p^2 only
  Plane,  // x = A p^2 and y = B p^3
};

struct FitOptions {
  double window = kDefaultFitWindow;  // |p| <= window
  int grid_points = 201;
  /// Adds the homogeneous node mode |p|^gamma (and sign(p)|p|^{gamma+1} for y)
  /// to the model; used for weak-direction curves of a node.
  std::optional<double> homogeneous_exponent;
  /// Combine the fits on window and window/2 by Richardson extrapolation.
  bool richardson = false;
};

/// Coefficients of x = A p^2, y = B p^3 and the invariant m = B^2 / A^3 of the
/// semicubic parabola y^2 = m x^3.
struct SemicubicFit {
  double A = 0.0;
  double B = 0.0;
  double m = 0.0;
  double residual = 0.0;  // RMS of the fit residuals on the resampling grid
  double window = 0.0;
  int points = 0;
  std::optional<double> homogeneous_coeff;
  bool extrapolated = false;

  static double invariant(double A, double B) { return B * B / (A * A * A); }
};

/// Least-squares fit over |p| <= window. With a homogeneous exponent the model
/// gains |p|^gamma, and also |p|^gamma ln|p| when gamma is an integer. Samples are resampled on a uniform
/// p-grid by local cubic interpolation, so the curve must be a graph over p
/// near O. Throws FitError on an ill-conditioned fit.
SemicubicFit fit_semicubic(const Trajectory& curve, FitMode mode, const FitOptions& opts = {});

}  // namespace pleatlab

#pragma once

// Closed-form oracle families: the cubic pleated improper family
// b x p - p^3/3 - y = 0, the well-folded normal form (p + alpha x)^2 = y, and
// the planar node normal forms
//   xi' = xi, eta' = beta eta                 (non-resonant)
//   xi' = xi, eta' = n eta + eps xi^n         (resonant)

#include <functional>
#include <optional>
#include <string>

#include "pleatlab/integrator.hpp"
#include "pleatlab/lift.hpp"
#include "pleatlab/trajectory.hpp"

namespace pleatlab {

enum class OracleKind { Cubic, WellFolded, NodeNonres, NodeRes };

struct OracleId {
  OracleKind kind = OracleKind::Cubic;
  double b = 2.0;
  double alpha = -1.0;
  double beta = 4.0;
  int n = 2;
  int eps = 0;

  static OracleId cubic(double b) { return {OracleKind::Cubic, b}; }
  static OracleId wellfolded(double alpha) { return {OracleKind::WellFolded, 2.0, alpha}; }
  static OracleId node_nonres(double beta) { return {OracleKind::NodeNonres, 2.0, -1.0, beta}; }
  static OracleId node_res(int n, int eps) { return {OracleKind::NodeRes, 2.0, -1.0, 4.0, n, eps}; }

  /// Canonical text, e.g. "cubic:b=2" or "node_res:n=3,eps=1".
  std::string str() const;
};

/// Ratio of the eigenvalues of the pleated improper node with parameter b,
/// max{b/(1-b), (1-b)/b}.
double node_beta(double b);

struct Oracle {
  OracleId id;
  std::string equation;            // empty for planar fields
  std::optional<ImplicitOde> ode;  // cubic, wellfolded
  PlanarRhs planar;                // node forms
  /// Exact curves through O parametrized by p (criminant, C) or x (C').
  std::function<Point3(double)> criminant;
  std::function<Point3(double)> curve_C;
  std::function<Point3(double)> curve_Cprime;
  /// Node forms: the integral curve with constant c, eta(xi).
  std::function<double(double c, double xi)> integral_curve;
};

/// Throws InadmissibleParameter outside the admissible ranges: b away from the
/// excluded values, beta > 1, n >= 2, eps in {0, 1}.
Oracle make_oracle(const OracleId& id);

/// Closed-form integral curve eta = eta(xi) of a node form sampled uniformly
/// on [xi_min, xi_max] as (x, p) = (xi, eta). Throws DomainError when the
/// range reaches |xi| < 1e-12 for a logarithmic curve or a sample overflows.
Trajectory oracle_integral_curve(const OracleId& id, double c, double xi_min, double xi_max,
                                 int points = 201);

inline constexpr double kLogFloor = 1e-12;

}  // namespace pleatlab

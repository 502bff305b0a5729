#pragma once

// Singular-point taxonomy of an implicit ODE at its distinguished point O.
//
// Every strict genericity inequality is evaluated as |q| > tau on the jet of F
// at O, rescaled by |F_y| when F_y is non-zero. Values of b within tau of the
// excluded set {-2, 0, 1/2, 2/3, 1} are reported as Degenerate.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pleatlab/jet.hpp"
#include "pleatlab/lift.hpp"

namespace pleatlab {

inline constexpr double kClassifyMargin = 1e-6;
inline constexpr int kResonanceMaxOrder = 12;
inline constexpr double kResonanceRelTol = 1e-9;
inline constexpr std::array<double, 5> kExcludedB = {-2.0, 0.0, 0.5, 2.0 / 3.0, 1.0};

enum class SingularKind {
  NotSingular,
  FoldedProper,
  PleatedProper,
  FoldedImproper,
  PleatedImproper,
  Degenerate
};

enum class Stability { Saddle, Node, Focus };

enum class Table1Case { S1, S2, N1, N2, N3, S3 };

enum class Epsilon { Zero, One, Unknown };

const char* to_string(SingularKind k);
const char* to_string(Stability s);
const char* to_string(Table1Case c);

/// Linearization of the chart field at O in (x, p) coordinates.
struct LinearPart {
  std::array<std::array<double, 2>, 2> matrix{};
  std::array<std::complex<double>, 2> eigenvalues{};
  bool real = false;
  /// Unit eigendirections; present when the eigenvalues are real and distinct.
  std::optional<std::array<ChartPoint, 2>> directions;

  double trace() const { return matrix[0][0] + matrix[1][1]; }
  double det() const { return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]; }
};

LinearPart linear_part(const std::array<std::array<double, 2>, 2>& m);

/// lambda_i = k1 * lambda1 + k2 * lambda2 with k1, k2 >= 0 and k1 + k2 >= 2.
struct Resonance {
  int i = 0;
  int k1 = 0;
  int k2 = 0;
};

/// Smallest-order resonance with k1 + k2 <= kResonanceMaxOrder.
std::optional<Resonance> resonance_of(double lambda1, double lambda2,
                                      int max_order = kResonanceMaxOrder,
                                      double rel_tol = kResonanceRelTol);

/// Node resonances of the pleated-improper chart field with eigenvalues (b, 1 - b).
struct NodeResonance {
  enum class Form { InverseSuccessor, SuccessorRatio, Other };  // b = 1/(n+1), b = n/(n+1)
  Form form = Form::Other;
  int n = 0;
  Resonance relation;
};

const char* to_string(NodeResonance::Form f);

struct Smoothness {
  std::optional<int> order;  // nullopt is C-infinity
  static Smoothness infinite() { return {}; }
  static Smoothness finite(int k) { return {k}; }
  bool is_infinite() const { return !order.has_value(); }
  std::string str() const { return order ? std::to_string(*order) : "inf"; }
  friend bool operator==(const Smoothness&, const Smoothness&) = default;
};

/// Smoothness of the vertical-tangent curve C (k) and the horizontal-tangent
/// curve C' (l) through O, as given by the case analysis for saddles, and for
/// non-resonant and resonant nodes.
struct SmoothnessReport {
  Smoothness k;
  Smoothness l;
  int resonance_case = 1;
  Epsilon epsilon_assumed = Epsilon::Unknown;
  /// Present when epsilon is unknown for a resonant node: the (k, l) pair if epsilon = 0.
  std::optional<std::pair<Smoothness, Smoothness>> if_epsilon_zero;
  /// Smoothness s of the change of variables y -> y - u(x) reducing to the product form.
  Smoothness reduction_s;
  std::optional<int> resonance_n;
};

SmoothnessReport smoothness_report(double b, Epsilon epsilon);

enum class Ordering { Less, Greater };

/// Expected-property record of a pleated-improper case.
struct Table1Row {
  Table1Case id = Table1Case::S1;
  Stability field = Stability::Saddle;
  int sign_inv_b = 0;     // sign(1/b)
  int sign_inv_cusp = 0;  // sign(1/(3b - 2))
  /// |1/b| vs |1/(3b-2)| and |b^3| vs |3b-2|; blank in the table for N1, N2.
  std::optional<Ordering> inv_b_vs_inv_cusp;
  std::optional<Ordering> b3_vs_cusp;
};

/// Throws DegenerateError when b is within `tau` of an excluded value.
Table1Row table1_case(double b, double tau = kClassifyMargin);

/// Coordinates in which the equation reads b x p - p^3/3 + phi(p) + x psi(x,p) = y.
///
/// Original and normalized coordinates are related by the contact map
///   x = x0 + sigma X,  y = y0 + p0 sigma X + Y - shift X^2,  p = p0 + (P - 2 shift X) / sigma.
struct NormalFormCoeffs {
  double b = 0.0;
  double sigma = 1.0;
  double shift = 0.0;
  double c_before_shift = 0.0;  // x^2 coefficient c of the scaled equation
  double f_ppp_before_scaling = -2.0;
  Point3 center;
  Jet3 normalized_jet;  // jet of the normalized equation at O, divided by -F_y

  Point3 to_normalized(const Point3& original) const;
  Point3 from_normalized(const Point3& normalized) const;
};

NormalFormCoeffs pleated_improper_normalize(const ImplicitOde& ode, double tau = kClassifyMargin);

struct FoldedImproperData {
  double a = 0.0, b = 0.0, c = 0.0;
  LinearPart lin;
  Stability stability = Stability::Saddle;
  bool well_folded = false;
  std::optional<Resonance> resonance;
};

FoldedImproperData folded_improper_analysis(const ImplicitOde& ode, double tau = kClassifyMargin);

struct PleatedImproperData {
  double b = 0.0;
  Table1Row row;
  std::array<double, 2> eigenvalues{};  // (b, 1 - b)
  std::optional<NodeResonance> resonance;
  SmoothnessReport smoothness;
  NormalFormCoeffs normal_form;
};

/// Normalized quantities the decision was based on.
struct ClassifyMargins {
  double tau = kClassifyMargin;
  double scale = 1.0;
  double F = 0.0, Fp = 0.0, Fpp = 0.0, Fppp = 0.0, Fxp = 0.0, Fy = 0.0, inflection = 0.0;
};

struct SingularClass {
  SingularKind kind = SingularKind::NotSingular;
  std::optional<FoldedImproperData> folded;
  std::optional<PleatedImproperData> pleated;
  std::string degenerate_reason;
  ClassifyMargins margins;
};

struct ClassifyOptions {
  double tau = kClassifyMargin;
  Epsilon epsilon = Epsilon::Unknown;
};

/// Throws OffSurfaceError when F(O) != 0.
SingularClass classify_singular_point(const ImplicitOde& ode, const ClassifyOptions& opts = {});

/// Jet at O of F(x0 + X, y0 + p0 X + Y, p0 + P): the equation moved so that O
/// is the origin with horizontal contact direction.
Jet3 origin_jet(const ImplicitOde& ode);

/// Linearization of the chart field (F_p, -(F_x + p F_y)) at O, including the
/// dependence through y = g(x, p).
std::array<std::array<double, 2>, 2> chart_jacobian(const ImplicitOde& ode);

}  // namespace pleatlab

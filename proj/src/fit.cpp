#include "pleatlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pleatlab/errors.hpp"

namespace pleatlab {

namespace {

struct Graph {
  std::vector<double> p, x, y;
};

Graph graph_over_p(const Trajectory& curve) {
  std::vector<TrajectorySample> s = curve.samples;
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  Graph g;
  for (const auto& q : s) {
    if (!g.p.empty() && q.p - g.p.back() <= 1e-15 * std::max(1.0, std::abs(q.p))) continue;
    g.p.push_back(q.p);
    g.x.push_back(q.x);
    g.y.push_back(q.y);
  }
  return g;
}

// Cubic Lagrange interpolation through the four samples bracketing `at`.
double interpolate(const std::vector<double>& ps, const std::vector<double>& vs, double at) {
  const std::size_t n = ps.size();
  auto it = std::upper_bound(ps.begin(), ps.end(), at);
  std::ptrdiff_t hi = it - ps.begin();
  std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(hi - 2, 0, static_cast<std::ptrdiff_t>(n) - 4);
  double sum = 0.0;
  for (std::ptrdiff_t i = lo; i < lo + 4; ++i) {
    double w = 1.0;
    for (std::ptrdiff_t j = lo; j < lo + 4; ++j)
      if (j != i) w *= (at - ps[j]) / (ps[i] - ps[j]);
    sum += w * vs[i];
  }
  return sum;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) throw FitError("rank-deficient least-squares system");
  return qr.solve(rhs);
}

}  // namespace

namespace {

SemicubicFit fit_once(const Trajectory& curve, FitMode mode, const FitOptions& opts) {
  if (!(opts.window > 0.0) || opts.grid_points < 8) throw FitError("bad fit options");
  const Graph g = graph_over_p(curve);
  if (g.p.size() < 6) throw FitError("too few samples to fit");

  const double lo = std::max(-opts.window, g.p.front());
  const double hi = std::min(opts.window, g.p.back());
  if (std::max(-lo, hi) < 0.5 * opts.window)
    throw FitError("curve does not cover the fit window");

  std::vector<double> grid;
  for (int j = 0; j < opts.grid_points; ++j) {
    const double q = -opts.window + 2.0 * opts.window * j / (opts.grid_points - 1);
    if (q >= lo && q <= hi) grid.push_back(q);
  }
  const int n = static_cast<int>(grid.size());
  const bool homog = opts.homogeneous_exponent.has_value();
  // An integral exponent is a resonance; its mode carries a logarithm.
  const bool logmode = homog && std::abs(*opts.homogeneous_exponent - std::round(*opts.homogeneous_exponent)) < 1e-6;
  const int cols = 1 + (homog ? 1 : 0) + (logmode ? 1 : 0);

  Eigen::MatrixXd ax(n, cols), ay(n, cols);
  Eigen::VectorXd bx(n), by(n);
  for (int i = 0; i < n; ++i) {
    const double q = grid[i];
    ax(i, 0) = q * q;
    ay(i, 0) = q * q * q;
    if (homog) {
      const double ab = std::pow(std::abs(q), *opts.homogeneous_exponent);
      ax(i, 1) = ab;
      ay(i, 1) = (q < 0 ? -1.0 : 1.0) * ab * std::abs(q);
      if (logmode) {
        const double l = q == 0.0 ? 0.0 : std::log(std::abs(q));
        ax(i, 2) = ab * l;
        ay(i, 2) = ay(i, 1) * l;
      }
    }
    bx(i) = interpolate(g.p, g.x, q);
    by(i) = interpolate(g.p, g.y, q);
  }

  SemicubicFit fit;
  fit.window = opts.window;
  fit.points = n;
  const Eigen::VectorXd cx = least_squares(ax, bx);
  fit.A = cx(0);
  if (homog) fit.homogeneous_coeff = cx(1);
  double ss = (ax * cx - bx).squaredNorm();
  int count = n;
  if (std::abs(fit.A) < 1e-12) throw FitError("curve is not quadratically tangent (A = 0)");

  if (mode == FitMode::Plane) {
    if (!std::all_of(g.y.begin(), g.y.end(), [](double v) { return std::isfinite(v); }))
      throw FitError("plane fit needs y samples");
    const Eigen::VectorXd cy = least_squares(ay, by);
    fit.B = cy(0);
    fit.m = SemicubicFit::invariant(fit.A, fit.B);
    ss += (ay * cy - by).squaredNorm();
    count += n;
  } else {
    fit.B = std::nan("");
    fit.m = std::nan("");
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

}  // namespace

SemicubicFit fit_semicubic(const Trajectory& curve, FitMode mode, const FitOptions& opts) {
  SemicubicFit coarse = fit_once(curve, mode, opts);
  if (!opts.richardson) return coarse;
  FitOptions half = opts;
  half.window = 0.5 * opts.window;
  const SemicubicFit fine = fit_once(curve, mode, half);
  // Window bias of the p^2 coefficient is O(window^2).
  SemicubicFit out = coarse;
  out.A = (4.0 * fine.A - coarse.A) / 3.0;
  out.B = (4.0 * fine.B - coarse.B) / 3.0;
  out.m = mode == FitMode::Plane ? SemicubicFit::invariant(out.A, out.B) : std::nan("");
  out.residual = std::max(coarse.residual, fine.residual);
  out.extrapolated = true;
  return out;
}

}  // namespace pleatlab

#include "pleatlab/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pleatlab/errors.hpp"

namespace pleatlab {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

ChartPoint axpy(const ChartPoint& z, double h, std::initializer_list<std::pair<double, ChartPoint>> terms) {
  ChartPoint out = z;
  for (const auto& [w, k] : terms) {
    out.x += h * w * k.x;
    out.p += h * w * k.p;
  }
  return out;
}

struct StepResult {
  ChartPoint z;
  ChartPoint k7;  // derivative at the new point (FSAL)
  double err;
};

class Stepper {
 public:
  Stepper(const PlanarRhs& rhs, int direction, const IntegrationOptions& opts)
      : rhs_(rhs), dir_(direction), opts_(opts) {}

  ChartPoint f(const ChartPoint& z) const {
    ChartPoint v = rhs_(z);
    if (!std::isfinite(v.x) || !std::isfinite(v.p)) throw DomainError("non-finite field value");
    return {dir_ * v.x, dir_ * v.p};
  }

  StepResult step(const ChartPoint& z, const ChartPoint& k1, double h) const {
    const ChartPoint k2 = f(axpy(z, h, {{a21, k1}}));
    const ChartPoint k3 = f(axpy(z, h, {{a31, k1}, {a32, k2}}));
    const ChartPoint k4 = f(axpy(z, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
    const ChartPoint k5 = f(axpy(z, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
    const ChartPoint k6 = f(axpy(z, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
    const ChartPoint zn = axpy(z, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
    const ChartPoint k7 = f(zn);
    const ChartPoint ev =
        axpy({0.0, 0.0}, h, {{e1, k1}, {e3, k3}, {e4, k4}, {e5, k5}, {e6, k6}, {e7, k7}});
    const double sx = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(z.x), std::abs(zn.x));
    const double sp = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(z.p), std::abs(zn.p));
    const double err = std::sqrt(0.5 * ((ev.x / sx) * (ev.x / sx) + (ev.p / sp) * (ev.p / sp)));
    return {zn, k7, err};
  }

 private:
  const PlanarRhs& rhs_;
  int dir_;
  const IntegrationOptions& opts_;
};

}  // namespace

IntegrationRun integrate_dopri5(const PlanarRhs& rhs, ChartPoint z0, int direction,
                                const IntegrationOptions& opts, const StepMonitor& monitor,
                                const RegionCheck& region) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
    throw IntegrationError("tolerances must be positive");
  IntegrationRun run;
  run.t.push_back(0.0);
  run.states.push_back(z0);

  const Stepper stepper(rhs, direction >= 0 ? 1 : -1, opts);
  const double sign = direction >= 0 ? 1.0 : -1.0;

  try {
    ChartPoint z = z0;
    ChartPoint k1 = stepper.f(z);
    double t = 0.0;
    double h = std::min(opts.initial_step, opts.max_step);
    for (long n = 0; n < opts.max_steps; ++n) {
      StepResult r = stepper.step(z, k1, h);
      if (!(r.err <= 1.0)) {
        ++run.rejected_steps;
        const double shrink = std::isfinite(r.err) ? std::max(0.2, 0.9 * std::pow(r.err, -0.2)) : 0.2;
        h *= shrink;
        if (h < opts.min_step) {
          run.stop = StopReason::StepUnderflow;
          return run;
        }
        continue;
      }
      double h_taken = h;
      StopReason crossing = region ? region(r.z) : StopReason::None;
      if (crossing != StopReason::None) {
        // Bisect on the step length for the first point past the boundary.
        double lo = 0.0, hi = h;
        StepResult best = r;
        for (int it = 0; it < 48 && hi - lo > 1e-12 * h; ++it) {
          const double mid = 0.5 * (lo + hi);
          StepResult trial = stepper.step(z, k1, mid);
          if (region(trial.z) != StopReason::None) {
            hi = mid;
            best = trial;
          } else {
            lo = mid;
          }
        }
        r = best;
        h_taken = hi;
      }
      t += sign * h_taken;
      z = r.z;
      k1 = r.k7;
      run.t.push_back(t);
      run.states.push_back(z);
      if (crossing != StopReason::None) {
        run.stop = crossing;
        return run;
      }
      if (monitor) {
        const StopReason s = monitor(t, z);
        if (s != StopReason::None) {
          run.stop = s;
          return run;
        }
      }
      const double grow = r.err > 0.0 ? std::min(5.0, 0.9 * std::pow(r.err, -0.2)) : 5.0;
      h = std::min(h * std::max(0.2, grow), opts.max_step);
    }
    run.stop = StopReason::StepBudget;
  } catch (const ChartBreakdown&) {
    run.stop = StopReason::ChartBreakdown;
  } catch (const NewtonDivergence&) {
    run.stop = StopReason::ChartBreakdown;
  }
  return run;
}

}  // namespace pleatlab

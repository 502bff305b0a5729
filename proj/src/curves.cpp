#include "pleatlab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pleatlab/errors.hpp"

namespace pleatlab {

namespace {

struct Basis {
  ChartPoint u;  // along the curve
  ChartPoint w;  // transverse eigendirection
  double inv[2][2];

  Basis(ChartPoint eu, ChartPoint ew) : u(eu), w(ew) {
    const double det = u.x * w.p - w.x * u.p;
    inv[0][0] = w.p / det;
    inv[0][1] = -w.x / det;
    inv[1][0] = -u.p / det;
    inv[1][1] = u.x / det;
  }
  ChartPoint coords(const ChartPoint& d) const {
    return {inv[0][0] * d.x + inv[0][1] * d.p, inv[1][0] * d.x + inv[1][1] * d.p};
  }
  ChartPoint point(const ChartPoint& o, double a, double c) const {
    return {o.x + a * u.x + c * w.x, o.p + a * u.p + c * w.p};
  }
};

ChartPoint chart_origin(const ImplicitOde& ode) { return {ode.origin().x, ode.origin().p}; }

// Second-order coefficient h of the invariant curve w = h u^2 tangent to e_u,
// from a centered difference of the field along e_u.
double quadratic_coefficient(const ImplicitOde& ode, const Basis& basis, double lu, double lw) {
  const double denom = 2.0 * lu - lw;
  if (std::abs(denom) < 1e-3 * std::max(std::abs(lu), std::abs(lw))) return 0.0;
  const ChartPoint o = chart_origin(ode);
  const double h = 1e-3;
  const double y0 = ode.origin().y;
  const ChartVector fp = chart_field(ode, basis.point(o, h, 0.0), y0);
  const ChartVector fm = chart_field(ode, basis.point(o, -h, 0.0), y0);
  const ChartVector f0 = chart_field(ode, o, y0);
  const ChartPoint d2{(fp.dx - 2.0 * f0.dx + fm.dx) / (h * h), (fp.dp - 2.0 * f0.dp + fm.dp) / (h * h)};
  return 0.5 * basis.coords(d2).p / denom;
}

Trajectory reversed(Trajectory t) {
  std::reverse(t.samples.begin(), t.samples.end());
  return t;
}

Trajectory stitch(const std::array<Trajectory, 2>& branches, const ImplicitOde& ode) {
  Trajectory out;
  const Point3& o = ode.origin();
  const ChartPoint oc{o.x, o.p};
  auto arc_of = [&](const Trajectory& b) {
    std::vector<double> s(b.size());
    double acc = 0.0;
    ChartPoint prev = oc;
    for (std::size_t i = 0; i < b.size(); ++i) {
      acc += distance(prev, b.chart(i));
      prev = b.chart(i);
      s[i] = acc;
    }
    return s;
  };
  const auto s1 = arc_of(branches[1]);
  for (std::size_t i = branches[1].size(); i-- > 0;) {
    TrajectorySample q = branches[1].samples[i];
    q.t = -s1[i];
    out.samples.push_back(q);
  }
  out.samples.push_back({0.0, o.x, o.p, o.y});
  const auto s0 = arc_of(branches[0]);
  for (std::size_t i = 0; i < branches[0].size(); ++i) {
    TrajectorySample q = branches[0].samples[i];
    q.t = s0[i];
    out.samples.push_back(q);
  }
  out.meta.seed = oc;
  out.meta.stop = branches[0].meta.stop;
  return out;
}

void check_reaches_origin(const Trajectory& branch, const ImplicitOde& ode, double tol) {
  if (branch.size() < 2) throw IntegrationError("invariant curve branch has no samples");
  if (distance(branch.chart(0), chart_origin(ode)) > tol)
    throw IntegrationError("invariant curve branch does not reach O within the stitching tolerance");
}

}  // namespace

const char* to_string(CurveKind k) { return k == CurveKind::Vertical ? "C" : "C'"; }

const char* to_string(InvariantCurve::Method m) {
  switch (m) {
    case InvariantCurve::Method::SaddleSeparatrix: return "saddle_separatrix";
    case InvariantCurve::Method::NodeStrongShooting: return "node_strong_shooting";
    case InvariantCurve::Method::NodeWeakBackward: return "node_weak_backward";
  }
  return "?";
}

Trajectory trace_criminant(const ImplicitOde& ode, const TraceOptions& opts) {
  if (!(opts.step > 0.0) || !(opts.p_max > opts.p_min)) throw TraceError("bad trace range");
  const Point3 o = ode.origin();
  const auto& e = ode.expr();
  const auto& prm = ode.params();

  auto correct = [&](double p, double x, double y) {
    for (int it = 0; it < opts.max_newton; ++it) {
      const Jet2 j = eval_jet<2>(e, prm, {x, y, p});
      const Partials<2> d(j);
      const double r1 = d.F(), r2 = d.Fp();
      const double a = d.Fx(), b = d.Fy(), c = d.Fxp(), dd = d.Fyp();
      const double det = a * dd - b * c;
      const double scale = std::max({std::abs(a * dd), std::abs(b * c), 1e-300});
      if (std::abs(det) <= 1e-12 * scale || std::abs(det) < 1e-14)
        throw TraceError("criminant corrector Jacobian is singular: the locus is not a curve over p");
      const double dx = (dd * r1 - b * r2) / det;
      const double dy = (a * r2 - c * r1) / det;
      x -= dx;
      y -= dy;
      if (!std::isfinite(x) || !std::isfinite(y)) break;
      if (std::abs(dx) + std::abs(dy) < 1e-15 * (1.0 + std::abs(x) + std::abs(y))) {
        const Jet1 f = eval_jet<1>(e, prm, {x, y, p});
        if (std::abs(f.coeff(0, 0, 0)) < opts.residual && std::abs(f.coeff(0, 0, 1)) < opts.residual)
          return std::pair{x, y};
      }
    }
    const Jet1 f = eval_jet<1>(e, prm, {x, y, p});
    if (std::isfinite(x) && std::abs(f.coeff(0, 0, 0)) < opts.residual &&
        std::abs(f.coeff(0, 0, 1)) < opts.residual)
      return std::pair{x, y};
    throw TraceError("criminant corrector did not converge at p = " + std::to_string(p));
  };

  // March outward from O in both directions with a secant predictor.
  auto march = [&](double sign, double limit) {
    std::vector<TrajectorySample> out;
    double px = o.x, py = o.y;
    double qx = o.x, qy = o.y;
    bool have_prev = false;
    for (int k = 1;; ++k) {
      const double p = o.p + sign * k * opts.step;
      if (sign * (p - o.p) > limit + 1e-12) break;
      double gx = qx, gy = qy;
      if (have_prev) {
        gx = 2.0 * qx - px;
        gy = 2.0 * qy - py;
      }
      const auto [x, y] = correct(p, gx, gy);
      px = qx;
      py = qy;
      qx = x;
      qy = y;
      have_prev = true;
      out.push_back({p - o.p, x, p, y});
    }
    return out;
  };

  const auto [x0, y0] = correct(o.p, o.x, o.y);
  auto neg = march(-1.0, o.p - opts.p_min);
  auto pos = march(1.0, opts.p_max - o.p);
  Trajectory t;
  t.samples.assign(neg.rbegin(), neg.rend());
  t.samples.push_back({0.0, x0, o.p, y0});
  t.samples.insert(t.samples.end(), pos.begin(), pos.end());
  t.meta.seed = {x0, o.p};
  t.meta.stop = StopReason::RangeEnd;
  t.meta.label = "criminant";
  return t;
}

InvariantCurve invariant_curve(const ImplicitOde& ode, CurveKind which, const CurveOptions& opts) {
  const LinearPart lin = linear_part(chart_jacobian(ode));
  if (!lin.real || !lin.directions) throw DegenerateError("O is not a saddle or a node with distinct eigenvalues");
  const auto& dirs = *lin.directions;
  const int vert = std::abs(dirs[0].p) >= std::abs(dirs[1].p) ? 0 : 1;
  const int iu = which == CurveKind::Vertical ? vert : 1 - vert;
  const double lu = lin.eigenvalues[iu].real();
  const double lw = lin.eigenvalues[1 - iu].real();
  if (std::abs(lu) < 1e-12 || std::abs(lw) < 1e-12) throw DegenerateError("zero eigenvalue at O");
  if (std::abs(lu - lw) <= 1e-9 * std::max(std::abs(lu), std::abs(lw)))
    throw DegenerateError("node with equal eigenvalues");

  InvariantCurve ic;
  ic.which = which;
  ic.eigenvalue = lu;
  ic.other_eigenvalue = lw;
  ic.direction = dirs[iu];
  const Basis basis(dirs[iu], dirs[1 - iu]);
  const ChartPoint o = chart_origin(ode);
  const double y0 = ode.origin().y;
  const Field field = Field::chart(ode);
  const double h2 = opts.seed_order == SeedOrder::Quadratic ? quadratic_coefficient(ode, basis, lu, lw) : 0.0;

  if (lu * lw < 0.0) {
    ic.method = InvariantCurve::Method::SaddleSeparatrix;
    const int dir = lu > 0.0 ? 1 : -1;
    FlowLimits lim;
    lim.window = opts.window;
    lim.max_arc = opts.arc;
    for (int k = 0; k < 2; ++k) {
      const double a = (k == 0 ? 1.0 : -1.0) * opts.seed_radius;
      const ChartPoint seed = basis.point(o, a, h2 * a * a);
      ic.branches[k] = integrate_field(field, seed, dir, opts.integ, lim, y0);
      check_reaches_origin(ic.branches[k], ode, 2.0 * opts.seed_radius);
    }
  } else if (std::abs(lu) > std::abs(lw)) {
    ic.method = InvariantCurve::Method::NodeStrongShooting;
    const int dir_in = lu > 0.0 ? -1 : 1;
    const double cone = std::tan(60.0 * std::numbers::pi / 180.0);
    for (int k = 0; k < 2; ++k) {
      const double s = k == 0 ? 1.0 : -1.0;
      auto seed_at = [&](double phi) {
        const ChartPoint d = basis.point({0.0, 0.0}, s * std::cos(phi), std::sin(phi));
        const double r = opts.arc / norm(d);
        return ChartPoint{o.x + r * d.x, o.p + r * d.p};
      };
      auto run = [&](double phi, double origin_radius) {
        FlowLimits lim;
        lim.max_arc = 10.0 * opts.arc;
        lim.origin = o;
        lim.origin_radius = origin_radius;
        lim.extra = [&](const ChartPoint& z) {
          const ChartPoint c = basis.coords({z.x - o.x, z.p - o.p});
          return std::abs(c.p) > cone * std::abs(c.x) || c.x * s < 0.0 ? StopReason::RangeEnd
                                                                      : StopReason::None;
        };
        return integrate_field(field, seed_at(phi), dir_in, opts.integ, lim, y0);
      };
      auto side = [&](double phi) {
        const Trajectory t = run(phi, 1e-9);
        if (t.meta.stop == StopReason::ChartBreakdown || t.meta.stop == StopReason::StepUnderflow)
          throw IntegrationError("shooting orbit failed: " + std::string(to_string(t.meta.stop)));
        const ChartPoint last = t.chart(t.size() - 1);
        const double w = basis.coords({last.x - o.x, last.p - o.p}).p;
        return w > 0.0 ? 1 : (w < 0.0 ? -1 : 0);
      };
      double lo = -std::numbers::pi / 4.0, hi = std::numbers::pi / 4.0;
      int slo = side(lo), shi = side(hi);
      if (slo == shi) {
        lo = -80.0 * std::numbers::pi / 180.0;
        hi = -lo;
        slo = side(lo);
        shi = side(hi);
      }
      if (slo == shi) throw IntegrationError("shooting bracket does not straddle the strong direction");
      double mid = 0.5 * (lo + hi);
      for (int it = 0; it < opts.bisections; ++it) {
        mid = 0.5 * (lo + hi);
        const int sm = side(mid);
        if (sm == 0) break;
        (sm == slo ? lo : hi) = mid;
      }
      ic.branches[k] = reversed(run(mid, opts.stop_radius));
      check_reaches_origin(ic.branches[k], ode, 2.0 * opts.seed_radius);
    }
  } else {
    ic.method = InvariantCurve::Method::NodeWeakBackward;
    const int dir_in = lu > 0.0 ? -1 : 1;
    FlowLimits lim;
    lim.max_arc = 10.0 * opts.arc;
    lim.origin = o;
    lim.origin_radius = opts.stop_radius;
    for (int k = 0; k < 2; ++k) {
      // A seed outside the basin of O is pulled back toward it.
      double arc = opts.arc;
      for (int attempt = 0;; ++attempt, arc *= 0.5) {
        const double a = (k == 0 ? 1.0 : -1.0) * arc;
        const ChartPoint seed = basis.point(o, a, h2 * a * a);
        ic.branches[k] = reversed(integrate_field(field, seed, dir_in, opts.integ, lim, y0));
        if (ic.branches[k].meta.stop == StopReason::ReachedOrigin || attempt == 3) break;
      }
      check_reaches_origin(ic.branches[k], ode, 2.0 * opts.seed_radius);
    }
  }
  for (int k = 0; k < 2; ++k)
    ic.branches[k].meta.label = std::string(to_string(which)) + (k == 0 ? "+" : "-");
  ic.stitched = stitch(ic.branches, ode);
  ic.stitched.meta.label = to_string(which);
  return ic;
}

Trajectory to_normalized(const Trajectory& curve, const NormalFormCoeffs& nf) {
  Trajectory out = curve;
  for (auto& s : out.samples) {
    const Point3 q = nf.to_normalized({s.x, s.y, s.p});
    s.x = q.x;
    s.y = q.y;
    s.p = q.p;
  }
  return out;
}

double cubic_invariance_residual(double b, double p_max, int points) {
  const ImplicitOde cubic = ImplicitOde::from_text("b*x*p - p^3/3 - y", {{"b", b}});
  const double v0 = 1.0 / (3.0 * b - 2.0);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double p = -p_max + 2.0 * p_max * i / (points - 1);
    const double x = v0 * p * p;
    const double y = b * x * p - p * p * p / 3.0;
    const ChartVector v = chart_field(cubic, {x, p}, y);
    worst = std::max(worst, std::abs(v.dx - 2.0 * v0 * p * v.dp));
  }
  return worst;
}

namespace {

const PleatedImproperData& require_pleated(const SingularClass& sc) {
  if (sc.kind != SingularKind::PleatedImproper || !sc.pleated)
    throw DegenerateError("O is not a pleated improper point" +
                          (sc.degenerate_reason.empty() ? std::string() : ": " + sc.degenerate_reason));
  return *sc.pleated;
}

std::optional<double> node_exponent(const InvariantCurve& ic) {
  if (ic.method != InvariantCurve::Method::NodeWeakBackward) return std::nullopt;
  const double beta = ic.other_eigenvalue / ic.eigenvalue;
  if (std::abs(beta - 2.0) < 0.05) return std::nullopt;
  return beta;
}

}  // namespace

CurveCCheck curve_c_check(const ImplicitOde& ode, const CurveOptions& copts, const FitOptions& fopts) {
  const SingularClass sc = classify_singular_point(ode);
  const PleatedImproperData& pi = require_pleated(sc);
  CurveCCheck res;
  res.b = pi.b;
  res.case_id = pi.row.id;
  res.v0_predicted = 1.0 / (3.0 * pi.b - 2.0);
  res.B_predicted = 2.0 / (3.0 * (3.0 * pi.b - 2.0));
  res.v0_fitted = res.B_fitted = res.rel_err = std::nan("");

  auto generic_fit = [&] {
    CurveOptions c = copts;
    c.seed_order = SeedOrder::Linear;
    const InvariantCurve ic = invariant_curve(ode, CurveKind::Vertical, c);
    FitOptions f = fopts;
    if (!f.homogeneous_exponent) f.homogeneous_exponent = node_exponent(ic);
    f.richardson = true;
    res.fit = fit_semicubic(to_normalized(ic.stitched, pi.normal_form), FitMode::Plane, f);
    res.v0_fitted = res.fit.A;
    res.B_fitted = res.fit.B;
    res.rel_err = std::abs(res.v0_fitted - res.v0_predicted) / std::abs(res.v0_predicted);
  };

  if (pi.row.id == Table1Case::N2) {
    res.informational = true;
    res.invariance_residual = cubic_invariance_residual(pi.b);
    try {
      generic_fit();
    } catch (const Error&) {
    }
  } else {
    generic_fit();
  }
  return res;
}

ArrangementReport arrangement(const ImplicitOde& ode, const CurveOptions& copts, const FitOptions& fopts) {
  const SingularClass sc = classify_singular_point(ode);
  const PleatedImproperData& pi = require_pleated(sc);
  const NormalFormCoeffs& nf = pi.normal_form;
  ArrangementReport rep;
  rep.b = pi.b;

  const double reach = fopts.window / std::abs(nf.sigma);
  TraceOptions t;
  t.p_min = ode.origin().p - 1.5 * reach;
  t.p_max = ode.origin().p + 1.5 * reach;
  t.step = reach / 40.0;
  rep.fit_K = fit_semicubic(to_normalized(trace_criminant(ode, t), nf), FitMode::Plane, fopts);

  const InvariantCurve ic = invariant_curve(ode, CurveKind::Vertical, copts);
  FitOptions f = fopts;
  if (!f.homogeneous_exponent) f.homogeneous_exponent = node_exponent(ic);
  rep.fit_C = fit_semicubic(to_normalized(ic.stitched, nf), FitMode::Plane, f);

  rep.mK = rep.fit_K.m;
  rep.mC = rep.fit_C.m;
  rep.same_semiplane = (rep.fit_K.A > 0.0) == (rep.fit_C.A > 0.0);
  if (rep.same_semiplane) rep.c_in_tongue = std::abs(rep.mC) < std::abs(rep.mK);
  return rep;
}

HermiteTable::HermiteTable(std::vector<double> xs, std::vector<double> us, std::vector<double> dus)
    : xs_(std::move(xs)), us_(std::move(us)), dus_(std::move(dus)) {
  if (xs_.size() < 2 || us_.size() != xs_.size() || dus_.size() != xs_.size())
    throw TraceError("Hermite table needs at least two samples");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1])) throw TraceError("Hermite table abscissae must increase");
}

std::size_t HermiteTable::segment(double x) const {
  if (!(x >= xs_.front() && x <= xs_.back())) throw TraceError("u is evaluated outside its table");
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  return std::min<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin(), 1) - 1, xs_.size() - 2);
}

double HermiteTable::value(double x) const {
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * us_[i] + (s3 - 2 * s2 + s) * h * dus_[i] +
         (-2 * s3 + 3 * s2) * us_[i + 1] + (s3 - s2) * h * dus_[i + 1];
}

double HermiteTable::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * us_[i] + (-6 * s2 + 6 * s) * us_[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * dus_[i] + (3 * s2 - 2 * s) * dus_[i + 1];
}

double Form12Reduction::G(const ImplicitOde& ode, double x, double Y, double P) const {
  return ode.value({x, Y + u.value(x), P + u.derivative(x)});
}

Form12Reduction reduce_to_form12(const ImplicitOde& ode, double x_window, const CurveOptions& opts,
                                 Epsilon eps) {
  const SingularClass sc = classify_singular_point(ode, {kClassifyMargin, eps});
  const PleatedImproperData& pi = require_pleated(sc);
  CurveOptions c = opts;
  c.integ.max_step = std::min(c.integ.max_step, x_window / 50.0);
  c.arc = std::max(c.arc, 2.0 * x_window);
  const InvariantCurve ic = invariant_curve(ode, CurveKind::Horizontal, c);

  std::vector<double> xs, us, dus;
  for (const auto& s : ic.stitched.samples) {
    if (!xs.empty() && s.x <= xs.back()) {
      if (s.x == xs.back()) continue;
      throw TraceError("C' is not a graph over x");
    }
    xs.push_back(s.x);
    us.push_back(s.y);
    dus.push_back(s.p);
  }
  const double x0 = ode.origin().x;
  if (xs.size() < 2 || xs.front() > x0 - x_window || xs.back() < x0 + x_window)
    throw TraceError("C' leaves the chart before covering the x-window");

  Form12Reduction red;
  red.u = HermiteTable(std::move(xs), std::move(us), std::move(dus));
  red.x_window = x_window;
  red.u_at_origin = red.u.value(x0) - ode.origin().y;
  red.du_at_origin = red.u.derivative(x0) - ode.origin().p;
  red.s = pi.smoothness.reduction_s;
  const int n = 401;
  for (int i = 0; i < n; ++i) {
    const double x = x0 - x_window + 2.0 * x_window * i / (n - 1);
    red.max_residual = std::max(red.max_residual, std::abs(red.G(ode, x, 0.0, 0.0)));
  }
  return red;
}

}  // namespace pleatlab

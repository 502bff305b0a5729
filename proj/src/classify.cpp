#include "pleatlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pleatlab {

const char* to_string(SingularKind k) {
  switch (k) {
    case SingularKind::NotSingular: return "NotSingular";
    case SingularKind::FoldedProper: return "FoldedProper";
    case SingularKind::PleatedProper: return "PleatedProper";
    case SingularKind::FoldedImproper: return "FoldedImproper";
    case SingularKind::PleatedImproper: return "PleatedImproper";
    case SingularKind::Degenerate: return "Degenerate";
  }
  return "?";
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Saddle: return "saddle";
    case Stability::Node: return "node";
    case Stability::Focus: return "focus";
  }
  return "?";
}

const char* to_string(Table1Case c) {
  switch (c) {
    case Table1Case::S1: return "S1";
    case Table1Case::S2: return "S2";
    case Table1Case::N1: return "N1";
    case Table1Case::N2: return "N2";
    case Table1Case::N3: return "N3";
    case Table1Case::S3: return "S3";
  }
  return "?";
}

const char* to_string(NodeResonance::Form f) {
  switch (f) {
    case NodeResonance::Form::InverseSuccessor: return "1/(n+1)";
    case NodeResonance::Form::SuccessorRatio: return "n/(n+1)";
    case NodeResonance::Form::Other: return "other";
  }
  return "?";
}

// ---------------------------------------------------------------------------

LinearPart linear_part(const std::array<std::array<double, 2>, 2>& m) {
  LinearPart lp;
  lp.matrix = m;
  const double tr = lp.trace();
  const double det = lp.det();
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    lp.eigenvalues = {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
    lp.real = false;
    return lp;
  }
  const double root = std::sqrt(disc);
  // Avoid cancellation for the smaller root.
  const double l1 = 0.5 * (tr + std::copysign(root, tr == 0.0 ? 1.0 : tr));
  const double l2 = l1 != 0.0 ? det / l1 : 0.5 * (tr - root);
  const double hi = std::max(l1, l2), lo = std::min(l1, l2);
  lp.eigenvalues = {hi, lo};
  lp.real = true;

  const double scale = std::max({std::abs(m[0][0]), std::abs(m[0][1]), std::abs(m[1][0]),
                                 std::abs(m[1][1]), 1e-300});
  if (hi - lo <= 1e-12 * scale) return lp;

  auto direction = [&](double lam) {
    const ChartPoint v1{m[0][1], lam - m[0][0]};
    const ChartPoint v2{lam - m[1][1], m[1][0]};
    ChartPoint v = norm(v1) >= norm(v2) ? v1 : v2;
    const double n = norm(v);
    v = {v.x / n, v.p / n};
    // Sign convention: the dominant component is positive.
    if ((std::abs(v.x) >= std::abs(v.p) ? v.x : v.p) < 0.0) v = {-v.x, -v.p};
    return v;
  };
  lp.directions = std::array<ChartPoint, 2>{direction(hi), direction(lo)};
  return lp;
}

std::optional<Resonance> resonance_of(double lambda1, double lambda2, int max_order,
                                      double rel_tol) {
  const double scale = std::max(std::abs(lambda1), std::abs(lambda2));
  if (scale == 0.0) return std::nullopt;
  const double lam[2] = {lambda1, lambda2};
  for (int order = 2; order <= max_order; ++order)
    for (int i = 0; i < 2; ++i)
      for (int k1 = order; k1 >= 0; --k1) {
        const int k2 = order - k1;
        if (std::abs(lam[i] - (k1 * lambda1 + k2 * lambda2)) <= rel_tol * scale)
          return Resonance{i + 1, k1, k2};
      }
  return std::nullopt;
}

namespace {

bool near(double a, double b, double rel = kResonanceRelTol) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

Stability pleated_field_type(double b) { return (b > 0.0 && b < 1.0) ? Stability::Node : Stability::Saddle; }

std::optional<NodeResonance> node_resonance(double b) {
  const auto r = resonance_of(b, 1.0 - b);
  if (!r) return std::nullopt;
  NodeResonance nr;
  nr.relation = *r;
  if (r->i == 2 && r->k2 == 0) {
    nr.form = NodeResonance::Form::InverseSuccessor;  // 1 - b = n b
    nr.n = r->k1;
  } else if (r->i == 1 && r->k1 == 0) {
    nr.form = NodeResonance::Form::SuccessorRatio;  // b = n (1 - b)
    nr.n = r->k2;
  }
  return nr;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SmoothnessReport smoothness_report(double b, Epsilon epsilon) {
  if (std::abs(b - 0.5) <= kClassifyMargin || std::abs(b) <= kClassifyMargin ||
      std::abs(b - 1.0) <= kClassifyMargin)
    throw DegenerateError("smoothness report needs a saddle or a non-degenerate node");
  SmoothnessReport rep;
  rep.k = rep.l = rep.reduction_s = Smoothness::infinite();
  rep.resonance_case = 1;
  rep.epsilon_assumed = epsilon;
  if (pleated_field_type(b) == Stability::Saddle) return rep;

  int n = 0;
  int resonance_case = 1;
  if (const int m = static_cast<int>(std::lround(1.0 / b - 1.0)); m >= 2 && near(b, 1.0 / (m + 1))) {
    n = m;
    resonance_case = 2;
  } else if (const int m2 = static_cast<int>(std::lround(b / (1.0 - b)));
             m2 >= 3 && near(b, static_cast<double>(m2) / (m2 + 1))) {
    n = m2;
    resonance_case = 3;
  }
  if (resonance_case == 1 || epsilon == Epsilon::Zero) return rep;

  rep.resonance_n = n;
  rep.resonance_case = resonance_case;
  if (resonance_case == 2) {
    rep.l = Smoothness::finite(n - 1);
    rep.reduction_s = Smoothness::finite(n);
  } else {
    rep.k = Smoothness::finite(n - 1);
  }
  if (epsilon == Epsilon::Unknown)
    rep.if_epsilon_zero = std::make_pair(Smoothness::infinite(), Smoothness::infinite());
  return rep;
}

Table1Row table1_case(double b, double tau) {
  double nearest = kExcludedB[0];
  for (double e : kExcludedB)
    if (std::abs(b - e) < std::abs(b - nearest)) nearest = e;
  if (!std::isfinite(b) || std::abs(b - nearest) <= tau)
    throw DegenerateError("b = " + fmt_double(b) + " is within the margin of the excluded value " +
                          fmt_double(nearest));
  Table1Row row;
  if (b < -2.0) row.id = Table1Case::S1;
  else if (b < 0.0) row.id = Table1Case::S2;
  else if (b < 0.5) row.id = Table1Case::N1;
  else if (b < 2.0 / 3.0) row.id = Table1Case::N2;
  else if (b < 1.0) row.id = Table1Case::N3;
  else row.id = Table1Case::S3;
  row.field = pleated_field_type(b);
  const double cusp = 3.0 * b - 2.0;
  row.sign_inv_b = b > 0 ? 1 : -1;
  row.sign_inv_cusp = cusp > 0 ? 1 : -1;
  if (row.sign_inv_b == row.sign_inv_cusp) {
    row.inv_b_vs_inv_cusp = std::abs(cusp) > std::abs(b) ? Ordering::Greater : Ordering::Less;
    row.b3_vs_cusp = std::abs(b * b * b) > std::abs(cusp) ? Ordering::Greater : Ordering::Less;
  }
  return row;
}

// ---------------------------------------------------------------------------

Jet3 origin_jet(const ImplicitOde& ode) {
  const Point3& o = ode.origin();
  const Jet3 X = Jet3::variable(0, 0.0), Y = Jet3::variable(1, 0.0), P = Jet3::variable(2, 0.0);
  return eval_jet_substituted<3>(ode.expr(), ode.params(), X + Jet3::constant(o.x),
                                 Y + X * o.p + Jet3::constant(o.y), P + Jet3::constant(o.p));
}

std::array<std::array<double, 2>, 2> chart_jacobian(const ImplicitOde& ode) {
  const Point3& o = ode.origin();
  const Partials<2> d(ode.jet<2>(o));
  if (std::abs(d.Fy()) < kChartBreakdown) throw ChartBreakdown("|F_y| below chart threshold at O");
  const double gx = -d.Fx() / d.Fy();
  const double gp = -d.Fp() / d.Fy();
  const double h2x = -(d.Fxx() + o.p * d.Fxy());
  const double h2y = -(d.Fxy() + o.p * d.Fyy());
  const double h2p = -(d.Fxp() + d.Fy() + o.p * d.Fyp());
  return {{{d.Fxp() + d.Fyp() * gx, d.Fpp() + d.Fyp() * gp}, {h2x + h2y * gx, h2p + h2y * gp}}};
}

Point3 NormalFormCoeffs::to_normalized(const Point3& q) const {
  const double X = (q.x - center.x) / sigma;
  const double P = sigma * (q.p - center.p) + 2.0 * shift * X;
  const double Y = q.y - center.y - center.p * sigma * X + shift * X * X;
  return {X, Y, P};
}

Point3 NormalFormCoeffs::from_normalized(const Point3& q) const {
  return {center.x + sigma * q.x, center.y + center.p * sigma * q.x + q.y - shift * q.x * q.x,
          center.p + (q.p - 2.0 * shift * q.x) / sigma};
}

namespace {

Jet3 normalized_substitution(const ImplicitOde& ode, double sigma, double shift) {
  const Point3& o = ode.origin();
  const Jet3 X = Jet3::variable(0, 0.0), Y = Jet3::variable(1, 0.0), P = Jet3::variable(2, 0.0);
  const Jet3 x = X * sigma + Jet3::constant(o.x);
  const Jet3 y = Jet3::constant(o.y) + X * (o.p * sigma) + Y - X * X * shift;
  const Jet3 p = Jet3::constant(o.p) + (P - X * (2.0 * shift)) / sigma;
  Jet3 j = eval_jet_substituted<3>(ode.expr(), ode.params(), x, y, p);
  const double fy = j.partial(0, 1, 0);
  if (std::abs(fy) < kChartBreakdown) throw DegenerateError("F_y = 0 at O");
  return j / (-fy);
}

}  // namespace

NormalFormCoeffs pleated_improper_normalize(const ImplicitOde& ode, double tau) {
  NormalFormCoeffs nf;
  nf.center = ode.origin();
  const Jet3 h = normalized_substitution(ode, 1.0, 0.0);
  nf.b = h.partial(1, 0, 1);
  table1_case(nf.b, tau);  // rejects excluded values
  nf.f_ppp_before_scaling = h.partial(0, 0, 3);
  if (std::abs(nf.f_ppp_before_scaling) <= tau) throw DegenerateError("f_ppp = 0 at O");
  nf.sigma = std::cbrt(-nf.f_ppp_before_scaling / 2.0);
  const Jet3 scaled = normalized_substitution(ode, nf.sigma, 0.0);
  nf.c_before_shift = scaled.partial(2, 0, 0);
  nf.shift = nf.c_before_shift / (2.0 * (2.0 * nf.b - 1.0));
  nf.normalized_jet = normalized_substitution(ode, nf.sigma, nf.shift);
  return nf;
}

FoldedImproperData folded_improper_analysis(const ImplicitOde& ode, double tau) {
  const Jet3 g = origin_jet(ode);
  const double gy = g.partial(0, 1, 0);
  if (std::abs(gy) <= tau) throw DegenerateError("F_y = 0 at O");
  const Jet3 h = g / (-gy);
  FoldedImproperData fi;
  fi.a = h.partial(0, 0, 2);
  fi.b = h.partial(1, 0, 1);
  fi.c = h.partial(2, 0, 0);
  fi.lin = linear_part({{{fi.b, fi.a}, {-fi.c, 1.0 - fi.b}}});
  const double det = fi.b * (1.0 - fi.b) + fi.a * fi.c;
  if (std::abs(det) <= tau) throw DegenerateError("zero eigenvalue of the linear part (det = 0)");
  if (det < 0.0) fi.stability = Stability::Saddle;
  else if (det <= 0.25) fi.stability = Stability::Node;
  else fi.stability = Stability::Focus;

  if (!fi.lin.real) {
    // Complex pair: the modulus-ratio and eigendirection conditions do not apply.
    fi.well_folded = true;
    return fi;
  }
  const double l1 = fi.lin.eigenvalues[0].real(), l2 = fi.lin.eigenvalues[1].real();
  bool ok = std::abs(l1) > tau && std::abs(l2) > tau && std::abs(std::abs(l1) - std::abs(l2)) > tau;
  if (ok && fi.lin.directions) {
    // Criminant tangent in the (x, p) chart: kernel of (F_px, F_pp) ~ (b, a).
    ChartPoint t{fi.a, -fi.b};
    const double tn = norm(t);
    for (const ChartPoint& e : *fi.lin.directions) {
      const double sin_angle = tn > 0.0 ? std::abs(e.x * t.p - e.p * t.x) / tn : 1.0;
      ok = ok && sin_angle > tau && std::abs(e.x) > tau;
    }
  } else {
    ok = false;
  }
  fi.well_folded = ok;
  fi.resonance = resonance_of(l1, l2);
  return fi;
}

SingularClass classify_singular_point(const ImplicitOde& ode, const ClassifyOptions& opts) {
  const double tau = opts.tau;
  const Point3& o = ode.origin();
  if (!ode.on_surface(o))
    throw OffSurfaceError("O is not on the surface: F(O) = " + fmt_double(ode.value(o)));

  const Jet3 g = origin_jet(ode);
  SingularClass sc;
  ClassifyMargins& m = sc.margins;
  m.tau = tau;
  const double fy_raw = g.partial(0, 1, 0);
  m.scale = std::abs(fy_raw) > tau ? std::abs(fy_raw) : 1.0;
  m.F = g.value() / m.scale;
  m.Fp = g.partial(0, 0, 1) / m.scale;
  m.Fpp = g.partial(0, 0, 2) / m.scale;
  m.Fppp = g.partial(0, 0, 3) / m.scale;
  m.Fxp = g.partial(1, 0, 1) / m.scale;
  m.Fy = fy_raw / m.scale;
  m.inflection = g.partial(1, 0, 0) / m.scale;  // F_x + p F_y at O

  auto degenerate = [&](std::string why) {
    sc.kind = SingularKind::Degenerate;
    sc.degenerate_reason = std::move(why);
    return sc;
  };

  if (std::abs(m.Fp) > tau) {
    sc.kind = SingularKind::NotSingular;
    return sc;
  }
  const bool proper = std::abs(m.inflection) > tau;
  const bool graph = std::abs(fy_raw) > tau;
  if (std::abs(m.Fpp) > tau) {
    if (proper) {
      sc.kind = SingularKind::FoldedProper;
      return sc;
    }
    if (!graph) return degenerate("F_y=0");
    try {
      sc.folded = folded_improper_analysis(ode, tau);
    } catch (const DegenerateError& e) {
      return degenerate(e.what());
    }
    sc.kind = SingularKind::FoldedImproper;
    return sc;
  }
  if (std::abs(m.Fppp) <= tau) return degenerate("F_pp=0 and F_ppp=0");
  if (proper) {
    if (std::abs(m.Fxp) <= tau) return degenerate("F_xp=0");
    sc.kind = SingularKind::PleatedProper;
    return sc;
  }
  if (!graph) return degenerate("F_y=0");

  PleatedImproperData pi;
  try {
    pi.normal_form = pleated_improper_normalize(ode, tau);
    pi.b = pi.normal_form.b;
    pi.row = table1_case(pi.b, tau);
    pi.smoothness = smoothness_report(pi.b, opts.epsilon);
  } catch (const DegenerateError& e) {
    return degenerate(e.what());
  }
  pi.eigenvalues = {pi.b, 1.0 - pi.b};
  if (pi.row.field == Stability::Node) pi.resonance = node_resonance(pi.b);
  sc.pleated = pi;
  sc.kind = SingularKind::PleatedImproper;
  return sc;
}

}  // namespace pleatlab

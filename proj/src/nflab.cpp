#include "pleatlab/nflab.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "pleatlab/classify.hpp"
#include "pleatlab/errors.hpp"

namespace pleatlab {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string OracleId::str() const {
  switch (kind) {
    case OracleKind::Cubic: return "cubic:b=" + num(b);
    case OracleKind::WellFolded: return "wellfolded:alpha=" + num(alpha);
    case OracleKind::NodeNonres: return "node_nonres:beta=" + num(beta);
    case OracleKind::NodeRes: return "node_res:n=" + std::to_string(n) + ",eps=" + std::to_string(eps);
  }
  return "?";
}

double node_beta(double b) {
  if (!(b > 0.0 && b < 1.0) || b == 0.5)
    throw InadmissibleParameter("node ratio needs 0 < b < 1, b != 1/2");
  return std::max(b / (1.0 - b), (1.0 - b) / b);
}

Oracle make_oracle(const OracleId& id) {
  Oracle o;
  o.id = id;
  switch (id.kind) {
    case OracleKind::Cubic: {
      const double b = id.b;
      try {
        table1_case(b);
      } catch (const DegenerateError& e) {
        throw InadmissibleParameter(std::string("cubic family: ") + e.what());
      }
      o.equation = "b*x*p - p^3/3 - y";
      o.ode = ImplicitOde::from_text(o.equation, {{"b", b}});
      o.criminant = [b](double p) { return Point3{p * p / b, 2.0 * p * p * p / 3.0, p}; };
      const double v0 = 1.0 / (3.0 * b - 2.0);
      o.curve_C = [v0](double p) { return Point3{v0 * p * p, 2.0 * v0 * p * p * p / 3.0, p}; };
      o.curve_Cprime = [](double x) { return Point3{x, 0.0, 0.0}; };
      break;
    }
    case OracleKind::WellFolded: {
      const double a = id.alpha;
      if (!std::isfinite(a)) throw InadmissibleParameter("alpha must be finite");
      o.equation = "(p + alpha*x)^2 - y";
      o.ode = ImplicitOde::from_text(o.equation, {{"alpha", a}});
      o.criminant = [a](double p) {
        return a != 0.0 ? Point3{-p / a, 0.0, p} : Point3{std::nan(""), 0.0, p};
      };
      break;
    }
    case OracleKind::NodeNonres: {
      const double beta = id.beta;
      if (!(beta > 1.0) || !std::isfinite(beta)) throw InadmissibleParameter("beta must exceed 1");
      o.planar = [beta](const ChartPoint& z) { return ChartPoint{z.x, beta * z.p}; };
      o.integral_curve = [beta](double c, double xi) { return c * std::pow(std::abs(xi), beta); };
      break;
    }
    case OracleKind::NodeRes: {
      const int n = id.n;
      const int eps = id.eps;
      if (n < 2) throw InadmissibleParameter("n must be an integer >= 2");
      if (eps != 0 && eps != 1) throw InadmissibleParameter("eps must be 0 or 1");
      o.planar = [n, eps](const ChartPoint& z) {
        return ChartPoint{z.x, n * z.p + eps * std::pow(z.x, n)};
      };
      o.integral_curve = [n, eps](double c, double xi) {
        const double xn = std::pow(xi, n);
        if (eps == 0) return c * xn;
        return xn * (c + std::log(std::max(std::abs(xi), kLogFloor)));
      };
      break;
    }
  }
  return o;
}

Trajectory oracle_integral_curve(const OracleId& id, double c, double xi_min, double xi_max, int points) {
  if (id.kind != OracleKind::NodeNonres && id.kind != OracleKind::NodeRes)
    throw InadmissibleParameter("integral curves are tabulated for the node forms only");
  if (points < 2 || !(xi_max > xi_min)) throw DomainError("empty xi range");
  const bool logarithmic = id.kind == OracleKind::NodeRes && id.eps != 0;
  if (logarithmic && xi_min < kLogFloor && xi_max > -kLogFloor)
    throw DomainError("xi range reaches the logarithmic singularity at 0");
  const Oracle o = make_oracle(id);
  Trajectory t;
  t.meta.label = id.str();
  t.samples.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double xi = xi_min + (xi_max - xi_min) * i / (points - 1);
    const double eta = o.integral_curve(c, xi);
    if (!std::isfinite(eta)) throw DomainError("integral curve overflows at xi = " + num(xi));
    t.samples.push_back({xi, xi, eta, std::nan("")});
  }
  t.meta.seed = {xi_min, t.samples.front().p};
  t.meta.stop = StopReason::RangeEnd;
  return t;
}

}  // namespace pleatlab

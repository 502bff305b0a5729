#include <doctest.h>

#include <random>

#include "pleatlab/expr.hpp"
#include "support/ad_check.hpp"

using namespace pleatlab;

TEST_SUITE("jet") {

TEST_CASE("p^2 - x at O") {
  const Jet3 j = eval_jet<3>(parse("p^2 - x"), {}, {});
  for (const auto& mi : Jet3::kIndices) {
    double want = 0.0;
    if (mi.i == 1 && mi.j == 0 && mi.k == 0) want = -1.0;
    if (mi.i == 0 && mi.j == 0 && mi.k == 2) want = 2.0;
    CHECK(j.partial(mi.i, mi.j, mi.k) == want);
  }
}

TEST_CASE("2xp - p^3/3 - y at O") {
  const Jet3 j = eval_jet<3>(parse("2*x*p - p^3/3 - y"), {}, {});
  CHECK(j.partial(1, 0, 1) == doctest::Approx(2.0));
  CHECK(j.partial(0, 0, 3) == doctest::Approx(-2.0));
  CHECK(j.partial(0, 1, 0) == doctest::Approx(-1.0));
  CHECK(j.partial(0, 0, 1) == 0.0);
  CHECK(j.partial(1, 0, 0) == 0.0);
  CHECK(j.partial(0, 0, 2) == 0.0);
}

TEST_CASE("sin(p) exp(x) against finite differences") {
  const Expr e = parse("sin(p)*exp(x)");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::function<fdo::real(const fdo::Point&)> f = [](const fdo::Point& v) { return sin(v[2]) * exp(v[0]); };
  for (int trial = 0; trial < 10; ++trial) {
    const Point3 c{u(rng), u(rng), u(rng)};
    const Jet3 j = eval_jet<3>(e, {}, c);
    const fdo::Point cm = {c.x, c.y, c.p};
    for (const auto& mi : Jet3::kIndices) {
      const double fd = static_cast<double>(fdo::partial(f, cm, mi.i, mi.j, mi.k));
      CHECK(std::abs(j.partial(mi.i, mi.j, mi.k) - fd) <= 1e-6 * std::abs(fd) + 1e-12);
    }
  }
}

TEST_CASE("random expressions against finite differences") {
  const fdo::AdReport rep = fdo::ad_check(50, 20240917u);
  CHECK(rep.expressions == 50);
  CHECK(rep.partials == 50 * 20);
  for (const auto& m : rep.mismatches) {
    INFO(m.text << " d(" << m.i << "," << m.j << "," << m.k << ") jet=" << m.jet << " fd=" << m.fd);
    CHECK(false);
  }
  CHECK(rep.max_rel < 1e-6);
}

TEST_CASE("sum and product rules") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const Expr a = parse("sin(x + 2*p) - y^2");
  const Expr b = parse("exp(x*y) + p^3");
  const Bindings none;
  for (int trial = 0; trial < 20; ++trial) {
    const Point3 c{u(rng), u(rng), u(rng)};
    const Jet3 ja = eval_jet<3>(a, none, c), jb = eval_jet<3>(b, none, c);
    const Jet3 js = eval_jet<3>(a + b, none, c), jp = eval_jet<3>(a * b, none, c);
    for (const auto& mi : Jet3::kIndices) {
      CHECK(js.coeff(mi.i, mi.j, mi.k) == doctest::Approx(ja.coeff(mi.i, mi.j, mi.k) + jb.coeff(mi.i, mi.j, mi.k)).epsilon(1e-14));
      // truncated convolution
      double conv = 0.0;
      for (const auto& m1 : Jet3::kIndices)
        for (const auto& m2 : Jet3::kIndices)
          if (m1.i + m2.i == mi.i && m1.j + m2.j == mi.j && m1.k + m2.k == mi.k)
            conv += ja.coeff(m1.i, m1.j, m1.k) * jb.coeff(m2.i, m2.j, m2.k);
      CHECK(jp.coeff(mi.i, mi.j, mi.k) == doctest::Approx(conv).epsilon(1e-13));
    }
  }
}

TEST_CASE("polynomials of degree 3 are exact") {
  // (x - 1/2)^2 (p + 1/3) - 3 x y p + y/7 at (1/2, 0, -1/3): every partial by hand
  const Expr e = parse("(x - 1/2)^2*(p + 1/3) - 3*x*y*p + y/7");
  const Jet3 j = eval_jet<3>(e, {}, {0.5, 0.0, -1.0 / 3.0});
  CHECK(std::abs(j.value()) < 1e-12);
  CHECK(std::abs(j.partial(0, 1, 0) - (-3 * 0.5 * (-1.0 / 3.0) + 1.0 / 7.0)) < 1e-12);
  CHECK(std::abs(j.partial(2, 0, 1) - 2.0) < 1e-12);
  CHECK(std::abs(j.partial(1, 1, 1) + 3.0) < 1e-12);
  CHECK(std::abs(j.partial(0, 1, 1) + 1.5) < 1e-12);
  CHECK(std::abs(j.partial(1, 1, 0) - 1.0) < 1e-12);
  CHECK(std::abs(j.partial(2, 0, 0)) < 1e-12);
  CHECK(std::abs(j.partial(3, 0, 0)) < 1e-12);
  CHECK(std::abs(j.partial(0, 0, 3)) < 1e-12);
}

TEST_CASE("non-finite coefficients are rejected") {
  CHECK_THROWS_AS(eval_jet<3>(parse("1/x"), {}, {0.0, 0.0, 0.0}), DomainError);
}

}

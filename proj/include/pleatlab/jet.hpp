#pragma once

// Truncated multivariate Taylor arithmetic in the three variables (x, y, p).
//
// A TaylorJet<N> stores the Taylor coefficients of a function at a center up
// to total degree N:  coeff(i,j,k) = d^{i+j+k}F / dx^i dy^j dp^k / (i! j! k!).
// Arithmetic on jets is exact truncated power-series arithmetic, so every
// partial of order <= N comes out to machine precision.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pleatlab/errors.hpp"

namespace pleatlab {

struct MultiIndex {
  int i = 0;  // x
  int j = 0;  // y
  int k = 0;  // p
  constexpr int degree() const { return i + j + k; }
};

namespace detail {

constexpr int jet_size(int order) { return (order + 1) * (order + 2) * (order + 3) / 6; }

constexpr int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

template <int Order>
constexpr std::array<MultiIndex, jet_size(Order)> make_indices() {
  std::array<MultiIndex, jet_size(Order)> out{};
  int n = 0;
  for (int d = 0; d <= Order; ++d)
    for (int i = d; i >= 0; --i)
      for (int j = d - i; j >= 0; --j) out[n++] = MultiIndex{i, j, d - i - j};
  return out;
}

}  // namespace detail

template <int Order>
class TaylorJet {
  static_assert(Order >= 0 && Order <= 6);

 public:
  static constexpr int kOrder = Order;
  static constexpr int kSize = detail::jet_size(Order);
  static constexpr std::array<MultiIndex, kSize> kIndices = detail::make_indices<Order>();

  TaylorJet() { c_.fill(0.0); }

  static TaylorJet constant(double v) {
    TaylorJet j;
    j.c_[0] = v;
    return j;
  }

  /// Jet of the coordinate function `var` (0 = x, 1 = y, 2 = p) around `value`.
  static TaylorJet variable(int var, double value) {
    TaylorJet j = constant(value);
    if constexpr (Order >= 1) j.c_[1 + var] = 1.0;
    return j;
  }

  static constexpr int index_of(int i, int j, int k) {
    for (int n = 0; n < kSize; ++n)
      if (kIndices[n].i == i && kIndices[n].j == j && kIndices[n].k == k) return n;
    return -1;
  }

  double value() const { return c_[0]; }
  /// Coefficients above the truncation order read as zero.
  double coeff(int i, int j, int k) const {
    const int n = index_of(i, j, k);
    return n < 0 ? 0.0 : c_[n];
  }
  double& coeff(int i, int j, int k) {
    const int n = index_of(i, j, k);
    if (n < 0) throw std::out_of_range("multi-index above jet order");
    return c_[n];
  }

  /// The partial derivative d^{i+j+k}F / dx^i dy^j dp^k at the center.
  double partial(int i, int j, int k) const {
    return coeff(i, j, k) * detail::factorial(i) * detail::factorial(j) * detail::factorial(k);
  }

  const std::array<double, kSize>& coefficients() const { return c_; }
  std::array<double, kSize>& coefficients() { return c_; }

  bool all_finite() const {
    for (double v : c_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  TaylorJet& operator+=(const TaylorJet& o) {
    for (int n = 0; n < kSize; ++n) c_[n] += o.c_[n];
    return *this;
  }
  TaylorJet& operator-=(const TaylorJet& o) {
    for (int n = 0; n < kSize; ++n) c_[n] -= o.c_[n];
    return *this;
  }
  TaylorJet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  TaylorJet& operator/=(double s) {
    for (double& v : c_) v /= s;
    return *this;
  }

  friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
  friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
  friend TaylorJet operator-(TaylorJet a) { return a *= -1.0; }
  friend TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
  friend TaylorJet operator*(double s, TaylorJet a) { return a *= s; }
  friend TaylorJet operator/(TaylorJet a, double s) { return a /= s; }

  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    TaylorJet out;
    for (const auto& [ia, ib, ic] : product_table()) out.c_[ic] += a.c_[ia] * b.c_[ib];
    return out;
  }

  friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) { return a * reciprocal(b); }

  friend bool operator==(const TaylorJet&, const TaylorJet&) = default;

 private:
  struct Triple {
    int a, b, c;
  };

  // All (a, b) coefficient pairs whose product lands at a degree <= Order.
  static const std::vector<Triple>& product_table() {
    static const std::vector<Triple> table = [] {
      std::vector<Triple> t;
      for (int a = 0; a < kSize; ++a)
        for (int b = 0; b < kSize; ++b) {
          const auto& ma = kIndices[a];
          const auto& mb = kIndices[b];
          if (ma.degree() + mb.degree() > Order) continue;
          t.push_back({a, b, index_of(ma.i + mb.i, ma.j + mb.j, ma.k + mb.k)});
        }
      return t;
    }();
    return table;
  }

  std::array<double, kSize> c_;
};

using Jet1 = TaylorJet<1>;
using Jet2 = TaylorJet<2>;
using Jet3 = TaylorJet<3>;

/// f(a0 + h) = sum_n derivs[n] / n! * h^n for a scalar function f with the
/// given derivatives at a0 = a.value().
template <int Order>
TaylorJet<Order> compose(const TaylorJet<Order>& a, const std::array<double, Order + 1>& derivs) {
  TaylorJet<Order> h = a;
  h.coefficients()[0] = 0.0;
  TaylorJet<Order> out = TaylorJet<Order>::constant(derivs[0]);
  TaylorJet<Order> power = TaylorJet<Order>::constant(1.0);
  double fact = 1.0;
  for (int n = 1; n <= Order; ++n) {
    power = power * h;
    fact *= n;
    out += power * (derivs[n] / fact);
  }
  return out;
}

template <int Order>
TaylorJet<Order> reciprocal(const TaylorJet<Order>& a) {
  const double a0 = a.value();
  if (a0 == 0.0 || !std::isfinite(a0)) throw DomainError("division by zero at jet center");
  std::array<double, Order + 1> d{};
  // d^n/da^n (1/a) = (-1)^n n! / a^{n+1}
  double term = 1.0 / a0;
  for (int n = 0; n <= Order; ++n) {
    d[n] = term;
    term *= -(n + 1) / a0;
  }
  return compose(a, d);
}

template <int Order>
TaylorJet<Order> sin(const TaylorJet<Order>& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  std::array<double, Order + 1> d{};
  const double cycle[4] = {s, c, -s, -c};
  for (int n = 0; n <= Order; ++n) d[n] = cycle[n % 4];
  return compose(a, d);
}

template <int Order>
TaylorJet<Order> cos(const TaylorJet<Order>& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  std::array<double, Order + 1> d{};
  const double cycle[4] = {c, -s, -c, s};
  for (int n = 0; n <= Order; ++n) d[n] = cycle[n % 4];
  return compose(a, d);
}

template <int Order>
TaylorJet<Order> exp(const TaylorJet<Order>& a) {
  std::array<double, Order + 1> d{};
  d.fill(std::exp(a.value()));
  return compose(a, d);
}

template <int Order>
TaylorJet<Order> log(const TaylorJet<Order>& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("ln of a non-positive value");
  std::array<double, Order + 1> d{};
  d[0] = std::log(a0);
  // d^n/da^n ln a = (-1)^{n-1} (n-1)! / a^n
  double term = 1.0 / a0;
  for (int n = 1; n <= Order; ++n) {
    d[n] = term;
    term *= -n / a0;
  }
  return compose(a, d);
}

template <int Order>
TaylorJet<Order> ipow(const TaylorJet<Order>& base, int exponent) {
  if (exponent < 0) return reciprocal(ipow(base, -exponent));
  TaylorJet<Order> result = TaylorJet<Order>::constant(1.0);
  TaylorJet<Order> b = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1u) result = result * b;
    if (e > 1) b = b * b;
  }
  return result;
}

/// Convenience accessors named after the partials used throughout the project.
template <int Order>
struct Partials {
  explicit Partials(TaylorJet<Order> j) : jet(std::move(j)) {}
  double F() const { return jet.value(); }
  double Fx() const { return jet.partial(1, 0, 0); }
  double Fy() const { return jet.partial(0, 1, 0); }
  double Fp() const { return jet.partial(0, 0, 1); }
  double Fxx() const { return jet.partial(2, 0, 0); }
  double Fxy() const { return jet.partial(1, 1, 0); }
  double Fxp() const { return jet.partial(1, 0, 1); }
  double Fyy() const { return jet.partial(0, 2, 0); }
  double Fyp() const { return jet.partial(0, 1, 1); }
  double Fpp() const { return jet.partial(0, 0, 2); }
  double Fppp() const { return jet.partial(0, 0, 3); }
  TaylorJet<Order> jet;
};

}  // namespace pleatlab

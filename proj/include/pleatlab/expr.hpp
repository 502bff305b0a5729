#pragma once

// Expressions F(x, y, p) over a small grammar:
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? atom ("^" integer)?
//   atom   := number | ident | func "(" expr ")" | "(" expr ")"
//   func   := "sin" | "cos" | "exp" | "ln"
//
// Identifiers other than x, y, p are parameters. Exponents are integers; a
// negative exponent needs a base that does not depend on x, y or p.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "pleatlab/errors.hpp"
#include "pleatlab/jet.hpp"

namespace pleatlab {

enum class Variable { X = 0, Y = 1, P = 2 };
enum class UnaryOp { Neg, Sin, Cos, Exp, Ln };
enum class BinaryOp { Add, Sub, Mul, Div };

using Bindings = std::map<std::string, double, std::less<>>;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct ConstantNode {
  double value;
};
struct VariableNode {
  Variable var;
};
struct ParameterNode {
  std::string name;
};
struct UnaryNode {
  UnaryOp op;
  NodePtr arg;
};
struct BinaryNode {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct PowerNode {
  NodePtr base;
  int exponent;
};

struct Node {
  std::variant<ConstantNode, VariableNode, ParameterNode, UnaryNode, BinaryNode, PowerNode> data;
};

/// Immutable parsed expression. Cheap to copy; safe to share across threads.
class Expr {
 public:
  explicit Expr(NodePtr root);

  const Node& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }

  /// Parameter names referenced anywhere in the tree.
  std::set<std::string> parameters() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

/// Parse `source`. When `known_parameters` is given, any other identifier is
/// rejected with ParseError::Kind::UnknownIdentifier.
Expr parse(std::string_view source, const std::set<std::string>* known_parameters = nullptr);

/// Fully parenthesized text that parses back to an equal tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Node& a, const Node& b);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double reciprocal(double a) {
  if (a == 0.0) throw DomainError("division by zero");
  return 1.0 / a;
}
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }
inline double exp(double a) { return std::exp(a); }
inline double log(double a) {
  if (!(a > 0.0)) throw DomainError("ln of a non-positive value");
  return std::log(a);
}
inline double ipow(double a, int n) {
  if (n < 0) return reciprocal(std::pow(a, -n));
  return std::pow(a, n);
}

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double constant(double v) { return v; }
};

template <int Order>
struct ScalarTraits<TaylorJet<Order>> {
  static TaylorJet<Order> constant(double v) { return TaylorJet<Order>::constant(v); }
};

template <typename T>
T evaluate_node(const Node& node, const Bindings& bindings, const T (&vars)[3]) {
  using Traits = ScalarTraits<T>;
  using pleatlab::cos;
  using pleatlab::exp;
  using pleatlab::ipow;
  using pleatlab::log;
  using pleatlab::reciprocal;
  using pleatlab::sin;
  using detail::cos;
  using detail::exp;
  using detail::ipow;
  using detail::log;
  using detail::reciprocal;
  using detail::sin;

  return std::visit(
      [&](const auto& n) -> T {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstantNode>) {
          return Traits::constant(n.value);
        } else if constexpr (std::is_same_v<N, VariableNode>) {
          return vars[static_cast<int>(n.var)];
        } else if constexpr (std::is_same_v<N, ParameterNode>) {
          auto it = bindings.find(n.name);
          if (it == bindings.end()) throw UnboundParameter(n.name);
          return Traits::constant(it->second);
        } else if constexpr (std::is_same_v<N, UnaryNode>) {
          T a = evaluate_node<T>(*n.arg, bindings, vars);
          switch (n.op) {
            case UnaryOp::Neg: return a * -1.0;
            case UnaryOp::Sin: return sin(a);
            case UnaryOp::Cos: return cos(a);
            case UnaryOp::Exp: return exp(a);
            case UnaryOp::Ln: return log(a);
          }
          throw Error("bad unary op");
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          T a = evaluate_node<T>(*n.lhs, bindings, vars);
          T b = evaluate_node<T>(*n.rhs, bindings, vars);
          switch (n.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div: return a * reciprocal(b);
          }
          throw Error("bad binary op");
        } else {
          return ipow(evaluate_node<T>(*n.base, bindings, vars), n.exponent);
        }
      },
      node.data);
}

}  // namespace detail

struct Point3 {
  double x = 0.0, y = 0.0, p = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

double evaluate(const Expr& e, const Bindings& bindings, const Point3& at);

/// Taylor jet of `e` at `center`.
template <int Order = 3>
TaylorJet<Order> eval_jet(const Expr& e, const Bindings& bindings, const Point3& center) {
  using J = TaylorJet<Order>;
  const J vars[3] = {J::variable(0, center.x), J::variable(1, center.y), J::variable(2, center.p)};
  J out = detail::evaluate_node<J>(e.root(), bindings, vars);
  if (!out.all_finite()) throw DomainError("non-finite jet coefficient");
  return out;
}

/// Jet of the composition F(x(X,Y,P), y(X,Y,P), p(X,Y,P)) where the three
/// substitutions are themselves jets in the new variables.
template <int Order>
TaylorJet<Order> eval_jet_substituted(const Expr& e, const Bindings& bindings,
                                      const TaylorJet<Order>& x, const TaylorJet<Order>& y,
                                      const TaylorJet<Order>& p) {
  const TaylorJet<Order> vars[3] = {x, y, p};
  TaylorJet<Order> out = detail::evaluate_node<TaylorJet<Order>>(e.root(), bindings, vars);
  if (!out.all_finite()) throw DomainError("non-finite jet coefficient");
  return out;
}

}  // namespace pleatlab

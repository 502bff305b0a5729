#include "pleatlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <vector>

namespace pleatlab {

Expr::Expr(NodePtr root) : root_(std::move(root)) {
  if (!root_) throw Error("empty expression");
}

namespace {

void collect_parameters(const Node& n, std::set<std::string>& out) {
  std::visit(
      [&](const auto& v) {
        using N = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<N, ParameterNode>) {
          out.insert(v.name);
        } else if constexpr (std::is_same_v<N, UnaryNode>) {
          collect_parameters(*v.arg, out);
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          collect_parameters(*v.lhs, out);
          collect_parameters(*v.rhs, out);
        } else if constexpr (std::is_same_v<N, PowerNode>) {
          collect_parameters(*v.base, out);
        }
      },
      n.data);
}

bool depends_on_variables(const Node& n) {
  return std::visit(
      [](const auto& v) -> bool {
        using N = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<N, VariableNode>) return true;
        if constexpr (std::is_same_v<N, UnaryNode>) return depends_on_variables(*v.arg);
        if constexpr (std::is_same_v<N, BinaryNode>)
          return depends_on_variables(*v.lhs) || depends_on_variables(*v.rhs);
        if constexpr (std::is_same_v<N, PowerNode>) return depends_on_variables(*v.base);
        return false;
      },
      n.data);
}

NodePtr make(auto data) { return std::make_shared<const Node>(Node{std::move(data)}); }

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {Tok::Ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start, src_.substr(start, 1)};
      case '-': return {Tok::Minus, start, src_.substr(start, 1)};
      case '*': return {Tok::Star, start, src_.substr(start, 1)};
      case '/': return {Tok::Slash, start, src_.substr(start, 1)};
      case '^': return {Tok::Caret, start, src_.substr(start, 1)};
      case '(': return {Tok::LParen, start, src_.substr(start, 1)};
      case ')': return {Tok::RParen, start, src_.substr(start, 1)};
      default: break;
    }
    throw ParseError(ParseError::Kind::Syntax, start, {},
                     std::string("unexpected character '") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(ParseError::Kind::Syntax, start, {"digit"}, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // "2e" is the number 2 followed by identifier e
    }
    Token t{Tok::Number, start, src_.substr(start, pos_ - start)};
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw ParseError(ParseError::Kind::Syntax, start, {"number"}, "malformed number");
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser

class Parser {
 public:
  Parser(std::string_view src, const std::set<std::string>* known) : lex_(src), known_(known) {
    advance();
  }

  NodePtr parse_all() {
    NodePtr e = expr();
    if (cur_.kind != Tok::End) fail({"'+'", "'-'", "'*'", "'/'", "end of input"});
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "syntax error: expected one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    msg += "}";
    msg += cur_.kind == Tok::End ? " but reached end of input"
                                 : " but found '" + std::string(cur_.text) + "'";
    throw ParseError(ParseError::Kind::Syntax, cur_.offset, std::move(expected), msg);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const BinaryOp op = cur_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = make(BinaryNode{op, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const BinaryOp op = cur_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      lhs = make(BinaryNode{op, lhs, factor()});
    }
    return lhs;
  }

  NodePtr factor() {
    bool negate = false;
    if (cur_.kind == Tok::Minus) {
      negate = true;
      advance();
    }
    NodePtr base = atom();
    if (cur_.kind == Tok::Caret) {
      advance();
      base = make(PowerNode{base, exponent(*base)});
    }
    return negate ? make(UnaryNode{UnaryOp::Neg, base}) : base;
  }

  int exponent(const Node& base) {
    const std::size_t at = cur_.offset;
    bool negative = false;
    if (cur_.kind == Tok::Minus) {
      negative = true;
      advance();
    }
    if (cur_.kind != Tok::Number) fail({"integer"});
    const double v = cur_.number;
    if (v != std::floor(v) || v > 1e6)
      throw ParseError(ParseError::Kind::NonIntegerExponent, cur_.offset, {"integer"},
                       "non-integer exponent '" + std::string(cur_.text) + "'");
    advance();
    int n = static_cast<int>(v);
    if (negative) {
      if (depends_on_variables(base))
        throw ParseError(ParseError::Kind::NegativeExponent, at, {"non-negative integer"},
                         "negative exponent on a base that depends on x, y or p");
      n = -n;
    }
    return n;
  }

  NodePtr atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        NodePtr n = make(ConstantNode{cur_.number});
        advance();
        return n;
      }
      case Tok::LParen: {
        advance();
        NodePtr inner = expr();
        if (cur_.kind != Tok::RParen) fail({"')'", "'+'", "'-'", "'*'", "'/'"});
        advance();
        return inner;
      }
      case Tok::Ident: return identifier();
      default: fail({"number", "identifier", "'('"});
    }
  }

  NodePtr identifier() {
    const Token id = cur_;
    advance();
    static const std::map<std::string_view, UnaryOp> kFuncs = {
        {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos}, {"exp", UnaryOp::Exp}, {"ln", UnaryOp::Ln}};
    if (auto f = kFuncs.find(id.text); f != kFuncs.end()) {
      if (cur_.kind != Tok::LParen) fail({"'('"});
      advance();
      NodePtr arg = expr();
      if (cur_.kind != Tok::RParen) fail({"')'"});
      advance();
      return make(UnaryNode{f->second, arg});
    }
    if (cur_.kind == Tok::LParen)
      throw ParseError(ParseError::Kind::UnknownIdentifier, id.offset, {"sin", "cos", "exp", "ln"},
                       "unknown function '" + std::string(id.text) + "'");
    if (id.text == "x") return make(VariableNode{Variable::X});
    if (id.text == "y") return make(VariableNode{Variable::Y});
    if (id.text == "p") return make(VariableNode{Variable::P});
    std::string name(id.text);
    if (known_ && !known_->count(name))
      throw ParseError(ParseError::Kind::UnknownIdentifier, id.offset, {"x", "y", "p"},
                       "unknown identifier '" + name + "'");
    return make(ParameterNode{std::move(name)});
  }

  Lexer lex_;
  const std::set<std::string>* known_;
  Token cur_{Tok::End, 0, {}};
};

// ---------------------------------------------------------------------------
// Printer

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_atomic(const Node& n) {
  return std::holds_alternative<ConstantNode>(n.data) ||
         std::holds_alternative<VariableNode>(n.data) ||
         std::holds_alternative<ParameterNode>(n.data) ||
         (std::holds_alternative<UnaryNode>(n.data) &&
          std::get<UnaryNode>(n.data).op != UnaryOp::Neg);
}

void print(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstantNode>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<N, VariableNode>) {
          out += "xyp"[static_cast<int>(n.var)];
        } else if constexpr (std::is_same_v<N, ParameterNode>) {
          out += n.name;
        } else if constexpr (std::is_same_v<N, UnaryNode>) {
          static const char* kNames[] = {"-", "sin", "cos", "exp", "ln"};
          if (n.op == UnaryOp::Neg) {
            out += "(-";
            if (is_atomic(*n.arg) || std::holds_alternative<PowerNode>(n.arg->data)) {
              print(*n.arg, out);
            } else {
              out += '(';
              print(*n.arg, out);
              out += ')';
            }
            out += ')';
          } else {
            out += kNames[static_cast<int>(n.op)];
            out += '(';
            print(*n.arg, out);
            out += ')';
          }
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          static const char kOps[] = {'+', '-', '*', '/'};
          out += '(';
          print(*n.lhs, out);
          out += ' ';
          out += kOps[static_cast<int>(n.op)];
          out += ' ';
          print(*n.rhs, out);
          out += ')';
        } else {
          if (is_atomic(*n.base) && !std::holds_alternative<ConstantNode>(n.base->data)) {
            print(*n.base, out);
          } else {
            out += '(';
            print(*n.base, out);
            out += ')';
          }
          out += '^';
          out += std::to_string(n.exponent);
        }
      },
      node.data);
}

}  // namespace

std::set<std::string> Expr::parameters() const {
  std::set<std::string> out;
  collect_parameters(*root_, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const auto& y = std::get<N>(b.data);
        if constexpr (std::is_same_v<N, ConstantNode>) return x.value == y.value;
        if constexpr (std::is_same_v<N, VariableNode>) return x.var == y.var;
        if constexpr (std::is_same_v<N, ParameterNode>) return x.name == y.name;
        if constexpr (std::is_same_v<N, UnaryNode>)
          return x.op == y.op && structurally_equal(*x.arg, *y.arg);
        if constexpr (std::is_same_v<N, BinaryNode>)
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        if constexpr (std::is_same_v<N, PowerNode>)
          return x.exponent == y.exponent && structurally_equal(*x.base, *y.base);
      },
      a.data);
}

bool operator==(const Expr& a, const Expr& b) { return structurally_equal(a.root(), b.root()); }

Expr parse(std::string_view source, const std::set<std::string>* known_parameters) {
  Parser parser(source, known_parameters);
  return Expr(parser.parse_all());
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e.root(), out);
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make(BinaryNode{BinaryOp::Add, a.root_ptr(), b.root_ptr()}));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make(BinaryNode{BinaryOp::Sub, a.root_ptr(), b.root_ptr()}));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make(BinaryNode{BinaryOp::Mul, a.root_ptr(), b.root_ptr()}));
}

double evaluate(const Expr& e, const Bindings& bindings, const Point3& at) {
  const double vars[3] = {at.x, at.y, at.p};
  const double v = detail::evaluate_node<double>(e.root(), bindings, vars);
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

}  // namespace pleatlab

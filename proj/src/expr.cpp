#include "r13fem/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <variant>
#include <vector>

#include "r13fem/error.hpp"

namespace r13 {
namespace detail {

enum class Func { sin, cos, sqrt, exp, abs, atan2 };

struct ExprNode {
  struct Number { double value; };
  struct Variable { char name; };  // 'x', 'y'
  struct Unary { char op; std::shared_ptr<const ExprNode> arg; };
  struct Binary { char op; std::shared_ptr<const ExprNode> lhs, rhs; };
  struct Call { Func func; std::vector<std::shared_ptr<const ExprNode>> args; };
  std::variant<Number, Variable, Unary, Binary, Call> node;
};

}  // namespace detail

namespace {

using detail::ExprNode;
using detail::Func;
using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode::Number n) { return std::make_shared<const ExprNode>(ExprNode{n}); }

struct FuncInfo {
  std::string_view name;
  Func func;
  int arity;
};

constexpr FuncInfo kFunctions[] = {
    {"sin", Func::sin, 1},   {"cos", Func::cos, 1}, {"sqrt", Func::sqrt, 1},
    {"exp", Func::exp, 1},   {"abs", Func::abs, 1}, {"atan2", Func::atan2, 2},
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        char op = text_[pos_++];
        NodePtr rhs = term();
        lhs = std::make_shared<const ExprNode>(ExprNode{ExprNode::Binary{op, lhs, rhs}});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '*' || text_[pos_] == '/')) {
        char op = text_[pos_++];
        NodePtr rhs = unary();
        lhs = std::make_shared<const ExprNode>(ExprNode{ExprNode::Binary{op, lhs, rhs}});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      char op = text_[pos_++];
      NodePtr arg = unary();
      return std::make_shared<const ExprNode>(ExprNode{ExprNode::Unary{op, arg}});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      NodePtr exponent = unary();
      return std::make_shared<const ExprNode>(ExprNode{ExprNode::Binary{'^', base, exponent}});
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return make(ExprNode::Number{value});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x" || name == "y") {
      return std::make_shared<const ExprNode>(ExprNode{ExprNode::Variable{name[0]}});
    }
    if (name == "pi") return make(ExprNode::Number{std::numbers::pi});
    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      expect('(');
      std::vector<NodePtr> args;
      args.push_back(expression());
      while (accept(',')) args.push_back(expression());
      expect(')');
      if (static_cast<int>(args.size()) != f.arity) {
        throw ParseError(std::string(name) + " takes " + std::to_string(f.arity) + " argument(s)", start);
      }
      return std::make_shared<const ExprNode>(ExprNode{ExprNode::Call{f.func, std::move(args)}});
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double evaluate(const ExprNode& n, double x, double y) {
  struct Visitor {
    double x, y;
    double operator()(const ExprNode::Number& v) const { return v.value; }
    double operator()(const ExprNode::Variable& v) const { return v.name == 'x' ? x : y; }
    double operator()(const ExprNode::Unary& u) const {
      const double a = evaluate(*u.arg, x, y);
      return u.op == '-' ? -a : a;
    }
    double operator()(const ExprNode::Binary& b) const {
      const double l = evaluate(*b.lhs, x, y);
      const double r = evaluate(*b.rhs, x, y);
      switch (b.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/':
          if (r == 0.0) throw EvalError("division by zero");
          return l / r;
        default: return std::pow(l, r);
      }
    }
    double operator()(const ExprNode::Call& c) const {
      const double a = evaluate(*c.args[0], x, y);
      switch (c.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::sqrt: return std::sqrt(a);
        case Func::exp: return std::exp(a);
        case Func::abs: return std::abs(a);
        case Func::atan2: {
          const double b = evaluate(*c.args[1], x, y);
          if (a == 0.0 && b == 0.0) throw EvalError("atan2(0, 0) is undefined");
          return std::atan2(a, b);
        }
      }
      return 0.0;
    }
  };
  return std::visit(Visitor{x, y}, n.node);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep the token parseable as a single number: no sign, no inf/nan.
  return s;
}

void print(const ExprNode& n, std::string& out) {
  struct Visitor {
    std::string& out;
    void operator()(const ExprNode::Number& v) const {
      if (v.value < 0 || std::signbit(v.value)) {
        out += "(-" + format_number(-v.value) + ")";
      } else {
        out += format_number(v.value);
      }
    }
    void operator()(const ExprNode::Variable& v) const { out += v.name; }
    void operator()(const ExprNode::Unary& u) const {
      out += "(";
      out += u.op;
      print(*u.arg, out);
      out += ")";
    }
    void operator()(const ExprNode::Binary& b) const {
      out += "(";
      print(*b.lhs, out);
      out += ' ';
      out += b.op;
      out += ' ';
      print(*b.rhs, out);
      out += ")";
    }
    void operator()(const ExprNode::Call& c) const {
      for (const auto& f : kFunctions) {
        if (f.func == c.func) out += f.name;
      }
      out += "(";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ", ";
        print(*c.args[i], out);
      }
      out += ")";
    }
  };
  std::visit(Visitor{out}, n.node);
}

bool constant_tree(const ExprNode& n) {
  struct Visitor {
    bool operator()(const ExprNode::Number&) const { return true; }
    bool operator()(const ExprNode::Variable&) const { return false; }
    bool operator()(const ExprNode::Unary& u) const { return constant_tree(*u.arg); }
    bool operator()(const ExprNode::Binary& b) const { return constant_tree(*b.lhs) && constant_tree(*b.rhs); }
    bool operator()(const ExprNode::Call& c) const {
      for (const auto& a : c.args) {
        if (!constant_tree(*a)) return false;
      }
      return true;
    }
  };
  return std::visit(Visitor{}, n.node);
}

}  // namespace

Expr::Expr() : root_(make(ExprNode::Number{0.0})) {}

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

Expr Expr::constant(double value) { return Expr(make(ExprNode::Number{value})); }

double Expr::eval(double x, double y) const { return evaluate(*root_, x, y); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expr::is_constant() const { return constant_tree(*root_); }

}  // namespace r13

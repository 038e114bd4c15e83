#include "fracwave/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {

enum class Op {
  Num, Var, Pi,
  Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Tanh, Exp, Sech, Abs, Sqrt,
};

Op function_op(const std::string& name) {
  if (name == "sin") return Op::Sin;
  if (name == "cos") return Op::Cos;
  if (name == "tan") return Op::Tan;
  if (name == "tanh") return Op::Tanh;
  if (name == "exp") return Op::Exp;
  if (name == "sech") return Op::Sech;
  if (name == "abs") return Op::Abs;
  if (name == "sqrt") return Op::Sqrt;
  return Op::Num;  // sentinel: not a function
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Tanh: return "tanh";
    case Op::Exp: return "exp";
    case Op::Sech: return "sech";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

bool is_variable(const std::string& name) {
  return name == "x" || name == "y" || name == "z" || name == "t" ||
         name == "u";
}

}  // namespace

struct Expr::Node {
  Op op;
  double num = 0.0;
  std::string var;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_num(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Num;
  n->num = v;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr e = term();
    for (;;) {
      if (consume('+')) e = make_binary(Op::Add, e, term());
      else if (consume('-')) e = make_binary(Op::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (consume('*')) e = make_binary(Op::Mul, e, unary());
      else if (consume('/')) e = make_binary(Op::Div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (consume('-')) return make_unary(Op::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) {
      // right-associative; exponent may carry a unary minus
      NodePtr exp = consume('-') ? make_unary(Op::Neg, power()) : power();
      return make_binary(Op::Pow, base, exp);
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw SyntaxError("invalid number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make_num(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Pi;
      return n;
    }
    const Op fn = function_op(name);
    if (fn != Op::Num) {
      if (!consume('(')) throw SyntaxError("expected '(' after '" + name + "'", pos_);
      NodePtr arg = sum();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return make_unary(fn, arg);
    }
    if (is_variable(name)) {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Var;
      n->var = name;
      return n;
    }
    throw UnknownIdentifier("unknown identifier '" + name + "' (at offset " +
                            std::to_string(start) + ")");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, const std::map<std::string, double>& env) {
  switch (n.op) {
    case Op::Num: return n.num;
    case Op::Pi: return M_PI;
    case Op::Var: {
      auto it = env.find(n.var);
      if (it == env.end()) throw UnboundVariable("unbound variable '" + n.var + "'");
      return it->second;
    }
    case Op::Add: return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
    case Op::Sub: return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
    case Op::Mul: return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
    case Op::Div: {
      const double a = eval_node(*n.lhs, env);
      const double b = eval_node(*n.rhs, env);
      const double r = a / b;
      if (!std::isfinite(r)) throw DomainError("division yields non-finite value");
      return r;
    }
    case Op::Pow: {
      const double a = eval_node(*n.lhs, env);
      const double b = eval_node(*n.rhs, env);
      if (a < 0.0 && b != std::floor(b))
        throw DomainError("negative base with non-integer exponent");
      const double r = std::pow(a, b);
      if (!std::isfinite(r)) throw DomainError("power yields non-finite value");
      return r;
    }
    case Op::Neg: return -eval_node(*n.lhs, env);
    case Op::Sin: return std::sin(eval_node(*n.lhs, env));
    case Op::Cos: return std::cos(eval_node(*n.lhs, env));
    case Op::Tan: {
      const double r = std::tan(eval_node(*n.lhs, env));
      if (!std::isfinite(r)) throw DomainError("tan singularity");
      return r;
    }
    case Op::Tanh: return std::tanh(eval_node(*n.lhs, env));
    case Op::Exp: {
      const double r = std::exp(eval_node(*n.lhs, env));
      if (!std::isfinite(r)) throw DomainError("exp overflow");
      return r;
    }
    case Op::Sech: return 1.0 / std::cosh(eval_node(*n.lhs, env));
    case Op::Abs: return std::abs(eval_node(*n.lhs, env));
    case Op::Sqrt: {
      const double a = eval_node(*n.lhs, env);
      if (a < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(a);
    }
  }
  throw DomainError("corrupt expression node");
}

void print_node(const Expr::Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Num: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.num;
      os << tmp.str();
      return;
    }
    case Op::Pi: os << "pi"; return;
    case Op::Var: os << n.var; return;
    case Op::Neg:
      os << "(-";
      print_node(*n.lhs, os);
      os << ")";
      return;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow: {
      const char* sym = n.op == Op::Add ? "+" : n.op == Op::Sub ? "-"
                        : n.op == Op::Mul ? "*" : n.op == Op::Div ? "/" : "^";
      os << "(";
      print_node(*n.lhs, os);
      os << sym;
      print_node(*n.rhs, os);
      os << ")";
      return;
    }
    default:
      os << function_name(n.op) << "(";
      print_node(*n.lhs, os);
      os << ")";
      return;
  }
}

bool equal_node(const Expr::Node& a, const Expr::Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::Num) return a.num == b.num;
  if (a.op == Op::Var) return a.var == b.var;
  if (a.lhs && (!b.lhs || !equal_node(*a.lhs, *b.lhs))) return false;
  if (a.rhs && (!b.rhs || !equal_node(*a.rhs, *b.rhs))) return false;
  return (a.lhs == nullptr) == (b.lhs == nullptr) &&
         (a.rhs == nullptr) == (b.rhs == nullptr);
}

}  // namespace

double Expr::eval(const std::map<std::string, double>& bindings) const {
  const double r = eval_node(*node_, bindings);
  if (!std::isfinite(r)) throw DomainError("evaluation yields non-finite value");
  return r;
}

std::string Expr::print() const {
  std::ostringstream os;
  print_node(*node_, os);
  return os.str();
}

Expr parse(const std::string& text) {
  Parser p(text);
  return Expr(p.parse());
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return equal_node(*a.node_, *b.node_);
}

}  // namespace fwave

#ifndef FRACWAVE_EXPR_HPP
#define FRACWAVE_EXPR_HPP

#include <map>
#include <memory>
#include <string>

namespace fwave {

// Arithmetic expressions over variables x, y, z, t, u with the usual
// precedence (^ right-associative above unary minus above * / above + -).
// Supported functions: sin, cos, tan, tanh, exp, sech, abs, sqrt.
class Expr {
 public:
  struct Node;

  Expr() = default;

  double eval(const std::map<std::string, double>& bindings) const;
  std::string print() const;
  bool valid() const { return node_ != nullptr; }

  friend Expr parse(const std::string& text);
  friend bool structurally_equal(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse(const std::string& text);

// Structural equality of ASTs (used by the parse-print-parse property).
bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace fwave

#endif

#ifndef VBL_EXPR_HPP
#define VBL_EXPR_HPP

#include <memory>
#include <string>

#include "vbl/jet.hpp"

namespace vbl {

// Expression trees over the single variable "u".
//
// Grammar (whitespace-insensitive):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?          -- right-associative, exponent must
//                                            fold to a constant
//   atom   := number | 'u' | name '(' expr ')' | '(' expr ')'
//   name   := exp | ln | sqrt | sin | cos
//
// Precedence: ^  >  unary -  >  * /  >  + -.

enum class ExprKind {
  Constant,
  Variable,
  Negate,
  Add,
  Sub,
  Mul,
  Div,
  Pow,   // rhs restricted to a constant exponent
  Exp,
  Ln,
  Sqrt,
  Sin,
  Cos,
};

struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Constant
  std::unique_ptr<ExprNode> lhs;
  std::unique_ptr<ExprNode> rhs;
};

// Immutable after parse; evaluation is pure and re-entrant.
class ExprAst {
public:
  explicit ExprAst(std::unique_ptr<ExprNode> root) : root_(std::move(root)) {}
  const ExprNode& root() const { return *root_; }

private:
  std::unique_ptr<ExprNode> root_;
};

// Parses `source` or throws SyntaxError with the byte offset of the problem.
ExprAst parse_expression(const std::string& source);

// Evaluates the expression and its first three derivatives at u.
// Throws DomainError naming the offending subexpression and argument.
Jet3 eval_jet3(const ExprAst& ast, double u);

// Canonical fully-parenthesized-where-needed form; parse(print(ast)) yields a
// structurally identical tree.
std::string print_expression(const ExprAst& ast);

}  // namespace vbl

#endif

#include "vbl/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "vbl/errors.hpp"

namespace vbl {

namespace {

enum class TokKind { Number, Var, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokKind kind;
  double number = 0.0;
  std::string name;
  std::size_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = TokKind::End;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = TokKind::Plus; ++pos_; return;
      case '-': tok_.kind = TokKind::Minus; ++pos_; return;
      case '*': tok_.kind = TokKind::Star; ++pos_; return;
      case '/': tok_.kind = TokKind::Slash; ++pos_; return;
      case '^': tok_.kind = TokKind::Caret; ++pos_; return;
      case '(': tok_.kind = TokKind::LParen; ++pos_; return;
      case ')': tok_.kind = TokKind::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      tok_.number = std::strtod(begin, &end);
      if (end == begin) throw SyntaxError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      tok_.kind = TokKind::Number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      tok_.name = src_.substr(start, pos_ - start);
      tok_.kind = (tok_.name == "u") ? TokKind::Var : TokKind::Name;
      return;
    }
    throw SyntaxError(std::string("unknown token '") + c + "'", pos_);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr make_node(ExprKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_unique<ExprNode>();
  n->kind = ExprKind::Constant;
  n->value = v;
  return n;
}

ExprKind function_kind(const std::string& name, std::size_t offset) {
  if (name == "exp") return ExprKind::Exp;
  if (name == "ln") return ExprKind::Ln;
  if (name == "sqrt") return ExprKind::Sqrt;
  if (name == "sin") return ExprKind::Sin;
  if (name == "cos") return ExprKind::Cos;
  throw SyntaxError("unknown function '" + name + "'", offset);
}

// Folds a subtree of constants and negations; returns false if any other node
// appears. Used to validate exponents.
bool fold_constant(const ExprNode& n, double* out) {
  switch (n.kind) {
    case ExprKind::Constant: *out = n.value; return true;
    case ExprKind::Negate: {
      double v;
      if (!fold_constant(*n.lhs, &v)) return false;
      *out = -v;
      return true;
    }
    default: return false;
  }
}

class Parser {
public:
  explicit Parser(const std::string& src) : lex_(src) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    if (lex_.peek().kind != TokKind::End) throw SyntaxError("trailing input", lex_.peek().offset);
    return e;
  }

private:
  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      TokKind k = lex_.peek().kind;
      if (k == TokKind::Plus || k == TokKind::Minus) {
        lex_.take();
        NodePtr rhs = parse_term();
        lhs = make_node(k == TokKind::Plus ? ExprKind::Add : ExprKind::Sub, std::move(lhs),
                        std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (true) {
      TokKind k = lex_.peek().kind;
      if (k == TokKind::Star || k == TokKind::Slash) {
        lex_.take();
        NodePtr rhs = parse_factor();
        lhs = make_node(k == TokKind::Star ? ExprKind::Mul : ExprKind::Div, std::move(lhs),
                        std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (lex_.peek().kind == TokKind::Minus) {
      lex_.take();
      return make_node(ExprKind::Negate, parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (lex_.peek().kind != TokKind::Caret) return base;
    const std::size_t caret_off = lex_.take().offset;
    NodePtr expo = parse_factor();  // right-associative: u^2^3 = u^(2^3)
    double folded;
    if (!fold_constant(*expo, &folded)) {
      throw SyntaxError("exponent must be a constant", caret_off);
    }
    return make_node(ExprKind::Pow, std::move(base), make_const(folded));
  }

  NodePtr parse_atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case TokKind::Number: return make_const(t.number);
      case TokKind::Var: return make_node(ExprKind::Variable);
      case TokKind::Name: {
        ExprKind kind = function_kind(t.name, t.offset);
        expect(TokKind::LParen, "expected '(' after function name");
        NodePtr arg = parse_expr();
        expect(TokKind::RParen, "unbalanced parenthesis");
        return make_node(kind, std::move(arg));
      }
      case TokKind::LParen: {
        NodePtr e = parse_expr();
        expect(TokKind::RParen, "unbalanced parenthesis");
        return e;
      }
      default: throw SyntaxError("unexpected token", t.offset);
    }
  }

  void expect(TokKind kind, const char* msg) {
    if (lex_.peek().kind != kind) throw SyntaxError(msg, lex_.peek().offset);
    lex_.take();
  }

  Lexer lex_;
};

Jet3 eval_node(const ExprNode& n, const Jet3& u) {
  switch (n.kind) {
    case ExprKind::Constant: return Jet3::constant(n.value);
    case ExprKind::Variable: return u;
    case ExprKind::Negate: return -eval_node(*n.lhs, u);
    case ExprKind::Add: return eval_node(*n.lhs, u) + eval_node(*n.rhs, u);
    case ExprKind::Sub: return eval_node(*n.lhs, u) - eval_node(*n.rhs, u);
    case ExprKind::Mul: return eval_node(*n.lhs, u) * eval_node(*n.rhs, u);
    case ExprKind::Div: {
      Jet3 a = eval_node(*n.lhs, u);
      Jet3 b = eval_node(*n.rhs, u);
      if (b.v0 == 0.0) {
        throw DomainError("division by zero at u = " + std::to_string(u.v0));
      }
      return a / b;
    }
    case ExprKind::Pow: {
      Jet3 base = eval_node(*n.lhs, u);
      const double e = n.rhs->value;
      const double r = std::round(e);
      if (std::abs(e - r) < 1e-12 && std::abs(r) < 1e15) {
        if (base.v0 == 0.0 && r < 0) {
          throw DomainError("zero raised to a negative power at u = " + std::to_string(u.v0));
        }
        return vbl::pow(base, static_cast<long long>(r));
      }
      if (base.v0 <= 0.0) {
        throw DomainError("non-integer power of non-positive base at u = " +
                          std::to_string(u.v0));
      }
      return vbl::pow(base, e);
    }
    case ExprKind::Exp: return vbl::exp(eval_node(*n.lhs, u));
    case ExprKind::Ln: {
      Jet3 a = eval_node(*n.lhs, u);
      if (a.v0 <= 0.0) {
        throw DomainError("ln of non-positive argument at u = " + std::to_string(u.v0));
      }
      return vbl::log(a);
    }
    case ExprKind::Sqrt: {
      Jet3 a = eval_node(*n.lhs, u);
      if (a.v0 <= 0.0) {
        throw DomainError("sqrt of non-positive argument at u = " + std::to_string(u.v0));
      }
      return vbl::sqrt(a);
    }
    case ExprKind::Sin: return vbl::sin(eval_node(*n.lhs, u));
    case ExprKind::Cos: return vbl::cos(eval_node(*n.lhs, u));
  }
  throw DomainError("corrupt expression tree");
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;  // atoms and function calls never need parentheses
  }
}

void print_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  std::string s = tmp.str();
  if (!s.empty() && s[0] == '-') {
    os << "(" << s << ")";  // keep negative constants re-parseable as atoms
  } else {
    os << s;
  }
}

void print_node(std::ostream& os, const ExprNode& n, int parent_prec) {
  const int prec = precedence(n.kind);
  const bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (n.kind) {
    case ExprKind::Constant: print_number(os, n.value); break;
    case ExprKind::Variable: os << "u"; break;
    case ExprKind::Negate:
      os << "-";
      print_node(os, *n.lhs, prec + 1);
      break;
    case ExprKind::Add:
      print_node(os, *n.lhs, prec);
      os << " + ";
      print_node(os, *n.rhs, prec + 1);
      break;
    case ExprKind::Sub:
      print_node(os, *n.lhs, prec);
      os << " - ";
      print_node(os, *n.rhs, prec + 1);
      break;
    case ExprKind::Mul:
      print_node(os, *n.lhs, prec);
      os << "*";
      print_node(os, *n.rhs, prec + 1);
      break;
    case ExprKind::Div:
      print_node(os, *n.lhs, prec);
      os << "/";
      print_node(os, *n.rhs, prec + 1);
      break;
    case ExprKind::Pow:
      print_node(os, *n.lhs, prec + 1);
      os << "^";
      print_node(os, *n.rhs, prec);
      break;
    case ExprKind::Exp: os << "exp("; print_node(os, *n.lhs, 0); os << ")"; break;
    case ExprKind::Ln: os << "ln("; print_node(os, *n.lhs, 0); os << ")"; break;
    case ExprKind::Sqrt: os << "sqrt("; print_node(os, *n.lhs, 0); os << ")"; break;
    case ExprKind::Sin: os << "sin("; print_node(os, *n.lhs, 0); os << ")"; break;
    case ExprKind::Cos: os << "cos("; print_node(os, *n.lhs, 0); os << ")"; break;
  }
  if (paren) os << ")";
}

}  // namespace

ExprAst parse_expression(const std::string& source) {
  Parser p(source);
  return ExprAst(p.parse());
}

Jet3 eval_jet3(const ExprAst& ast, double u) { return eval_node(ast.root(), Jet3::variable(u)); }

std::string print_expression(const ExprAst& ast) {
  std::ostringstream os;
  print_node(os, ast.root(), 0);
  return os.str();
}

}  // namespace vbl

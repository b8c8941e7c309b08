#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kappa/jet.hpp"

namespace kappa {

/// AST of an analytic scalar expression in one complex variable `z`.
///
/// Grammar (documented in docs/grammar.md):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | atom ('^' intlit)?
///   atom   := numlit | 'i' | 'pi' | 'e' | 'z' | func '(' expr ')' | '(' expr ')'
/// with func in {exp, sin, cos, sqrt} and intlit a possibly negative integer.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  Number,    // real or pure-imaginary literal
  Constant,  // pi or e
  Variable,  // z
  Negate,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent
  Call,
};

enum class NamedConstant { Pi, E };
enum class Function { Exp, Sin, Cos, Sqrt };

struct Expr {
  ExprKind kind;
  Complex number{};                 // Number
  NamedConstant constant{};         // Constant
  int exponent = 0;                 // Pow
  Function function{};              // Call
  ExprPtr lhs, rhs;                 // children (rhs unused for unary nodes)
};

// Node builders (shared, immutable trees).
ExprPtr make_number(Complex value);
ExprPtr make_constant(NamedConstant c);
ExprPtr make_variable();
ExprPtr make_negate(ExprPtr e);
ExprPtr make_binary(ExprKind op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_call(Function f, ExprPtr arg);

bool structurally_equal(const Expr& a, const Expr& b);

/// Parses UTF-8 text into an AST. Throws ParseError with byte offset.
ExprPtr parse(std::string_view text);

/// Prints an AST in the grammar above; parse(print(e)) is structurally e.
std::string print(const Expr& e);

/// Evaluates the expression to a jet at base point `a`, order `K`.
/// Throws EvaluationError for division by a zero-valued subexpression,
/// sqrt of an exactly-zero value, or non-finite intermediates.
CJet eval_jet(const Expr& e, Complex a, int order);

/// A curve in CP^n given by n inhomogeneous component expressions.
struct CurveSpec {
  int n = 0;
  std::vector<ExprPtr> components;
};

/// Validates and builds a CurveSpec from component source strings.
CurveSpec make_curve(int n, const std::vector<std::string>& component_sources);

/// The homogeneous lifting (1, x_1(z), ..., x_n(z)) as n+1 jets at `a`.
std::vector<CJet> lift(const CurveSpec& spec, Complex a, int order);

}  // namespace kappa

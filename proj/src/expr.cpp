#include "kappa/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace kappa {

ExprPtr make_number(Complex value) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Number;
  e->number = value;
  return e;
}

ExprPtr make_constant(NamedConstant c) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Constant;
  e->constant = c;
  return e;
}

ExprPtr make_variable() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Variable;
  return e;
}

ExprPtr make_negate(ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Negate;
  e->lhs = std::move(child);
  return e;
}

ExprPtr make_binary(ExprKind op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

ExprPtr make_call(Function f, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->function = f;
  e->lhs = std::move(arg);
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number:
      return a.number == b.number;
    case ExprKind::Constant:
      return a.constant == b.constant;
    case ExprKind::Variable:
      return true;
    case ExprKind::Negate:
      return structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Pow:
      return a.exponent == b.exponent && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Call:
      return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser: single-token-lookahead recursive descent.

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(std::size_t at, const std::string& expected) {
    throw ParseError(at, expected);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(pos, std::string("expected ") + what);
  }

  ExprPtr parse_expr() {
    ExprPtr node = parse_term();
    for (;;) {
      if (accept('+'))
        node = make_binary(ExprKind::Add, node, parse_term());
      else if (accept('-'))
        node = make_binary(ExprKind::Sub, node, parse_term());
      else
        return node;
    }
  }

  ExprPtr parse_term() {
    ExprPtr node = parse_factor();
    for (;;) {
      if (accept('*'))
        node = make_binary(ExprKind::Mul, node, parse_factor());
      else if (accept('/'))
        node = make_binary(ExprKind::Div, node, parse_factor());
      else
        return node;
    }
  }

  ExprPtr parse_factor() {
    if (accept('-')) return make_negate(parse_factor());
    ExprPtr base = parse_atom();
    if (accept('^')) return make_pow(std::move(base), parse_int_literal());
    return base;
  }

  int parse_int_literal() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    std::size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits_start) fail(start, "expected integer exponent");
    int value = 0;
    auto result = std::from_chars(text.data() + start, text.data() + pos, value);
    if (result.ec != std::errc{}) fail(start, "integer exponent out of range");
    return value;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail(pos, "expected expression");
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expr();
      expect(')', "')'");
      return inner;
    }
    fail(pos, "expected number, constant, 'z', function call, or '('");
  }

  ExprPtr parse_number() {
    std::size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '.'))
      ++pos;
    // exponent part only when 'e'/'E' is followed by digits (else 'e' is Euler's
    // constant and the parse fails later on the missing operator).
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos + 1;
      if (mark < text.size() && (text[mark] == '+' || text[mark] == '-')) ++mark;
      if (mark < text.size() && std::isdigit(static_cast<unsigned char>(text[mark]))) {
        pos = mark;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      }
    }
    double value = 0;
    auto result = std::from_chars(text.data() + start, text.data() + pos, value);
    if (result.ec != std::errc{} || result.ptr != text.data() + pos)
      fail(start, "malformed numeric literal");
    if (!std::isfinite(value)) fail(start, "numeric literal overflows");
    if (pos < text.size() && text[pos] == 'i' && !is_name_char_at(pos + 1)) {
      ++pos;
      return make_number(Complex(0.0, value));
    }
    return make_number(Complex(value, 0.0));
  }

  bool is_name_char_at(std::size_t at) {
    return at < text.size() && (std::isalnum(static_cast<unsigned char>(text[at])) ||
                                text[at] == '_');
  }

  ExprPtr parse_identifier() {
    std::size_t start = pos;
    while (is_name_char_at(pos)) ++pos;
    std::string_view name = text.substr(start, pos - start);
    if (name == "z") return make_variable();
    if (name == "i") return make_number(Complex(0.0, 1.0));
    if (name == "pi") return make_constant(NamedConstant::Pi);
    if (name == "e") return make_constant(NamedConstant::E);
    Function f;
    if (name == "exp")
      f = Function::Exp;
    else if (name == "sin")
      f = Function::Sin;
    else if (name == "cos")
      f = Function::Cos;
    else if (name == "sqrt")
      f = Function::Sqrt;
    else
      fail(start, "unknown identifier '" + std::string(name) + "'");
    expect('(', "'(' after function name");
    ExprPtr arg = parse_expr();
    expect(')', "')'");
    return make_call(f, arg);
  }
};

}  // namespace

ExprPtr parse(std::string_view text) {
  Parser p{text};
  ExprPtr e = p.parse_expr();
  if (!p.eof()) p.fail(p.pos, "unexpected trailing input");
  return e;
}

// ---------------------------------------------------------------------------
// Printer: minimal parentheses, consistent with the grammar above.

namespace {

// Precedence levels: additive = 0, multiplicative = 1, unary = 2, power-base = 3.
int node_level(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 0;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 1;
    case ExprKind::Negate:
      return 2;
    case ExprKind::Pow:
      return 3;
    default:
      return 4;
  }
}

void format_double(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

void print_node(std::ostream& os, const Expr& e, int min_level) {
  const int level = node_level(e);
  const bool parens = level < min_level;
  if (parens) os << '(';
  switch (e.kind) {
    case ExprKind::Number:
      if (e.number.imag() == 0.0) {
        format_double(os, e.number.real());
      } else if (e.number.real() == 0.0 && e.number.imag() == 1.0) {
        os << 'i';
      } else if (e.number.real() == 0.0) {
        format_double(os, e.number.imag());
        os << 'i';
      } else {
        // General complex values have no literal form; print as a sum.
        os << '(';
        format_double(os, e.number.real());
        os << " + ";
        format_double(os, e.number.imag());
        os << "i)";
      }
      break;
    case ExprKind::Constant:
      os << (e.constant == NamedConstant::Pi ? "pi" : "e");
      break;
    case ExprKind::Variable:
      os << 'z';
      break;
    case ExprKind::Negate:
      os << '-';
      print_node(os, *e.lhs, 2);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
      print_node(os, *e.lhs, 0);
      os << (e.kind == ExprKind::Add ? " + " : " - ");
      print_node(os, *e.rhs, 1);  // left-associative: parenthesize rhs additives
      break;
    case ExprKind::Mul:
    case ExprKind::Div:
      print_node(os, *e.lhs, 1);
      os << (e.kind == ExprKind::Mul ? "*" : "/");
      print_node(os, *e.rhs, 2);
      break;
    case ExprKind::Pow:
      print_node(os, *e.lhs, 4);  // grammar allows only atoms as bases
      os << '^' << e.exponent;
      break;
    case ExprKind::Call:
      switch (e.function) {
        case Function::Exp: os << "exp"; break;
        case Function::Sin: os << "sin"; break;
        case Function::Cos: os << "cos"; break;
        case Function::Sqrt: os << "sqrt"; break;
      }
      os << '(';
      print_node(os, *e.lhs, 0);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  print_node(os, e, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation to jets.

namespace {

CJet eval_node(const Expr& e, Complex a, int order) {
  switch (e.kind) {
    case ExprKind::Number:
      return CJet::constant(e.number, a, order);
    case ExprKind::Constant:
      return CJet::constant(
          Complex(e.constant == NamedConstant::Pi ? std::numbers::pi : std::numbers::e, 0.0),
          a, order);
    case ExprKind::Variable:
      return CJet::variable(a, order);
    case ExprKind::Negate:
      return -eval_node(*e.lhs, a, order);
    case ExprKind::Add:
      return eval_node(*e.lhs, a, order) + eval_node(*e.rhs, a, order);
    case ExprKind::Sub:
      return eval_node(*e.lhs, a, order) - eval_node(*e.rhs, a, order);
    case ExprKind::Mul:
      return eval_node(*e.lhs, a, order) * eval_node(*e.rhs, a, order);
    case ExprKind::Div:
      return eval_node(*e.lhs, a, order) / eval_node(*e.rhs, a, order);
    case ExprKind::Pow:
      return pow(eval_node(*e.lhs, a, order), e.exponent);
    case ExprKind::Call: {
      CJet arg = eval_node(*e.lhs, a, order);
      switch (e.function) {
        case Function::Exp: return exp(arg);
        case Function::Sin: return sin(arg);
        case Function::Cos: return cos(arg);
        case Function::Sqrt: return sqrt(arg);
      }
    }
  }
  throw EvaluationError("malformed expression tree");
}

}  // namespace

CJet eval_jet(const Expr& e, Complex a, int order) {
  try {
    return eval_node(e, a, order);
  } catch (const DivisionByZeroJet& err) {
    throw EvaluationError(std::string("zero-valued subexpression at the point: ") + err.what());
  } catch (const NonFiniteValue& err) {
    throw EvaluationError(std::string("non-finite intermediate value: ") + err.what());
  }
}

CurveSpec make_curve(int n, const std::vector<std::string>& component_sources) {
  if (n < 1) throw InvalidInput("projective dimension n must be >= 1");
  if (static_cast<int>(component_sources.size()) != n)
    throw InvalidInput("curve needs exactly n = " + std::to_string(n) +
                       " components, got " + std::to_string(component_sources.size()));
  CurveSpec spec;
  spec.n = n;
  spec.components.reserve(component_sources.size());
  for (const std::string& src : component_sources) spec.components.push_back(parse(src));
  return spec;
}

std::vector<CJet> lift(const CurveSpec& spec, Complex a, int order) {
  std::vector<CJet> jets;
  jets.reserve(spec.n + 1);
  jets.push_back(CJet::constant(Complex(1.0, 0.0), a, order));
  for (int j = 0; j < spec.n; ++j) {
    try {
      jets.push_back(eval_jet(*spec.components[j], a, order));
    } catch (const EvaluationError& err) {
      throw EvaluationError("component " + std::to_string(j + 1) + ": " + err.what());
    }
  }
  return jets;
}

}  // namespace kappa

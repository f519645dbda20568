#include "gim/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "gim/errors.hpp"

namespace gim::expr {

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::sinh: return "sinh";
    case Func::cosh: return "cosh";
    case Func::tanh: return "tanh";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::atan: return "atan";
  }
  return "?";
}

namespace {

const std::map<std::string, Func, std::less<>> kFuncs = {
    {"sin", Func::sin},   {"cos", Func::cos},   {"tan", Func::tan},  {"sinh", Func::sinh},
    {"cosh", Func::cosh}, {"tanh", Func::tanh}, {"exp", Func::exp},  {"log", Func::log},
    {"sqrt", Func::sqrt}, {"atan", Func::atan}};

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& msg, const std::string& hint) {
    std::ostringstream os;
    os << "syntax error at offset " << at << ": " << msg;
    if (!hint.empty()) os << " (expected " << hint << ")";
    throw ParseError(at, os.str(), hint);
  }

  std::unique_ptr<Node> make(NodeKind kind, std::size_t at) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->offset = at;
    return n;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    while (true) {
      skip_ws();
      std::size_t at = pos;
      if (accept('+')) {
        auto n = make(NodeKind::add, at);
        n->lhs = std::move(lhs);
        n->rhs = term();
        lhs = std::move(n);
      } else if (accept('-')) {
        auto n = make(NodeKind::sub, at);
        n->lhs = std::move(lhs);
        n->rhs = term();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = factor();
    while (true) {
      skip_ws();
      std::size_t at = pos;
      if (accept('*')) {
        auto n = make(NodeKind::mul, at);
        n->lhs = std::move(lhs);
        n->rhs = factor();
        lhs = std::move(n);
      } else if (accept('/')) {
        auto n = make(NodeKind::div, at);
        n->lhs = std::move(lhs);
        n->rhs = factor();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  // '^' binds tighter than unary minus: -u1^2 parses as -(u1^2)
  std::unique_ptr<Node> factor() {
    skip_ws();
    std::size_t at = pos;
    if (accept('-')) {
      auto n = make(NodeKind::neg, at);
      n->lhs = factor();
      return n;
    }
    auto lhs = base();
    skip_ws();
    std::size_t pow_at = pos;
    if (accept('^')) {
      auto n = make(NodeKind::pow, pow_at);
      n->lhs = std::move(lhs);
      n->rhs = factor();  // right-assoc, allows a signed exponent
      return n;
    }
    return lhs;
  }

  std::unique_ptr<Node> base() {
    skip_ws();
    std::size_t at = pos;
    if (pos >= src.size()) fail(at, "unexpected end of input", "a value");
    char c = src[pos];

    if (accept('(')) {
      auto inner = expr();
      if (!accept(')')) fail(pos, "unbalanced parenthesis", "')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);

    if (std::isalpha(static_cast<unsigned char>(c))) return ident(at);

    fail(at, std::string("unexpected token '") + c + "'", "a number, variable, or function");
  }

  std::unique_ptr<Node> number(std::size_t at) {
    std::size_t end = pos;
    while (end < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[end])) || src[end] == '.'))
      ++end;
    if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
      if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
        ++e;
        while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
        end = e;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src.data() + at, src.data() + end, value);
    if (res.ec != std::errc() || res.ptr != src.data() + end)
      fail(at, "malformed number", "a numeric literal");
    pos = end;
    auto n = make(NodeKind::constant, at);
    n->value = value;
    return n;
  }

  std::unique_ptr<Node> ident(std::size_t at) {
    std::size_t end = pos;
    while (end < src.size() && (std::isalnum(static_cast<unsigned char>(src[end])))) ++end;
    std::string_view name = src.substr(at, end - at);
    pos = end;

    if (name == "pi") return make(NodeKind::pi_constant, at);

    if (name.size() >= 2 && name[0] == 'u') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        if (name.size() > 4) fail(at, "variable index too large", "u1, u2, ...");
        auto n = make(NodeKind::variable, at);
        n->var = std::stoi(std::string(name.substr(1)));
        if (n->var < 1) fail(at, "variable index must be at least 1", "u1, u2, ...");
        return n;
      }
    }

    auto it = kFuncs.find(name);
    if (it == kFuncs.end())
      fail(at, "unknown function name '" + std::string(name) + "'",
           "sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, atan, pi, or u<k>");
    if (!accept('(')) fail(pos, "function name must be followed by '('", "'('");
    auto n = make(NodeKind::call, at);
    n->func = it->second;
    n->lhs = expr();
    if (!accept(')')) fail(pos, "unbalanced parenthesis in function call", "')'");
    return n;
  }
};

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    default: return 5;
  }
}

void print_node(std::ostringstream& os, const Node& n, int parent_prec, bool rhs_of_binary) {
  int prec = precedence(n.kind);
  bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_binary);
  if (parens) os << '(';
  switch (n.kind) {
    case NodeKind::constant: {
      std::ostringstream num;
      num.precision(17);
      num << n.value;
      os << num.str();
      break;
    }
    case NodeKind::pi_constant: os << "pi"; break;
    case NodeKind::variable: os << 'u' << n.var; break;
    case NodeKind::neg:
      os << '-';
      print_node(os, *n.lhs, precedence(NodeKind::neg), true);
      break;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div:
    case NodeKind::pow: {
      const char* op = n.kind == NodeKind::add   ? "+"
                       : n.kind == NodeKind::sub ? "-"
                       : n.kind == NodeKind::mul ? "*"
                       : n.kind == NodeKind::div ? "/"
                                                 : "^";
      // ^ is right-assoc: parenthesize a pow lhs, not the rhs
      bool right_assoc = n.kind == NodeKind::pow;
      print_node(os, *n.lhs, prec, right_assoc);
      os << op;
      print_node(os, *n.rhs, prec, !right_assoc);
      break;
    }
    case NodeKind::call:
      os << func_name(n.func) << '(';
      print_node(os, *n.lhs, 0, false);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

bool has_variable(const Node& n) {
  if (n.kind == NodeKind::variable) return true;
  if (n.lhs && has_variable(*n.lhs)) return true;
  if (n.rhs && has_variable(*n.rhs)) return true;
  return false;
}

void validate_node(const Node& n, int nvars) {
  if (n.kind == NodeKind::variable && n.var > nvars) {
    std::ostringstream os;
    os << "variable u" << n.var << " out of range for " << nvars << " parameter(s)";
    throw ValidationError(os.str(), "u" + std::to_string(n.var));
  }
  if (n.lhs) validate_node(*n.lhs, nvars);
  if (n.rhs) validate_node(*n.rhs, nvars);
  if (n.kind == NodeKind::pow && has_variable(*n.rhs))
    throw ValidationError("exponent of ^ must be constant", "^");
}

Jet eval_node(const Node& n, std::span<const double> base,
              const std::shared_ptr<const JetLayout>& layout) {
  try {
    switch (n.kind) {
      case NodeKind::constant: return Jet::constant(layout, n.value);
      case NodeKind::pi_constant: return Jet::constant(layout, std::numbers::pi);
      case NodeKind::variable:
        if (n.var > static_cast<int>(base.size()))
          throw ValidationError("variable index out of range", "u" + std::to_string(n.var));
        return Jet::variable(layout, n.var - 1, base[n.var - 1]);
      case NodeKind::neg: return -eval_node(*n.lhs, base, layout);
      case NodeKind::add: return eval_node(*n.lhs, base, layout) + eval_node(*n.rhs, base, layout);
      case NodeKind::sub: return eval_node(*n.lhs, base, layout) - eval_node(*n.rhs, base, layout);
      case NodeKind::mul: return eval_node(*n.lhs, base, layout) * eval_node(*n.rhs, base, layout);
      case NodeKind::div: return eval_node(*n.lhs, base, layout) / eval_node(*n.rhs, base, layout);
      case NodeKind::pow: {
        // exponent is constant by validation; evaluate it as order-0
        double e = eval_node(*n.rhs, base, JetLayout::get(layout->nvars(), 0)).value();
        return pow(eval_node(*n.lhs, base, layout), e);
      }
      case NodeKind::call: {
        Jet arg = eval_node(*n.lhs, base, layout);
        switch (n.func) {
          case Func::sin: return sin(arg);
          case Func::cos: return cos(arg);
          case Func::tan: return tan(arg);
          case Func::sinh: return sinh(arg);
          case Func::cosh: return cosh(arg);
          case Func::tanh: return tanh(arg);
          case Func::exp: return exp(arg);
          case Func::log: return log(arg);
          case Func::sqrt: return sqrt(arg);
          case Func::atan: return atan(arg);
        }
        throw Error("unreachable");
      }
    }
    throw Error("unreachable");
  } catch (const DomainError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    // attach the subexpression location to bare evaluation errors
    std::ostringstream os;
    os << e.what() << " in subexpression '" << to_string(n) << "' at offset " << n.offset;
    throw DomainError(n.offset, os.str());
  }
}

}  // namespace

ExprAst parse(std::string_view source) {
  Parser p{source};
  ExprAst ast;
  ast.source = std::string(source);
  ast.root = p.expr();
  if (!p.at_end())
    p.fail(p.pos, std::string("unexpected trailing token '") + p.src[p.pos] + "'",
           "an operator or end of input");
  return ast;
}

std::string to_string(const Node& node) {
  std::ostringstream os;
  print_node(os, node, 0, false);
  return os.str();
}

std::string to_string(const ExprAst& ast) { return to_string(*ast.root); }

void validate(const ExprAst& ast, int nvars) { validate_node(*ast.root, nvars); }

Jet eval_jet(const ExprAst& ast, std::span<const double> base, int order) {
  if (order < 0 || order > 4) throw Error("jet order must be between 0 and 4");
  auto layout = JetLayout::get(static_cast<int>(base.size()), order);
  return eval_node(*ast.root, base, layout);
}

double eval_value(const ExprAst& ast, std::span<const double> base) {
  return eval_jet(ast, base, 0).value();
}

}  // namespace gim::expr

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "gim/jet.hpp"

namespace gim::expr {

enum class NodeKind { constant, pi_constant, variable, neg, add, sub, mul, div, pow, call };

enum class Func { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, atan };

const char* func_name(Func f);

struct Node {
  NodeKind kind;
  double value = 0.0;   // constant
  int var = 0;          // variable, 1-based
  Func func = Func::sin;
  std::unique_ptr<Node> lhs, rhs;  // neg/call use lhs only
  std::size_t offset = 0;          // byte offset into the source
};

struct ExprAst {
  std::unique_ptr<Node> root;
  std::string source;
};

/// Recursive-descent parse of the immersion DSL. Precedence, tightest first:
/// ^ (right-assoc), unary -, * /, + - (left-assoc).
ExprAst parse(std::string_view source);

std::string to_string(const ExprAst& ast);
std::string to_string(const Node& node);

/// Static checks against a variable budget: every u<i> has 1 <= i <= nvars,
/// and every ^ exponent is constant-evaluable (no variables under it).
void validate(const ExprAst& ast, int nvars);

/// Evaluate as a truncated Taylor jet at `base` (size nvars), order <= 4.
Jet eval_jet(const ExprAst& ast, std::span<const double> base, int order);

double eval_value(const ExprAst& ast, std::span<const double> base);

}  // namespace gim::expr

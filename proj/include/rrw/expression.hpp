#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rrw::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Min, Max, Abs };

/// Immutable expression tree over the single variable x.
struct Node {
  Kind kind;
  double value = 0.0;  // Constant
  int exponent = 0;    // Pow
  std::vector<NodePtr> args;
};

NodePtr constant(double v);
NodePtr variable();
NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs);
NodePtr unary(Kind kind, NodePtr arg);
NodePtr power(NodePtr base, int exponent);
NodePtr nary(Kind kind, std::vector<NodePtr> args);  // Min / Max

/// Value with first and second derivative with respect to x.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Parses the expression grammar (see docs/grammar.md):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' integer)?
///   primary := number | 'x' | '(' expr ')' | name | name '(' expr (',' expr)* ')'
///
/// Names: min, max, abs, and the builtin catalog const(c), linear(a), polya,
/// quartic(c), mix, family(expr, u). Builtin arguments other than the first
/// argument of family must be constant. Throws SyntaxError with the offending
/// character offset, or InvalidParameter for out-of-range builtin arguments.
NodePtr parse(std::string_view text);

/// Prints an expression that parses back to an identical tree. Literals use
/// 17 significant digits.
std::string print(const NodePtr& node);

/// True if the tree contains the variable x.
bool depends_on_x(const NodePtr& node);

/// Builds the tree for (1 + min(u * (2 * f - 1), 1)) / 2.
NodePtr family(const NodePtr& base, double u);

/// Flat postfix program compiled from a tree. Evaluation allocates nothing.
class Program {
 public:
  explicit Program(const NodePtr& root);

  double eval(double x) const;
  Jet eval_jet(double x) const;

  /// Set when the whole tree is a constant; lets hot loops skip evaluation.
  bool is_constant() const noexcept { return constant_; }
  double constant_value() const noexcept { return constant_value_; }

 private:
  struct Instr {
    Kind kind;
    double value;
    int arg;  // exponent for Pow, arity for Min/Max
  };

  template <typename T>
  T run(double x) const;

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  bool constant_ = false;
  double constant_value_ = 0.0;
};

}  // namespace rrw::expr

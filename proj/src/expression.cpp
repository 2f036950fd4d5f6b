#include "rrw/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include "rrw/error.hpp"

namespace rrw::expr {

NodePtr constant(double v) {
  return std::make_shared<const Node>(Node{Kind::Constant, v, 0, {}});
}

NodePtr variable() {
  return std::make_shared<const Node>(Node{Kind::Variable, 0.0, 0, {}});
}

NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(
      Node{kind, 0.0, 0, {std::move(lhs), std::move(rhs)}});
}

NodePtr unary(Kind kind, NodePtr arg) {
  return std::make_shared<const Node>(Node{kind, 0.0, 0, {std::move(arg)}});
}

NodePtr power(NodePtr base, int exponent) {
  return std::make_shared<const Node>(
      Node{Kind::Pow, 0.0, exponent, {std::move(base)}});
}

NodePtr nary(Kind kind, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{kind, 0.0, 0, std::move(args)});
}

bool depends_on_x(const NodePtr& node) {
  if (node->kind == Kind::Variable) return true;
  for (const auto& a : node->args)
    if (depends_on_x(a)) return true;
  return false;
}

NodePtr family(const NodePtr& base, double u) {
  // (1 + min(u * (2 * f - 1), 1)) / 2
  auto drift = binary(Kind::Sub, binary(Kind::Mul, constant(2.0), base),
                      constant(1.0));
  auto scaled = binary(Kind::Mul, constant(u), drift);
  auto clipped = nary(Kind::Min, {scaled, constant(1.0)});
  return binary(Kind::Div, binary(Kind::Add, constant(1.0), clipped),
                constant(2.0));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

NodePtr centered_power(double coeff, int exponent) {
  // coeff * (x - 0.5)^exponent
  return binary(Kind::Mul, constant(coeff),
                power(binary(Kind::Sub, variable(), constant(0.5)), exponent));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    auto node = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(pos_, what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    while (true) {
      if (accept('+')) lhs = binary(Kind::Add, lhs, parse_term());
      else if (accept('-')) lhs = binary(Kind::Sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    while (true) {
      if (accept('*')) lhs = binary(Kind::Mul, lhs, parse_unary());
      else if (accept('/')) lhs = binary(Kind::Div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return unary(Kind::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (!accept('^')) return base;
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int exponent = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
    if (ec != std::errc() || exponent > 64) {
      pos_ = start;
      fail("exponent out of range");
    }
    (void)ptr;
    if (paren) expect(')');
    return power(base, negative ? -exponent : exponent);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto is_digit = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    while (is_digit(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (is_digit(pos_)) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (is_digit(look)) {
        pos_ = look;
        while (is_digit(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return constant(value);
  }

  std::vector<NodePtr> parse_args() {
    std::vector<NodePtr> args;
    expect('(');
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    expect(')');
    return args;
  }

  double constant_arg(const NodePtr& arg, std::size_t at) const {
    if (depends_on_x(arg)) throw SyntaxError(at, "builtin argument must be constant");
    return Program(arg).eval(0.0);
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      auto inner = parse_expr();
      expect(')');
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected character '") + c + "'");

    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "x") return variable();
    if (name == "polya") return variable();
    if (name == "mix") {
      // 1/2 + 1.5 (x - 1/2)^2 - 8 (x - 1/2)^4
      return binary(Kind::Sub,
                    binary(Kind::Add, constant(0.5), centered_power(1.5, 2)),
                    centered_power(8.0, 4));
    }

    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    const std::size_t args_at = pos_;
    auto args = parse_args();
    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        throw SyntaxError(args_at, name + " takes " + std::to_string(n) + " argument(s)");
    };

    if (name == "min" || name == "max") {
      if (args.size() < 2) throw SyntaxError(args_at, name + " takes at least 2 arguments");
      return nary(name == "min" ? Kind::Min : Kind::Max, std::move(args));
    }
    if (name == "abs") {
      arity(1);
      return unary(Kind::Abs, args[0]);
    }
    if (name == "const") {
      arity(1);
      const double c0 = constant_arg(args[0], args_at);
      if (!(c0 > 0.0 && c0 <= 1.0))
        throw Error(ErrorKind::InvalidParameter, "const(c) needs 0 < c <= 1");
      return constant(c0);
    }
    if (name == "linear") {
      arity(1);
      const double a = constant_arg(args[0], args_at);
      if (!(std::abs(a) < 1.0))
        throw Error(ErrorKind::InvalidParameter, "linear(a) needs |a| < 1");
      return binary(Kind::Add, constant(0.5), centered_power(a, 1));
    }
    if (name == "quartic") {
      arity(1);
      const double c4 = constant_arg(args[0], args_at);
      if (!(c4 > 0.0 && c4 <= 8.0))
        throw Error(ErrorKind::InvalidParameter, "quartic(c) needs 0 < c <= 8");
      return binary(Kind::Add, constant(0.5), centered_power(c4, 4));
    }
    if (name == "family") {
      arity(2);
      const double u = constant_arg(args[1], args_at);
      if (!(u >= 0.0) || !std::isfinite(u))
        throw Error(ErrorKind::InvalidParameter, "family(f, u) needs u >= 0");
      return family(args[0], u);
    }
    pos_ = start;
    fail("unknown function '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Constant: return n.value < 0.0 ? 0 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_node(const Node& n);

std::string wrap(const NodePtr& child, int min_prec) {
  std::string s = print_node(*child);
  return precedence(*child) < min_prec ? "(" + s + ")" : s;
}

std::string print_node(const Node& n) {
  switch (n.kind) {
    case Kind::Constant: return format_number(n.value);
    case Kind::Variable: return "x";
    case Kind::Add: return wrap(n.args[0], 1) + " + " + wrap(n.args[1], 2);
    case Kind::Sub: return wrap(n.args[0], 1) + " - " + wrap(n.args[1], 2);
    case Kind::Mul: return wrap(n.args[0], 2) + "*" + wrap(n.args[1], 3);
    case Kind::Div: return wrap(n.args[0], 2) + "/" + wrap(n.args[1], 3);
    case Kind::Neg: return "-" + wrap(n.args[0], 3);
    case Kind::Pow: {
      const std::string e = n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")"
                                           : std::to_string(n.exponent);
      return wrap(n.args[0], 5) + "^" + e;
    }
    case Kind::Abs: return "abs(" + print_node(*n.args[0]) + ")";
    case Kind::Min:
    case Kind::Max: {
      std::string s = n.kind == Kind::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += print_node(*n.args[i]);
      }
      return s + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Jet arithmetic

Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Jet operator/(Jet a, Jet b) {
  const double inv = 1.0 / b.v;
  const Jet r{inv, -b.d1 * inv * inv,
              -b.d2 * inv * inv + 2.0 * b.d1 * b.d1 * inv * inv * inv};
  return a * r;
}
bool operator<(Jet a, Jet b) { return a.v < b.v; }

double ipow(double a, int n) {
  const bool invert = n < 0;
  unsigned e = invert ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= a;
    a *= a;
    e >>= 1;
  }
  return invert ? 1.0 / r : r;
}
Jet ipow(Jet a, int n) {
  if (n == 0) return {1.0, 0.0, 0.0};
  const double pm1 = ipow(a.v, n - 1);
  const double pm2 = n >= 2 || a.v != 0.0 ? ipow(a.v, n - 2) : 0.0;
  return {ipow(a.v, n), n * pm1 * a.d1,
          n * pm1 * a.d2 + static_cast<double>(n) * (n - 1) * pm2 * a.d1 * a.d1};
}

Jet absolute(Jet a) { return a.v < 0.0 ? -a : a; }
double absolute(double a) { return std::abs(a); }

template <typename T>
T lift(double c) {
  if constexpr (std::is_same_v<T, Jet>) return Jet{c, 0.0, 0.0};
  else return c;
}

template <typename T>
T lift_x(double x) {
  if constexpr (std::is_same_v<T, Jet>) return Jet{x, 1.0, 0.0};
  else return x;
}

constexpr std::size_t kMaxDepth = 256;

}  // namespace

NodePtr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const NodePtr& node) { return print_node(*node); }

// ---------------------------------------------------------------------------
// Program

Program::Program(const NodePtr& root) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Node& n) -> void {
    for (const auto& a : n.args) self(self, *a);
    Instr ins{n.kind, n.value, n.exponent};
    switch (n.kind) {
      case Kind::Constant:
      case Kind::Variable: ++depth; break;
      case Kind::Neg:
      case Kind::Abs:
      case Kind::Pow: break;
      case Kind::Min:
      case Kind::Max:
        ins.arg = static_cast<int>(n.args.size());
        depth -= n.args.size() - 1;
        break;
      default: --depth; break;
    }
    code_.push_back(ins);
    max_depth_ = std::max(max_depth_, depth);
  };
  emit(emit, *root);
  if (max_depth_ > kMaxDepth)
    throw Error(ErrorKind::InvalidParameter, "expression nesting too deep");
  constant_ = !depends_on_x(root);
  if (constant_) constant_value_ = run<double>(0.0);
}

template <typename T>
T Program::run(double x) const {
  std::array<T, kMaxDepth> stack;
  std::size_t sp = 0;
  for (const Instr& ins : code_) {
    switch (ins.kind) {
      case Kind::Constant: stack[sp++] = lift<T>(ins.value); break;
      case Kind::Variable: stack[sp++] = lift_x<T>(x); break;
      case Kind::Add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
      case Kind::Sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
      case Kind::Mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
      case Kind::Div: --sp; stack[sp - 1] = stack[sp - 1] / stack[sp]; break;
      case Kind::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Kind::Abs: stack[sp - 1] = absolute(stack[sp - 1]); break;
      case Kind::Pow: stack[sp - 1] = ipow(stack[sp - 1], ins.arg); break;
      case Kind::Min:
      case Kind::Max: {
        const std::size_t base = sp - static_cast<std::size_t>(ins.arg);
        T best = stack[base];
        for (std::size_t i = base + 1; i < sp; ++i) {
          // Ties keep the earlier argument, so derivatives follow it.
          const bool better = ins.kind == Kind::Min ? stack[i] < best : best < stack[i];
          if (better) best = stack[i];
        }
        sp = base;
        stack[sp++] = best;
        break;
      }
    }
  }
  return stack[0];
}

double Program::eval(double x) const {
  if (constant_) return constant_value_;
  return run<double>(x);
}

Jet Program::eval_jet(double x) const {
  if (constant_) return {constant_value_, 0.0, 0.0};
  return run<Jet>(x);
}

}  // namespace rrw::expr

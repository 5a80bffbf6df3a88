#pragma once

// Expression trees over rational constants, π, argument letters (a-z) and
// process symbols (V0-V6), plus an incremental constraint store that solves
// for unknowns as bindings become available.
//
// Trigonometric functions take degrees.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace geoprog::symbolic {

inline constexpr double kPi = 3.141592653589793;

/// Exact rational with 64-bit parts; always reduced, denominator positive.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static std::optional<Rational> make(__int128 num, __int128 den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

std::optional<Rational> operator+(Rational a, Rational b);
std::optional<Rational> operator-(Rational a, Rational b);
std::optional<Rational> operator*(Rational a, Rational b);
std::optional<Rational> operator/(Rational a, Rational b);

using Bindings = std::map<std::string, double>;

class Expression {
 public:
  enum class Kind { Rational, Real, Pi, Symbol, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Sin, Cos, Tan };

  Expression();  // rational zero
  static Expression rational(Rational q);
  static Expression integer(std::int64_t n) { return rational({n, 1}); }
  static Expression real(double value);
  static Expression pi();
  static Expression symbol(std::string name);

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression pow(const Expression& base, int exponent);
  friend Expression sqrt(const Expression& a);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression tan(const Expression& a);

  Kind kind() const;
  const Rational& rational_value() const;
  double real_value() const;
  const std::string& name() const;
  int exponent() const;
  const std::vector<Expression>& children() const;

  /// Rational constant, if this expression folded to one.
  std::optional<Rational> as_rational() const;

  /// Structural equality.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expression unary(Kind kind, const Expression& a);
  static Expression binary(Kind kind, const Expression& a, const Expression& b);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Expression& e);

struct Equation {
  Expression lhs;
  Expression rhs;
};

std::string to_string(const Equation& eq);

// --- text -----------------------------------------------------------------

/// Lexeme of an expression literal such as "3x+y", "5π" or "2√3".
struct ExprToken {
  enum class Kind { Number, Argument, ProcessSymbol, Function, Pi, Operator, LParen, RParen, Space };
  Kind kind;
  std::string text;
};

/// Splits expression text into lexemes; concatenating the texts gives back
/// the input. Throws SyntaxError on characters outside the grammar.
std::vector<ExprToken> lex_expression(std::string_view text);

/// Parses an expression literal. Implicit multiplication is supported
/// ("3x" is 3·x, "5π" is 5·π); "pi" and "π" are both accepted.
Expression parse_expression(std::string_view text);

/// Rewrites argument letters in expression text, leaving everything else
/// byte-identical.
std::string rename_arguments(std::string_view text, const std::map<char, char>& renames);

// --- evaluation -----------------------------------------------------------

std::set<std::string> free_symbols(const Expression& e);
bool contains_symbol(const Expression& e, std::string_view name);

/// Replaces bound symbols by their values.
Expression substitute(const Expression& e, const Bindings& bindings);

/// IEEE evaluation. Throws UnboundSymbol, DivisionByZero or DomainError.
double evaluate(const Expression& e, const Bindings& bindings = {});

/// Whether two reals agree to `1e-9 · max(1, |a|, |b|)`.
bool nearly_equal(double a, double b, double rel = 1e-9);

// --- constraint store -----------------------------------------------------

/// Equation set plus the bindings derived from it. Propagation runs on every
/// insertion; equations that cannot be solved yet stay pending.
///
/// Supported solving fragment: one unknown occurring linearly or
/// quadratically, one unknown occurring exactly once under invertible
/// operations, and pairs of equations jointly linear in two unknowns.
/// Quadratics keep the single positive root; two distinct positive roots
/// raise AmbiguousRoot.
class ConstraintStore {
 public:
  /// Appends `eq` and propagates. Throws Inconsistent, AmbiguousRoot.
  void add_equation(Equation eq);

  /// Runs propagation to a fixpoint.
  void solve_pending();

  /// Seeds a known value, as if `name = value` had been added.
  void bind(const std::string& name, double value);

  const Bindings& bindings() const { return bindings_; }
  const std::vector<Equation>& equations() const { return equations_; }
  /// Equations that still mention unbound symbols, with bindings substituted.
  const std::vector<Equation>& pending() const { return pending_; }

  std::optional<double> value(const std::string& name) const;
  /// True when `name` is unbound but mentioned by a pending equation.
  bool is_constrained(const std::string& name) const;

 private:
  bool propagate_ground();
  bool solve_single();
  bool solve_linear_pair();
  void assign(const std::string& name, double value);

  std::vector<Equation> equations_;
  std::vector<Equation> pending_;
  Bindings bindings_;
};

/// Root policy shared by the store and its tests: real roots of
/// a·x² + b·x + c = 0 filtered to the admissible one. Throws AmbiguousRoot
/// or Inconsistent.
double admissible_quadratic_root(double a, double b, double c);

}  // namespace geoprog::symbolic

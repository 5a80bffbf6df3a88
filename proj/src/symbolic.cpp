#include "geoprog/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "geoprog/error.hpp"

namespace geoprog::symbolic {

// --- Rational ---------------------------------------------------------------

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::optional<Rational> Rational::make(__int128 num, __int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) return std::nullopt;
  return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<Rational> operator+(Rational a, Rational b) {
  return Rational::make(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                        static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> operator-(Rational a, Rational b) {
  return Rational::make(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                        static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> operator*(Rational a, Rational b) {
  return Rational::make(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> operator/(Rational a, Rational b) {
  return Rational::make(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
}

// --- Expression -------------------------------------------------------------

struct Expression::Node {
  Kind kind = Kind::Rational;
  Rational q{};
  double real = 0.0;
  std::string name;
  int exponent = 0;
  std::vector<Expression> kids;
};

Expression::Expression() : Expression(rational({0, 1})) {}

Expression Expression::rational(Rational q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rational;
  n->q = q;
  return Expression(std::move(n));
}

Expression Expression::real(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Real;
  n->real = value;
  return Expression(std::move(n));
}

Expression Expression::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return Expression(std::move(n));
}

Expression Expression::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::unary(Kind kind, const Expression& a) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->kids = {a};
  return Expression(std::move(n));
}

Expression Expression::binary(Kind kind, const Expression& a, const Expression& b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->kids = {a, b};
  return Expression(std::move(n));
}

Expression::Kind Expression::kind() const { return node_->kind; }
const Rational& Expression::rational_value() const { return node_->q; }
double Expression::real_value() const { return node_->real; }
const std::string& Expression::name() const { return node_->name; }
int Expression::exponent() const { return node_->exponent; }
const std::vector<Expression>& Expression::children() const { return node_->kids; }

std::optional<Rational> Expression::as_rational() const {
  if (node_->kind == Kind::Rational) return node_->q;
  return std::nullopt;
}

// Rational constants fold exactly; everything else stays symbolic.
Expression operator+(const Expression& a, const Expression& b) {
  if (auto x = a.as_rational(), y = b.as_rational(); x && y) {
    if (auto r = *x + *y) return Expression::rational(*r);
  }
  return Expression::binary(Expression::Kind::Add, a, b);
}

Expression operator-(const Expression& a, const Expression& b) {
  if (auto x = a.as_rational(), y = b.as_rational(); x && y) {
    if (auto r = *x - *y) return Expression::rational(*r);
  }
  return Expression::binary(Expression::Kind::Sub, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (auto x = a.as_rational(), y = b.as_rational(); x && y) {
    if (auto r = *x * *y) return Expression::rational(*r);
  }
  return Expression::binary(Expression::Kind::Mul, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (auto x = a.as_rational(), y = b.as_rational(); x && y && !y->is_zero()) {
    if (auto r = *x / *y) return Expression::rational(*r);
  }
  return Expression::binary(Expression::Kind::Div, a, b);
}

Expression operator-(const Expression& a) {
  if (auto x = a.as_rational()) {
    if (auto r = Rational{0, 1} - *x) return Expression::rational(*r);
  }
  return Expression::unary(Expression::Kind::Neg, a);
}

Expression pow(const Expression& base, int exponent) {
  if (exponent == 1) return base;
  if (auto x = base.as_rational(); x && exponent >= 0) {
    std::optional<Rational> acc = Rational{1, 1};
    for (int i = 0; i < exponent && acc; ++i) acc = *acc * *x;
    if (acc) return Expression::rational(*acc);
  }
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Pow;
  n->exponent = exponent;
  n->kids = {base};
  return Expression(std::move(n));
}

Expression sqrt(const Expression& a) { return Expression::unary(Expression::Kind::Sqrt, a); }
Expression sin(const Expression& a) { return Expression::unary(Expression::Kind::Sin, a); }
Expression cos(const Expression& a) { return Expression::unary(Expression::Kind::Cos, a); }
Expression tan(const Expression& a) { return Expression::unary(Expression::Kind::Tan, a); }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expression::Kind::Rational: return x.q == y.q;
    case Expression::Kind::Real: return x.real == y.real;
    case Expression::Kind::Pi: return true;
    case Expression::Kind::Symbol: return x.name == y.name;
    case Expression::Kind::Pow:
      if (x.exponent != y.exponent) return false;
      break;
    default: break;
  }
  return x.kids == y.kids;
}

namespace {

int precedence(Expression::Kind k) {
  using K = Expression::Kind;
  switch (k) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg: return 3;
    case K::Pow: return 4;
    default: return 5;
  }
}

void print(std::ostream& os, const Expression& e, int parent_prec) {
  using K = Expression::Kind;
  const int prec = precedence(e.kind());
  const bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (e.kind()) {
    case K::Rational: {
      const auto& q = e.rational_value();
      if (q.den == 1) {
        os << q.num;
      } else {
        os << q.num << '/' << q.den;
      }
      break;
    }
    case K::Real: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e.real_value();
      os << tmp.str();
      break;
    }
    case K::Pi: os << "π"; break;
    case K::Symbol: os << e.name(); break;
    case K::Add:
      print(os, e.children()[0], 1);
      os << " + ";
      print(os, e.children()[1], 2);
      break;
    case K::Sub:
      print(os, e.children()[0], 1);
      os << " - ";
      print(os, e.children()[1], 2);
      break;
    case K::Mul:
      print(os, e.children()[0], 2);
      os << "*";
      print(os, e.children()[1], 3);
      break;
    case K::Div:
      print(os, e.children()[0], 2);
      os << "/";
      print(os, e.children()[1], 3);
      break;
    case K::Neg:
      os << '-';
      print(os, e.children()[0], 3);
      break;
    case K::Pow:
      print(os, e.children()[0], 5);
      os << '^' << e.exponent();
      break;
    case K::Sqrt: os << "sqrt("; print(os, e.children()[0], 0); os << ')'; break;
    case K::Sin: os << "sin("; print(os, e.children()[0], 0); os << ')'; break;
    case K::Cos: os << "cos("; print(os, e.children()[0], 0); os << ')'; break;
    case K::Tan: os << "tan("; print(os, e.children()[0], 0); os << ')'; break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const Expression& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::string to_string(const Equation& eq) { return to_string(eq.lhs) + " = " + to_string(eq.rhs); }

// --- lexer ------------------------------------------------------------------

namespace {

constexpr std::string_view kPiGlyph = "π";
constexpr std::string_view kSqrtGlyph = "√";

struct GlyphOperator {
  std::string_view glyph;
  char ascii;
};
constexpr GlyphOperator kGlyphOperators[] = {
    {"·", '*'}, {"×", '*'}, {"÷", '/'}, {"−", '-'}, {"⋅", '*'}};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

std::vector<ExprToken> lex_expression(std::string_view text) {
  using K = ExprToken::Kind;
  std::vector<ExprToken> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t') {
      std::size_t j = i;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
      out.push_back({K::Space, std::string(text.substr(i, j - i))});
      i = j;
    } else if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.' && j + 1 < text.size() && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      out.push_back({K::Number, std::string(text.substr(i, j - i))});
      i = j;
    } else if (starts(kPiGlyph)) {
      out.push_back({K::Pi, std::string(kPiGlyph)});
      i += kPiGlyph.size();
    } else if (starts(kSqrtGlyph)) {
      out.push_back({K::Function, std::string(kSqrtGlyph)});
      i += kSqrtGlyph.size();
    } else if (is_lower(c)) {
      bool matched = false;
      for (std::string_view fn : {"sqrt", "sin", "cos", "tan"}) {
        if (starts(fn)) {
          out.push_back({K::Function, std::string(fn)});
          i += fn.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (starts("pi")) {
        out.push_back({K::Pi, "pi"});
        i += 2;
        continue;
      }
      out.push_back({K::Argument, std::string(1, c)});
      ++i;
    } else if (c == 'V' && i + 1 < text.size() && is_digit(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && is_digit(text[j])) ++j;
      out.push_back({K::ProcessSymbol, std::string(text.substr(i, j - i))});
      i = j;
    } else if (c == '(') {
      out.push_back({K::LParen, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({K::RParen, ")"});
      ++i;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({K::Operator, std::string(1, c)});
      ++i;
    } else {
      bool matched = false;
      for (const auto& g : kGlyphOperators) {
        if (starts(g.glyph)) {
          out.push_back({K::Operator, std::string(g.glyph)});
          i += g.glyph.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw Error(ErrorCode::SyntaxError,
                    "unexpected character in expression '" + std::string(text) + "'");
      }
    }
  }
  return out;
}

std::string rename_arguments(std::string_view text, const std::map<char, char>& renames) {
  std::string out;
  for (const auto& tok : lex_expression(text)) {
    if (tok.kind == ExprToken::Kind::Argument) {
      auto it = renames.find(tok.text[0]);
      out += it == renames.end() ? tok.text[0] : it->second;
    } else {
      out += tok.text;
    }
  }
  return out;
}

// --- parser -----------------------------------------------------------------

namespace {

char operator_char(const ExprToken& t) {
  if (t.kind != ExprToken::Kind::Operator) return '\0';
  if (t.text.size() == 1) return t.text[0];
  for (const auto& g : kGlyphOperators) {
    if (t.text == g.glyph) return g.ascii;
  }
  return '\0';
}

Expression number_literal(const std::string& text) {
  const auto dot = text.find('.');
  const std::string digits = dot == std::string::npos ? text : text.substr(0, dot) + text.substr(dot + 1);
  const std::size_t frac = dot == std::string::npos ? 0 : text.size() - dot - 1;
  if (digits.size() <= 18) {
    __int128 den = 1;
    for (std::size_t k = 0; k < frac; ++k) den *= 10;
    if (auto q = Rational::make(std::stoll(digits), den)) return Expression::rational(*q);
  }
  return Expression::real(std::stod(text));
}

class Parser {
 public:
  Parser(std::string_view source, std::vector<ExprToken> tokens) : source_(source) {
    for (auto& t : tokens) {
      if (t.kind != ExprToken::Kind::Space) tokens_.push_back(std::move(t));
    }
  }

  Expression parse() {
    if (tokens_.empty()) fail("empty expression");
    Expression e = expr();
    if (pos_ != tokens_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::SyntaxError, why + " in '" + std::string(source_) + "'");
  }

  const ExprToken* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  bool accept_op(char op) {
    if (const auto* t = peek(); t && operator_char(*t) == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool starts_atom() const {
    using K = ExprToken::Kind;
    const auto* t = peek();
    if (!t) return false;
    switch (t->kind) {
      case K::Number:
      case K::Argument:
      case K::ProcessSymbol:
      case K::Function:
      case K::Pi:
      case K::LParen: return true;
      default: return false;
    }
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept_op('+')) {
        lhs = lhs + term();
      } else if (accept_op('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = factor();
    for (;;) {
      if (accept_op('*')) {
        lhs = lhs * factor();
      } else if (accept_op('/')) {
        Expression rhs = factor();
        if (auto q = rhs.as_rational(); q && q->is_zero()) fail("division by literal zero");
        lhs = lhs / rhs;
      } else if (starts_atom()) {
        lhs = lhs * power();
      } else {
        return lhs;
      }
    }
  }

  Expression factor() {
    if (accept_op('-')) return -factor();
    if (accept_op('+')) return factor();
    return power();
  }

  Expression power() {
    Expression base = atom();
    if (accept_op('^')) {
      bool paren = false;
      if (const auto* t = peek(); t && t->kind == ExprToken::Kind::LParen) {
        paren = true;
        ++pos_;
      }
      const bool negative = accept_op('-');
      const auto* t = peek();
      if (!t || t->kind != ExprToken::Kind::Number || t->text.find('.') != std::string::npos) {
        fail("exponent must be an integer");
      }
      int k = std::stoi(t->text);
      ++pos_;
      if (paren) expect_rparen();
      base = pow(base, negative ? -k : k);
    }
    return base;
  }

  void expect_rparen() {
    const auto* t = peek();
    if (!t || t->kind != ExprToken::Kind::RParen) fail("expected ')'");
    ++pos_;
  }

  Expression atom() {
    using K = ExprToken::Kind;
    const auto* t = peek();
    if (!t) fail("unexpected end of input");
    ++pos_;
    switch (t->kind) {
      case K::Number: return number_literal(t->text);
      case K::Argument: return Expression::symbol(t->text);
      case K::ProcessSymbol: return Expression::symbol(t->text);
      case K::Pi: return Expression::pi();
      case K::LParen: {
        Expression inner = expr();
        expect_rparen();
        return inner;
      }
      case K::Function: {
        const std::string fn = t->text;
        Expression arg = power();
        if (fn == "sin") return sin(arg);
        if (fn == "cos") return cos(arg);
        if (fn == "tan") return tan(arg);
        return sqrt(arg);
      }
      default: fail("unexpected '" + t->text + "'");
    }
  }

  std::string_view source_;
  std::vector<ExprToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text, lex_expression(text)).parse(); }

// --- evaluation -------------------------------------------------------------

namespace {

void collect_symbols(const Expression& e, std::set<std::string>& out) {
  if (e.kind() == Expression::Kind::Symbol) {
    out.insert(e.name());
    return;
  }
  for (const auto& k : e.children()) collect_symbols(k, out);
}

int count_symbol(const Expression& e, std::string_view name) {
  if (e.kind() == Expression::Kind::Symbol) return e.name() == name ? 1 : 0;
  int n = 0;
  for (const auto& k : e.children()) n += count_symbol(k, name);
  return n;
}

// Exact values at multiples of 30° and 45° so textbook angles give clean
// results (sin 30 = 0.5, not 0.49999999999999994).
double sin_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0) r += 360.0;
  static constexpr struct {
    double angle;
    double value;
  } kTable[] = {{0, 0.0},
                {30, 0.5},
                {45, 0.70710678118654752440},
                {60, 0.86602540378443864676},
                {90, 1.0},
                {120, 0.86602540378443864676},
                {135, 0.70710678118654752440},
                {150, 0.5},
                {180, 0.0},
                {210, -0.5},
                {225, -0.70710678118654752440},
                {240, -0.86602540378443864676},
                {270, -1.0},
                {300, -0.86602540378443864676},
                {315, -0.70710678118654752440},
                {330, -0.5}};
  for (const auto& entry : kTable) {
    if (r == entry.angle) return entry.value;
  }
  return std::sin(r * kPi / 180.0);
}

double cos_degrees(double deg) { return sin_degrees(deg + 90.0); }

double tan_degrees(double deg) {
  const double c = cos_degrees(deg);
  if (c == 0.0 || std::abs(c) < 1e-15) {
    throw Error(ErrorCode::DomainError, "tan undefined at " + std::to_string(deg) + " degrees");
  }
  return sin_degrees(deg) / c;
}

}  // namespace

std::set<std::string> free_symbols(const Expression& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool contains_symbol(const Expression& e, std::string_view name) { return count_symbol(e, name) > 0; }

namespace {

Expression rebuild(const Expression& e, std::vector<Expression> kids) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Add: return kids[0] + kids[1];
    case K::Sub: return kids[0] - kids[1];
    case K::Mul: return kids[0] * kids[1];
    case K::Div: return kids[0] / kids[1];
    case K::Neg: return -kids[0];
    case K::Pow: return pow(kids[0], e.exponent());
    case K::Sqrt: return sqrt(kids[0]);
    case K::Sin: return sin(kids[0]);
    case K::Cos: return cos(kids[0]);
    case K::Tan: return tan(kids[0]);
    default: return e;
  }
}

}  // namespace

Expression substitute(const Expression& e, const Bindings& bindings) {
  if (e.kind() == Expression::Kind::Symbol) {
    auto it = bindings.find(e.name());
    return it == bindings.end() ? e : Expression::real(it->second);
  }
  if (e.children().empty()) return e;
  std::vector<Expression> kids;
  kids.reserve(e.children().size());
  for (const auto& k : e.children()) kids.push_back(substitute(k, bindings));
  return rebuild(e, std::move(kids));
}

double evaluate(const Expression& e, const Bindings& bindings) {
  using K = Expression::Kind;
  const auto& kids = e.children();
  switch (e.kind()) {
    case K::Rational: return e.rational_value().to_double();
    case K::Real: return e.real_value();
    case K::Pi: return kPi;
    case K::Symbol: {
      auto it = bindings.find(e.name());
      if (it == bindings.end()) throw Error(ErrorCode::UnboundSymbol, e.name());
      return it->second;
    }
    case K::Add: return evaluate(kids[0], bindings) + evaluate(kids[1], bindings);
    case K::Sub: return evaluate(kids[0], bindings) - evaluate(kids[1], bindings);
    case K::Mul: return evaluate(kids[0], bindings) * evaluate(kids[1], bindings);
    case K::Div: {
      const double den = evaluate(kids[1], bindings);
      if (den == 0.0) throw Error(ErrorCode::DivisionByZero, to_string(e));
      return evaluate(kids[0], bindings) / den;
    }
    case K::Neg: return -evaluate(kids[0], bindings);
    case K::Pow: {
      const double base = evaluate(kids[0], bindings);
      if (base == 0.0 && e.exponent() < 0) throw Error(ErrorCode::DivisionByZero, to_string(e));
      return std::pow(base, e.exponent());
    }
    case K::Sqrt: {
      double v = evaluate(kids[0], bindings);
      if (v < 0) {
        if (v > -1e-12) {
          v = 0;
        } else {
          throw Error(ErrorCode::DomainError, "sqrt of negative value in " + to_string(e));
        }
      }
      return std::sqrt(v);
    }
    case K::Sin: return sin_degrees(evaluate(kids[0], bindings));
    case K::Cos: return cos_degrees(evaluate(kids[0], bindings));
    case K::Tan: return tan_degrees(evaluate(kids[0], bindings));
  }
  return 0.0;
}

bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// --- polynomial view --------------------------------------------------------

namespace {

// Multivariate polynomial with real coefficients; monomials are exponent
// vectors aligned with the unknown list.
struct Poly {
  std::map<std::vector<int>, double> terms;

  static Poly constant(std::size_t n, double c) {
    Poly p;
    if (c != 0.0) p.terms[std::vector<int>(n, 0)] = c;
    return p;
  }
  static Poly variable(std::size_t n, std::size_t i) {
    Poly p;
    std::vector<int> m(n, 0);
    m[i] = 1;
    p.terms[m] = 1.0;
    return p;
  }
  bool is_zero() const { return terms.empty(); }
  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
    return d;
  }
  std::optional<double> constant_value() const {
    if (terms.empty()) return 0.0;
    if (terms.size() == 1 && degree() == 0) return terms.begin()->second;
    return std::nullopt;
  }
  double coefficient(const std::vector<int>& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? 0.0 : it->second;
  }
  double at(const std::vector<double>& x) const {
    double s = 0;
    for (const auto& [m, c] : terms) {
      double t = c;
      for (std::size_t i = 0; i < m.size(); ++i) t *= std::pow(x[i], m[i]);
      s += t;
    }
    return s;
  }
  void prune() {
    std::erase_if(terms, [](const auto& kv) { return kv.second == 0.0; });
  }
};

Poly add(const Poly& a, const Poly& b, double sign) {
  Poly r = a;
  for (const auto& [m, c] : b.terms) r.terms[m] += sign * c;
  r.prune();
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      std::vector<int> m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.terms[m] += ca * cb;
    }
  }
  r.prune();
  return r;
}

Poly scale(const Poly& a, double s) {
  Poly r = a;
  for (auto& [m, c] : r.terms) c *= s;
  r.prune();
  return r;
}

struct RatPoly {
  Poly num;
  Poly den;
};

constexpr int kMaxDegree = 8;

RatPoly tidy(RatPoly r, std::size_t n) {
  if (auto c = r.den.constant_value(); c && *c != 1.0) {
    if (*c == 0.0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    r.num = scale(r.num, 1.0 / *c);
    r.den = Poly::constant(n, 1.0);
  }
  return r;
}

// Rational-function view of `e` in `unknowns`. Returns nullopt when an
// unknown sits under sqrt/trig or the degree grows past kMaxDegree.
std::optional<RatPoly> to_ratpoly(const Expression& e, const std::vector<std::string>& unknowns) {
  using K = Expression::Kind;
  const std::size_t n = unknowns.size();
  const auto syms = free_symbols(e);
  if (syms.empty()) return RatPoly{Poly::constant(n, evaluate(e)), Poly::constant(n, 1.0)};
  const auto& kids = e.children();
  auto sub = [&](std::size_t i) { return to_ratpoly(kids[i], unknowns); };
  std::optional<RatPoly> out;
  switch (e.kind()) {
    case K::Symbol: {
      auto it = std::find(unknowns.begin(), unknowns.end(), e.name());
      if (it == unknowns.end()) return std::nullopt;
      out = RatPoly{Poly::variable(n, static_cast<std::size_t>(it - unknowns.begin())), Poly::constant(n, 1.0)};
      break;
    }
    case K::Add:
    case K::Sub: {
      auto a = sub(0), b = sub(1);
      if (!a || !b) return std::nullopt;
      const double sign = e.kind() == K::Add ? 1.0 : -1.0;
      if (a->den.terms == b->den.terms) {
        out = RatPoly{add(a->num, b->num, sign), a->den};
      } else {
        out = RatPoly{add(mul(a->num, b->den), mul(b->num, a->den), sign), mul(a->den, b->den)};
      }
      break;
    }
    case K::Mul: {
      auto a = sub(0), b = sub(1);
      if (!a || !b) return std::nullopt;
      out = RatPoly{mul(a->num, b->num), mul(a->den, b->den)};
      break;
    }
    case K::Div: {
      auto a = sub(0), b = sub(1);
      if (!a || !b) return std::nullopt;
      if (b->num.is_zero()) throw Error(ErrorCode::DivisionByZero, to_string(e));
      out = RatPoly{mul(a->num, b->den), mul(a->den, b->num)};
      break;
    }
    case K::Neg: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      out = RatPoly{scale(a->num, -1.0), a->den};
      break;
    }
    case K::Pow: {
      auto a = sub(0);
      if (!a) return std::nullopt;
      const int k = e.exponent();
      if (std::abs(k) > kMaxDegree) return std::nullopt;
      RatPoly base = k >= 0 ? *a : RatPoly{a->den, a->num};
      if (k < 0 && a->num.is_zero()) throw Error(ErrorCode::DivisionByZero, to_string(e));
      RatPoly acc{Poly::constant(n, 1.0), Poly::constant(n, 1.0)};
      for (int i = 0; i < std::abs(k); ++i) acc = RatPoly{mul(acc.num, base.num), mul(acc.den, base.den)};
      out = acc;
      break;
    }
    default: return std::nullopt;
  }
  out = tidy(std::move(*out), n);
  if (out->num.degree() > kMaxDegree || out->den.degree() > kMaxDegree) return std::nullopt;
  return out;
}

// Drops coefficients that are rounding noise relative to the largest one.
void chop(Poly& p) {
  double biggest = 0;
  for (const auto& [m, c] : p.terms) biggest = std::max(biggest, std::abs(c));
  std::erase_if(p.terms, [&](const auto& kv) { return std::abs(kv.second) <= 1e-12 * biggest; });
}

double radians_to_degrees(double r) { return r * 180.0 / kPi; }

// Solves side == target for the single occurrence of `u` inside `side`.
double isolate(const Expression& side, double target, const std::string& u) {
  using K = Expression::Kind;
  const auto& kids = side.children();
  auto in = [&](std::size_t i) { return contains_symbol(kids[i], u); };
  auto val = [&](std::size_t i) { return evaluate(kids[i]); };
  auto no_solution = [&]() -> double {
    throw Error(ErrorCode::Inconsistent, "no real value of " + u + " satisfies " + to_string(side) + " = " +
                                             std::to_string(target));
  };
  switch (side.kind()) {
    case K::Symbol: return target;
    case K::Add: return in(0) ? isolate(kids[0], target - val(1), u) : isolate(kids[1], target - val(0), u);
    case K::Sub: return in(0) ? isolate(kids[0], target + val(1), u) : isolate(kids[1], val(0) - target, u);
    case K::Mul: {
      const double other = in(0) ? val(1) : val(0);
      if (other == 0.0) return no_solution();
      return isolate(kids[in(0) ? 0 : 1], target / other, u);
    }
    case K::Div:
      if (in(0)) return isolate(kids[0], target * val(1), u);
      if (target == 0.0) return no_solution();
      return isolate(kids[1], val(0) / target, u);
    case K::Neg: return isolate(kids[0], -target, u);
    case K::Pow: {
      const int k = side.exponent();
      if (k == 0) return no_solution();
      if (k % 2 == 0 && target < 0) return no_solution();
      const double root = k % 2 == 0 ? std::pow(target, 1.0 / k) : std::copysign(std::pow(std::abs(target), 1.0 / k), target);
      return isolate(kids[0], root, u);
    }
    case K::Sqrt:
      if (target < 0) return no_solution();
      return isolate(kids[0], target * target, u);
    case K::Sin:
    case K::Cos: {
      double t = target;
      if (std::abs(t) > 1.0 + 1e-12) return no_solution();
      t = std::clamp(t, -1.0, 1.0);
      const double angle = radians_to_degrees(side.kind() == K::Sin ? std::asin(t) : std::acos(t));
      return isolate(kids[0], angle, u);
    }
    case K::Tan: return isolate(kids[0], radians_to_degrees(std::atan(target)), u);
    default: return no_solution();
  }
}

}  // namespace

double admissible_quadratic_root(double a, double b, double c) {
  const double coef_scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (std::abs(a) <= 1e-12 * coef_scale) {
    if (std::abs(b) <= 1e-12 * coef_scale) throw Error(ErrorCode::Inconsistent, "degenerate equation");
    return -c / b;
  }
  double disc = b * b - 4 * a * c;
  const double disc_scale = b * b + std::abs(4 * a * c);
  if (disc < -1e-12 * disc_scale) throw Error(ErrorCode::Inconsistent, "no real roots");
  if (disc < 1e-14 * disc_scale) disc = 0;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : r1;
  if (disc == 0) r1 = r2 = -b / (2 * a);
  const double eps = 1e-12 * std::max({1.0, std::abs(r1), std::abs(r2)});
  const bool pos1 = r1 > eps;
  const bool pos2 = r2 > eps;
  if (pos1 && pos2) {
    if (std::abs(r1 - r2) > eps) {
      throw Error(ErrorCode::AmbiguousRoot,
                  "two positive roots " + std::to_string(r1) + " and " + std::to_string(r2));
    }
    return std::max(r1, r2);
  }
  if (pos1) return r1;
  if (pos2) return r2;
  if (std::abs(r1) <= eps) return 0.0;
  if (std::abs(r2) <= eps) return 0.0;
  throw Error(ErrorCode::Inconsistent, "only negative roots");
}

// --- ConstraintStore --------------------------------------------------------

void ConstraintStore::add_equation(Equation eq) {
  equations_.push_back(eq);
  pending_.push_back({substitute(eq.lhs, bindings_), substitute(eq.rhs, bindings_)});
  solve_pending();
}

void ConstraintStore::bind(const std::string& name, double value) {
  assign(name, value);
  solve_pending();
}

std::optional<double> ConstraintStore::value(const std::string& name) const {
  auto it = bindings_.find(name);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

bool ConstraintStore::is_constrained(const std::string& name) const {
  if (bindings_.contains(name)) return false;
  return std::any_of(pending_.begin(), pending_.end(), [&](const Equation& eq) {
    return contains_symbol(eq.lhs, name) || contains_symbol(eq.rhs, name);
  });
}

void ConstraintStore::assign(const std::string& name, double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::Inconsistent, name + " has no finite value");
  bindings_[name] = value;
}

void ConstraintStore::solve_pending() {
  for (;;) {
    propagate_ground();
    if (solve_single()) continue;
    if (solve_linear_pair()) continue;
    return;
  }
}

// Substitutes bindings into every pending equation; ground ones are checked
// and retired.
bool ConstraintStore::propagate_ground() {
  bool changed = false;
  std::vector<Equation> still;
  for (auto& eq : pending_) {
    Equation s{substitute(eq.lhs, bindings_), substitute(eq.rhs, bindings_)};
    if (free_symbols(s.lhs).empty() && free_symbols(s.rhs).empty()) {
      const double l = evaluate(s.lhs);
      const double r = evaluate(s.rhs);
      if (!nearly_equal(l, r)) {
        throw Error(ErrorCode::Inconsistent, to_string(s) + " (" + std::to_string(l) + " != " + std::to_string(r) + ")");
      }
      changed = true;
    } else {
      still.push_back(std::move(s));
    }
  }
  pending_ = std::move(still);
  return changed;
}

bool ConstraintStore::solve_single() {
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const Equation& eq = pending_[i];
    std::set<std::string> syms = free_symbols(eq.lhs);
    syms.merge(free_symbols(eq.rhs));
    if (syms.size() != 1) continue;
    const std::string u = *syms.begin();

    auto rp = to_ratpoly(eq.lhs - eq.rhs, {u});
    if (rp) chop(rp->num);
    if (rp && rp->num.degree() <= 2) {
      const double c0 = rp->num.coefficient({0});
      const double c1 = rp->num.coefficient({1});
      const double c2 = rp->num.coefficient({2});
      if (c1 == 0.0 && c2 == 0.0) {
        if (std::abs(c0) > 1e-9) throw Error(ErrorCode::Inconsistent, to_string(eq));
        pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
      const double root = c2 == 0.0 ? -c0 / c1 : admissible_quadratic_root(c2, c1, c0);
      if (std::abs(rp->den.at({root})) < 1e-12) {
        throw Error(ErrorCode::DivisionByZero, u + " = " + std::to_string(root) + " zeroes a denominator");
      }
      assign(u, root);
      return true;
    }
    if (count_symbol(eq.lhs, u) + count_symbol(eq.rhs, u) == 1) {
      const bool left = contains_symbol(eq.lhs, u);
      const double target = evaluate(left ? eq.rhs : eq.lhs);
      assign(u, isolate(left ? eq.lhs : eq.rhs, target, u));
      return true;
    }
  }
  return false;
}

bool ConstraintStore::solve_linear_pair() {
  struct Linear {
    std::vector<std::string> unknowns;
    double a, b, c;  // a·u + b·v + c = 0
    Poly den;
  };
  std::vector<Linear> rows;
  for (const auto& eq : pending_) {
    std::set<std::string> syms = free_symbols(eq.lhs);
    syms.merge(free_symbols(eq.rhs));
    if (syms.size() != 2) continue;
    std::vector<std::string> names(syms.begin(), syms.end());
    auto rp = to_ratpoly(eq.lhs - eq.rhs, names);
    if (!rp) continue;
    chop(rp->num);
    if (rp->num.degree() > 1) continue;
    rows.push_back({names, rp->num.coefficient({1, 0}), rp->num.coefficient({0, 1}), rp->num.coefficient({0, 0}),
                    rp->den});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const Linear& p = rows[i];
      const Linear& q = rows[j];
      if (p.unknowns != q.unknowns) continue;
      // Gaussian elimination with partial pivoting on [a b | -c].
      double m[2][3] = {{p.a, p.b, -p.c}, {q.a, q.b, -q.c}};
      if (std::abs(m[1][0]) > std::abs(m[0][0])) std::swap(m[0], m[1]);
      if (m[0][0] == 0.0) continue;
      const double f = m[1][0] / m[0][0];
      for (int k = 0; k < 3; ++k) m[1][k] -= f * m[0][k];
      const double scale = std::max({std::abs(p.a), std::abs(p.b), std::abs(q.a), std::abs(q.b)});
      if (std::abs(m[1][1]) <= 1e-12 * scale) continue;  // dependent rows
      const double v = m[1][2] / m[1][1];
      const double u = (m[0][2] - m[0][1] * v) / m[0][0];
      if (std::abs(p.den.at({u, v})) < 1e-12 || std::abs(q.den.at({u, v})) < 1e-12) {
        throw Error(ErrorCode::DivisionByZero, "solution zeroes a denominator");
      }
      assign(p.unknowns[0], u);
      assign(p.unknowns[1], v);
      return true;
    }
  }
  return false;
}

}  // namespace geoprog::symbolic

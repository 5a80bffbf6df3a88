#include "geoprog/program.hpp"

#include <algorithm>
#include <sstream>

#include "geoprog/error.hpp"

namespace geoprog::program {

namespace {

using O = Operator;

// Slot orders follow the theorem formula; the answer slot is usually first
// for "compute X from" operators and last for Gougu/Sum, matching the
// programs "Gougu N0 V1 V0" and "Multiple V2 C2 V1".
const std::vector<OperatorSpec>& table() {
  static const std::vector<OperatorSpec> kTable = {
      {O::Get, "Get", {"x"}, false, {}, "answer = x", "designates the final answer"},
      {O::Equal, "Equal", {"x", "y"}, false, {{0, 1}}, "x = y", ""},
      {O::Sum, "Sum", {"x", "t"}, true, {}, "x1 + ... + xk = t", "variadic; last operand is the total"},
      {O::Multiple, "Multiple", {"t", "k", "x"}, false, {{1, 2}}, "t = k*x", "'Multiple V2 C2 V1' reads V2 = 2*V1"},
      {O::Ratio, "Ratio", {"t", "x", "y"}, false, {}, "t = x / y", ""},
      {O::Median, "Median", {"m", "a", "b"}, false, {{1, 2}}, "m = (a + b) / 2", "midsegment of a trapezoid"},
      {O::Gougu, "Gougu", {"a", "b", "c"}, false, {{0, 1}}, "a^2 + b^2 = c^2", "legs a, b; hypotenuse c"},
      {O::Gsin, "Gsin", {"opp", "hyp", "theta"}, false, {}, "opp = hyp*sin(theta)", "right-triangle sine"},
      {O::Gcos, "Gcos", {"adj", "hyp", "theta"}, false, {}, "adj = hyp*cos(theta)", "right-triangle cosine"},
      {O::Gtan, "Gtan", {"opp", "adj", "theta"}, false, {}, "opp = adj*tan(theta)", "right-triangle tangent"},
      {O::Sin_Law, "Sin_Law", {"a", "A", "b", "B"}, false, {}, "a*sin(B) = b*sin(A)", "side a opposite angle A"},
      {O::Cos_Law, "Cos_Law", {"c", "a", "b", "C"}, false, {{1, 2}}, "c^2 = a^2 + b^2 - 2*a*b*cos(C)",
       "C is the angle between a and b"},
      {O::Iso_Tri_Ang, "Iso_Tri_Ang", {"base", "apex"}, false, {}, "2*base + apex = 180", "isosceles base angle"},
      {O::Proportion, "Proportion", {"a", "b", "c", "d"}, false, {}, "a*d = b*c", "a/b = c/d"},
      {O::Geo_Mean, "Geo_Mean", {"m", "a", "b"}, false, {{1, 2}}, "m^2 = a*b", ""},
      {O::Chord2_Ang, "Chord2_Ang", {"theta", "arc1", "arc2"}, false, {{1, 2}}, "theta = (arc1 + arc2) / 2",
       "angle between two intersecting chords"},
      {O::TanSec_Ang, "TanSec_Ang", {"theta", "far", "near"}, false, {}, "theta = (far - near) / 2",
       "angle formed outside the circle by tangents or secants"},
      {O::Tria_BH_Area, "Tria_BH_Area", {"S", "b", "h"}, false, {{1, 2}}, "S = b*h / 2", ""},
      {O::Tria_SAS_Area, "Tria_SAS_Area", {"S", "a", "b", "C"}, false, {{1, 2}}, "S = a*b*sin(C) / 2", ""},
      {O::PRK_Perim, "PRK_Perim", {"P", "a", "b"}, false, {{1, 2}}, "P = 2*(a + b)", "parallelogram, rectangle, kite"},
      {O::Para_Area, "Para_Area", {"S", "b", "h"}, false, {{1, 2}}, "S = b*h", ""},
      {O::Rect_Area, "Rect_Area", {"S", "l", "w"}, false, {{1, 2}}, "S = l*w", ""},
      {O::Rhom_Area, "Rhom_Area", {"S", "d1", "d2"}, false, {{1, 2}}, "S = d1*d2 / 2", ""},
      {O::Kite_Area, "Kite_Area", {"S", "d1", "d2"}, false, {{1, 2}}, "S = d1*d2 / 2", ""},
      {O::Trap_Area, "Trap_Area", {"S", "b1", "b2", "h"}, false, {{1, 2}}, "S = (b1 + b2)*h / 2", ""},
      {O::Circle_R_Circum, "Circle_R_Circum", {"c", "r"}, false, {}, "c = 2*pi*r", ""},
      {O::Circle_D_Circum, "Circle_D_Circum", {"c", "d"}, false, {}, "c = pi*d", ""},
      {O::Circle_R_Area, "Circle_R_Area", {"S", "r"}, false, {}, "S = pi*r^2", ""},
      {O::Circle_D_Area, "Circle_D_Area", {"S", "d"}, false, {}, "S = pi*d^2 / 4", ""},
      {O::ArcSeg_Area, "ArcSeg_Area", {"S", "theta", "r"}, false, {},
       "S = (theta/360)*pi*r^2 - r^2*sin(theta) / 2", "circular segment (sector minus triangle)"},
      {O::Ngon_Angsum, "Ngon_Angsum", {"T", "n"}, false, {}, "T = (n - 2)*180", "interior angle sum"},
      {O::RNgon_B_Area, "RNgon_B_Area", {"S", "n", "s"}, false, {}, "S = n*s^2 / (4*tan(180/n))",
       "regular n-gon from its side"},
      {O::RNgon_L_Area, "RNgon_L_Area", {"S", "n", "R"}, false, {}, "S = n*R^2*sin(360/n) / 2",
       "regular n-gon from its circumradius"},
      {O::RNgon_H_Area, "RNgon_H_Area", {"S", "n", "a"}, false, {}, "S = n*a^2*tan(180/n)",
       "regular n-gon from its apothem"},
  };
  return kTable;
}

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

std::string constant_token(double v) {
  std::ostringstream os;
  os << 'C' << v;
  return os.str();
}

}  // namespace

const OperatorSpec& spec(Operator op) { return table()[static_cast<std::size_t>(op)]; }

std::span<const OperatorSpec> all_operators() { return table(); }

std::string_view name(Operator op) { return spec(op).name; }

std::optional<Operator> operator_from_name(std::string_view n) {
  for (const auto& s : table()) {
    if (s.name == n) return s.op;
  }
  return std::nullopt;
}

std::size_t arity(Operator op) {
  const auto& s = spec(op);
  return s.variadic ? 3 : s.slots.size();
}

bool arity_ok(Operator op, std::size_t n) { return spec(op).variadic ? n >= arity(op) : n == arity(op); }

std::vector<std::vector<int>> commutative_groups(Operator op, std::size_t operand_count) {
  if (op == Operator::Sum) {
    std::vector<int> addends;
    for (std::size_t i = 0; i + 1 < operand_count; ++i) addends.push_back(static_cast<int>(i));
    return {addends};
  }
  return spec(op).commutative;
}

std::optional<Constant> constant_for(double value) {
  for (std::size_t i = 0; i < kConstants.size(); ++i) {
    if (kConstants[i] == value) return Constant{static_cast<int>(i)};
  }
  return std::nullopt;
}

std::optional<Operand> operand_from_token(std::string_view t) {
  if (t.size() == 1 && t[0] >= 'a' && t[0] <= 'z') return Argument{t[0]};
  if (t.size() < 2) return std::nullopt;
  const std::string_view rest = t.substr(1);
  auto small_index = [&](int max) -> std::optional<int> {
    if (!std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    if (rest.size() > 2 || (rest.size() > 1 && rest[0] == '0')) return std::nullopt;
    const int k = std::stoi(std::string(rest));
    if (k > max) return std::nullopt;
    return k;
  };
  switch (t[0]) {
    case 'N':
      if (auto k = small_index(kMaxProblemIndex)) return ProblemVar{*k};
      return std::nullopt;
    case 'V':
      if (auto k = small_index(kMaxProcessIndex)) return ProcessVar{*k};
      return std::nullopt;
    case 'C':
      for (std::size_t i = 0; i < kConstants.size(); ++i) {
        if (constant_token(kConstants[i]) == t) return Constant{static_cast<int>(i)};
      }
      return std::nullopt;
    default: return std::nullopt;
  }
}

std::string operand_token(const Operand& o) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ProblemVar>) {
          return "N" + std::to_string(x.index);
        } else if constexpr (std::is_same_v<T, ProcessVar>) {
          return "V" + std::to_string(x.index);
        } else if constexpr (std::is_same_v<T, Argument>) {
          return std::string(1, x.letter);
        } else {
          return constant_token(x.value());
        }
      },
      o);
}

int class_rank(const Operand& o) {
  switch (o.index()) {
    case 2: return 0;  // argument
    case 1: return 1;  // process variable
    case 0: return 2;  // problem variable
    default: return 3; // constant
  }
}

namespace {

int index_key(const Operand& o) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Argument>) {
          return x.letter;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.slot;
        } else {
          return x.index;
        }
      },
      o);
}

}  // namespace

SolutionProgram::SolutionProgram(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) fail(ErrorCode::EmptyProgram, "a solution program needs at least one step");
  for (const auto& s : steps_) {
    if (!arity_ok(s.op, s.operands.size())) {
      fail(ErrorCode::ArityMismatch, std::string(name(s.op)) + " takes " +
                                         (spec(s.op).variadic ? "at least " : "") + std::to_string(arity(s.op)) +
                                         " operands, got " + std::to_string(s.operands.size()));
    }
  }
}

SolutionProgram parse_program(std::span<const std::string> tokens) {
  std::vector<Step> steps;
  for (const auto& tok : tokens) {
    if (auto op = operator_from_name(tok)) {
      steps.push_back({*op, {}});
    } else if (auto operand = operand_from_token(tok)) {
      if (steps.empty()) fail(ErrorCode::LeadingOperand, "program starts with operand '" + tok + "'");
      steps.back().operands.push_back(*operand);
    } else {
      fail(ErrorCode::UnknownToken, "'" + tok + "'");
    }
  }
  return SolutionProgram(std::move(steps));
}

SolutionProgram parse_program(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream is{std::string(text)};
  for (std::string t; is >> t;) tokens.push_back(t);
  return parse_program(std::span<const std::string>(tokens));
}

std::vector<std::string> serialize_program(const SolutionProgram& p) {
  std::vector<std::string> out;
  for (const auto& s : p.steps()) {
    out.emplace_back(name(s.op));
    for (const auto& o : s.operands) out.push_back(operand_token(o));
  }
  return out;
}

std::string to_string(const SolutionProgram& p) {
  std::string out;
  for (const auto& t : serialize_program(p)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Step normalize_step(const Step& step) {
  Step out = step;
  for (const auto& group : commutative_groups(step.op, step.operands.size())) {
    std::vector<Operand> members;
    for (int slot : group) members.push_back(step.operands[static_cast<std::size_t>(slot)]);
    std::sort(members.begin(), members.end(), [](const Operand& a, const Operand& b) {
      return std::pair(class_rank(a), index_key(a)) < std::pair(class_rank(b), index_key(b));
    });
    for (std::size_t i = 0; i < group.size(); ++i) out.operands[static_cast<std::size_t>(group[i])] = members[i];
  }
  return out;
}

SolutionProgram normalize_program(const SolutionProgram& p) {
  std::vector<Step> steps;
  steps.reserve(p.size());
  for (const auto& s : p.steps()) steps.push_back(normalize_step(s));
  return SolutionProgram(std::move(steps));
}

bool CandidateVocab::contains(const Operand& o) const {
  if (const auto* n = std::get_if<ProblemVar>(&o)) return problem_indices.contains(n->index);
  if (const auto* a = std::get_if<Argument>(&o)) return arguments.contains(a->letter);
  return true;
}

std::vector<std::string> CandidateVocab::tokens() const {
  std::vector<std::string> out;
  for (int k = 0; k <= kMaxProcessIndex; ++k) out.push_back("V" + std::to_string(k));
  for (double c : kConstants) out.push_back(constant_token(c));
  for (int k : problem_indices) out.push_back("N" + std::to_string(k));
  for (char a : arguments) out.emplace_back(1, a);
  return out;
}

std::string to_string(const Violation& v) {
  const std::string what = v.kind == Violation::Kind::OutOfVocab ? "OutOfVocab" : "UndefinedProcessVariable";
  return what + "(" + operand_token(v.operand) + ") at step " + std::to_string(v.step);
}

std::vector<Violation> validate_program(const SolutionProgram& p, const CandidateVocab& vocab) {
  std::vector<Violation> out;
  std::set<int> introduced;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Step& s = p.steps()[i];
    for (const auto& o : s.operands) {
      if (!vocab.contains(o)) out.push_back({Violation::Kind::OutOfVocab, o, i});
      if (const auto* v = std::get_if<ProcessVar>(&o); v && !introduced.contains(v->index)) {
        if (s.op == Operator::Get) {
          out.push_back({Violation::Kind::UndefinedProcessVariable, o, i});
        }
      }
    }
    if (s.op != Operator::Get) {
      for (const auto& o : s.operands) {
        if (const auto* v = std::get_if<ProcessVar>(&o)) introduced.insert(v->index);
      }
    }
  }
  return out;
}

}  // namespace geoprog::program

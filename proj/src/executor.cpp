#include "geoprog/executor.hpp"

#include <cmath>
#include <sstream>

#include "geoprog/error.hpp"

namespace geoprog::executor {

using program::Operator;
using symbolic::Equation;
using symbolic::Expression;

namespace {

Expression num(std::int64_t n) { return Expression::integer(n); }
Expression half() { return Expression::rational({1, 2}); }

}  // namespace

ProblemEnv make_env(const std::vector<clause::ProblemVariable>& vars) {
  ProblemEnv env;
  for (const auto& v : vars) env[v.index] = v.text;
  return env;
}

std::vector<Equation> instantiate(Operator op, std::span<const Expression> s) {
  const Expression pi = Expression::pi();
  switch (op) {
    case Operator::Get: return {};
    case Operator::Equal: return {{s[0], s[1]}};
    case Operator::Sum: {
      Expression total = s[0];
      for (std::size_t i = 1; i + 1 < s.size(); ++i) total = total + s[i];
      return {{total, s.back()}};
    }
    case Operator::Multiple: return {{s[0], s[1] * s[2]}};
    case Operator::Ratio: return {{s[0], s[1] / s[2]}};
    case Operator::Median: return {{s[0], (s[1] + s[2]) * half()}};
    case Operator::Gougu: return {{pow(s[0], 2) + pow(s[1], 2), pow(s[2], 2)}};
    case Operator::Gsin: return {{s[0], s[1] * sin(s[2])}};
    case Operator::Gcos: return {{s[0], s[1] * cos(s[2])}};
    case Operator::Gtan: return {{s[0], s[1] * tan(s[2])}};
    case Operator::Sin_Law: return {{s[0] * sin(s[3]), s[2] * sin(s[1])}};
    case Operator::Cos_Law:
      return {{pow(s[0], 2), pow(s[1], 2) + pow(s[2], 2) - num(2) * s[1] * s[2] * cos(s[3])}};
    case Operator::Iso_Tri_Ang: return {{num(2) * s[0] + s[1], num(180)}};
    case Operator::Proportion: return {{s[0] * s[3], s[1] * s[2]}};
    case Operator::Geo_Mean: return {{pow(s[0], 2), s[1] * s[2]}};
    case Operator::Chord2_Ang: return {{s[0], (s[1] + s[2]) * half()}};
    case Operator::TanSec_Ang: return {{s[0], (s[1] - s[2]) * half()}};
    case Operator::Tria_BH_Area: return {{s[0], s[1] * s[2] * half()}};
    case Operator::Tria_SAS_Area: return {{s[0], s[1] * s[2] * sin(s[3]) * half()}};
    case Operator::PRK_Perim: return {{s[0], num(2) * (s[1] + s[2])}};
    case Operator::Para_Area: return {{s[0], s[1] * s[2]}};
    case Operator::Rect_Area: return {{s[0], s[1] * s[2]}};
    case Operator::Rhom_Area: return {{s[0], s[1] * s[2] * half()}};
    case Operator::Kite_Area: return {{s[0], s[1] * s[2] * half()}};
    case Operator::Trap_Area: return {{s[0], (s[1] + s[2]) * s[3] * half()}};
    case Operator::Circle_R_Circum: return {{s[0], num(2) * pi * s[1]}};
    case Operator::Circle_D_Circum: return {{s[0], pi * s[1]}};
    case Operator::Circle_R_Area: return {{s[0], pi * pow(s[1], 2)}};
    case Operator::Circle_D_Area: return {{s[0], pi * pow(s[1], 2) / num(4)}};
    case Operator::ArcSeg_Area:
      // Circular segment: sector minus the isosceles triangle on the chord.
      return {{s[0], s[1] / num(360) * pi * pow(s[2], 2) - half() * pow(s[2], 2) * sin(s[1])}};
    case Operator::Ngon_Angsum: return {{s[0], (s[1] - num(2)) * num(180)}};
    case Operator::RNgon_B_Area: return {{s[0], s[1] * pow(s[2], 2) / (num(4) * tan(num(180) / s[1]))}};
    case Operator::RNgon_L_Area: return {{s[0], half() * s[1] * pow(s[2], 2) * sin(num(360) / s[1])}};
    case Operator::RNgon_H_Area: return {{s[0], s[1] * pow(s[2], 2) * tan(num(180) / s[1])}};
  }
  return {};
}

Expression bind_operand(const program::Operand& o, const ProblemEnv& env) {
  return std::visit(
      [&](const auto& x) -> Expression {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, program::ProblemVar>) {
          auto it = env.find(x.index);
          if (it == env.end()) {
            throw Error(ErrorCode::UnboundProblemVariable, "N" + std::to_string(x.index) + " is not in the problem");
          }
          return symbolic::parse_expression(it->second);
        } else if constexpr (std::is_same_v<T, program::ProcessVar>) {
          return Expression::symbol("V" + std::to_string(x.index));
        } else if constexpr (std::is_same_v<T, program::Argument>) {
          return Expression::symbol(std::string(1, x.letter));
        } else {
          const double v = x.value();
          if (v == 0.5) return half();
          return num(static_cast<std::int64_t>(v));
        }
      },
      o);
}

ExecutionResult execute(const program::SolutionProgram& p, const ProblemEnv& env) {
  try {
    symbolic::ConstraintStore store;
    std::optional<Expression> answer;
    ExecutionResult result;
    for (const auto& raw : p.steps()) {
      const auto step = program::normalize_step(raw);
      std::vector<Expression> slots;
      slots.reserve(step.operands.size());
      for (const auto& o : step.operands) slots.push_back(bind_operand(o, env));
      if (step.op == Operator::Get) {
        answer = slots[0];
      } else {
        for (auto& eq : instantiate(step.op, slots)) store.add_equation(std::move(eq));
      }
      ++result.steps_executed;
    }
    if (!answer) throw NotExecutable(ErrorCode::NoGetStep, "program has no Get step");
    const Expression resolved = symbolic::substitute(*answer, store.bindings());
    for (const auto& sym : symbolic::free_symbols(resolved)) {
      if (store.is_constrained(sym)) {
        throw NotExecutable(ErrorCode::NonlinearSystem, sym + " stays coupled in the pending equations");
      }
      throw NotExecutable(ErrorCode::UnboundAnswer, sym + " is never determined");
    }
    result.answer = symbolic::evaluate(resolved);
    if (!std::isfinite(result.answer)) throw NotExecutable(ErrorCode::DomainError, "answer is not finite");
    result.bindings = store.bindings();
    return result;
  } catch (const NotExecutable&) {
    throw;
  } catch (const Error& e) {
    throw NotExecutable(e.code(), e.what());
  }
}

bool is_executable(const program::SolutionProgram& p, const ProblemEnv& env) {
  try {
    execute(p, env);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_executable(std::span<const std::string> tokens, const ProblemEnv& env) {
  try {
    return is_executable(program::parse_program(tokens), env);
  } catch (const Error&) {
    return false;
  }
}

std::string formula_reference() {
  std::ostringstream os;
  os << "| Operator | Slots | Formula | Commutative slots | Notes |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& s : program::all_operators()) {
    os << "| " << s.name << " | ";
    for (std::size_t i = 0; i < s.slots.size(); ++i) {
      if (i) os << ", ";
      os << s.slots[i];
      if (s.variadic && i == 0) os << "...";
    }
    os << " | `" << s.formula << "` | ";
    if (s.variadic) {
      os << "all addends";
    } else if (s.commutative.empty()) {
      os << "-";
    } else {
      for (const auto& g : s.commutative) {
        os << "{";
        for (std::size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << s.slots[static_cast<std::size_t>(g[i])];
        os << "}";
      }
    }
    os << " | " << s.note << " |\n";
  }
  return os.str();
}

}  // namespace geoprog::executor

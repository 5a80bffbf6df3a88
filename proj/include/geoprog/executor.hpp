#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "geoprog/clause.hpp"
#include "geoprog/program.hpp"
#include "geoprog/symbolic.hpp"

namespace geoprog::executor {

/// N index -> expression text, as produced by assign_problem_variables.
using ProblemEnv = std::map<int, std::string>;

ProblemEnv make_env(const std::vector<clause::ProblemVariable>& vars);

/// Theorem equations of one step, instantiated over its operand expressions.
/// Get yields no equations.
std::vector<symbolic::Equation> instantiate(program::Operator op, std::span<const symbolic::Expression> slots);

/// N(k) -> parsed expression k, V(k) -> symbol "Vk", argument -> its letter,
/// constant -> exact value. Throws UnboundProblemVariable.
symbolic::Expression bind_operand(const program::Operand& o, const ProblemEnv& env);

struct ExecutionResult {
  double answer = 0.0;
  symbolic::Bindings bindings;
  std::size_t steps_executed = 0;
};

/// Runs the steps in order against one constraint store. Each step's
/// commutative groups are put in canonical order before instantiation, so
/// permuting them never changes the floating-point result. The answer is the
/// operand of the last Get. Throws NotExecutable carrying the cause.
ExecutionResult execute(const program::SolutionProgram& p, const ProblemEnv& env);

bool is_executable(const program::SolutionProgram& p, const ProblemEnv& env);
/// Also false when the tokens do not form a program.
bool is_executable(std::span<const std::string> tokens, const ProblemEnv& env);

/// Markdown table of every operator: slots, formula, commutative groups.
std::string formula_reference();

}  // namespace geoprog::executor

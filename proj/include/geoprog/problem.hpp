#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoprog/clause.hpp"
#include "geoprog/executor.hpp"
#include "geoprog/program.hpp"

namespace geoprog {

/// One annotated problem: diagram clauses, question text, program, answer.
struct GeometryProblem {
  std::string id;
  std::string problem_type;
  std::vector<clause::StructuralClause> structural;
  std::vector<clause::SemanticClause> semantic;
  std::string problem_text;
  /// Always equal to assign_problem_variables(semantic, problem_text).
  std::vector<clause::ProblemVariable> variables;
  std::optional<program::SolutionProgram> program;
  double answer = 0.0;
  std::optional<std::array<double, 4>> choices;
  std::string diagram_path;
  /// Split name -> "train" | "test", e.g. {"geometry3k": "test"}.
  std::map<std::string, std::string> splits;

  executor::ProblemEnv env() const { return executor::make_env(variables); }

  /// Recomputes `variables` from the clauses and text.
  void refresh_variables() { variables = clause::assign_problem_variables(semantic, problem_text); }
};

}  // namespace geoprog

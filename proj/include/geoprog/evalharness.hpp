#pragma once

// Scoring of ranked candidate programs: Completion (first executable),
// Choice (nearest of four options, random when nothing runs) and Top-3,
// each at answer level and program level.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoprog/problem.hpp"
#include "geoprog/rng.hpp"

namespace geoprog::evalharness {

inline constexpr std::size_t kDefaultBeam = 10;

/// |pred - gt| <= 1e-2 * max(1, |gt|).
struct Tolerance {
  double relative = 1e-2;
  bool matches(double pred, double gt) const;
};

/// Ranked decoder output for one problem. Entries are raw token lists so
/// malformed candidates can be scored (as non-executable).
struct CandidateList {
  std::string problem_id;
  std::vector<std::vector<std::string>> programs;
};

struct Candidate {
  std::optional<program::SolutionProgram> program;  // empty when it does not parse
  std::optional<double> answer;                     // empty when it does not execute
};

/// Parses and executes at most `beam` candidates in rank order.
std::vector<Candidate> run_candidates(const CandidateList& cands, const GeometryProblem& prob,
                                      std::size_t beam = kDefaultBeam);

struct Verdict {
  bool answer_correct = false;
  bool program_correct = false;
};

Verdict eval_completion(std::span<const Candidate> cands, const GeometryProblem& prob, const Tolerance& tol = {});
/// Throws MissingChoices when the problem has no four options.
Verdict eval_choice(std::span<const Candidate> cands, const GeometryProblem& prob, Rng& rng,
                    const Tolerance& tol = {});
/// Looks at the first three executable candidates, so a Completion hit is
/// always a Top-3 hit.
Verdict eval_top3(std::span<const Candidate> cands, const GeometryProblem& prob, const Tolerance& tol = {});

/// Index of the option closest to `value`; ties go to the lower index.
std::size_t nearest_choice(double value, const std::array<double, 4>& choices);
/// Index of the option equal to the ground-truth answer (closest if none is).
std::size_t ground_truth_choice(const GeometryProblem& prob);

/// Token equality after normalizing both programs.
bool program_match(const program::SolutionProgram& pred, const program::SolutionProgram& gt);

enum class Pattern { Completion, Choice, Top3 };
std::string_view name(Pattern p);
std::optional<Pattern> pattern_from_name(std::string_view s);

struct ProblemVerdicts {
  std::string id;
  Verdict completion, choice, top3;
  bool has_choice = false;
};

struct EvalReport {
  std::size_t count = 0;         // problems scored
  std::size_t choice_count = 0;  // problems with four options
  double completion_answer = 0, completion_program = 0;
  double choice_answer = 0, choice_program = 0;
  double top3_answer = 0, top3_program = 0;
  std::vector<ProblemVerdicts> problems;

  std::string to_text() const;
};

/// Scores every problem that has a candidate list. The Choice fallback of
/// problem `id` draws from the stream keyed by (seed, id).
EvalReport evaluate(std::span<const GeometryProblem> problems, std::span<const CandidateList> candidates,
                    std::uint64_t seed, std::size_t beam = kDefaultBeam, const Tolerance& tol = {});

struct DatasetStats {
  std::size_t count = 0;
  double avg_operators = 0;       // mean step count
  double avg_program_length = 0;  // mean token count
  std::map<std::string, std::size_t> per_type;
};

/// Throws EmptyDataset. The averages cover problems that carry a program.
DatasetStats dataset_stats(std::span<const GeometryProblem> problems);

}  // namespace geoprog::evalharness

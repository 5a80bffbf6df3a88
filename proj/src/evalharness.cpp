#include "geoprog/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "geoprog/error.hpp"
#include "geoprog/executor.hpp"

namespace geoprog::evalharness {

namespace {

const Candidate* first_executable(std::span<const Candidate> cands) {
  for (const auto& c : cands) {
    if (c.answer) return &c;
  }
  return nullptr;
}

bool matches_gt_program(const Candidate& c, const GeometryProblem& prob) {
  return c.program && prob.program && program_match(*c.program, *prob.program);
}

double ratio(std::size_t hits, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

bool Tolerance::matches(double pred, double gt) const {
  return std::isfinite(pred) && std::abs(pred - gt) <= relative * std::max(1.0, std::abs(gt));
}

std::vector<Candidate> run_candidates(const CandidateList& cands, const GeometryProblem& prob, std::size_t beam) {
  std::vector<Candidate> out;
  const auto env = prob.env();
  const std::size_t n = std::min(beam, cands.programs.size());
  for (std::size_t i = 0; i < n; ++i) {
    Candidate c;
    try {
      c.program = program::parse_program(cands.programs[i]);
      c.answer = executor::execute(*c.program, env).answer;
    } catch (const Error&) {
    }
    out.push_back(std::move(c));
  }
  return out;
}

Verdict eval_completion(std::span<const Candidate> cands, const GeometryProblem& prob, const Tolerance& tol) {
  const Candidate* c = first_executable(cands);
  if (!c) return {};
  return {tol.matches(*c->answer, prob.answer), matches_gt_program(*c, prob)};
}

std::size_t nearest_choice(double value, const std::array<double, 4>& choices) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < choices.size(); ++i) {
    if (std::abs(choices[i] - value) < std::abs(choices[best] - value)) best = i;
  }
  return best;
}

std::size_t ground_truth_choice(const GeometryProblem& prob) {
  if (!prob.choices) throw Error(ErrorCode::MissingChoices, "problem " + prob.id + " has no choices");
  return nearest_choice(prob.answer, *prob.choices);
}

Verdict eval_choice(std::span<const Candidate> cands, const GeometryProblem& prob, Rng& rng, const Tolerance&) {
  const std::size_t gt = ground_truth_choice(prob);
  const Candidate* c = first_executable(cands);
  if (!c) return {rng.below(4) == gt, false};
  return {nearest_choice(*c->answer, *prob.choices) == gt, matches_gt_program(*c, prob)};
}

Verdict eval_top3(std::span<const Candidate> cands, const GeometryProblem& prob, const Tolerance& tol) {
  Verdict v;
  std::size_t seen = 0;
  for (const auto& c : cands) {
    if (!c.answer) continue;
    if (++seen > 3) break;
    v.answer_correct = v.answer_correct || tol.matches(*c.answer, prob.answer);
    v.program_correct = v.program_correct || matches_gt_program(c, prob);
  }
  return v;
}

bool program_match(const program::SolutionProgram& pred, const program::SolutionProgram& gt) {
  return program::serialize_program(program::normalize_program(pred)) ==
         program::serialize_program(program::normalize_program(gt));
}

std::string_view name(Pattern p) {
  switch (p) {
    case Pattern::Completion: return "completion";
    case Pattern::Choice: return "choice";
    case Pattern::Top3: return "top3";
  }
  return "?";
}

std::optional<Pattern> pattern_from_name(std::string_view s) {
  for (auto p : {Pattern::Completion, Pattern::Choice, Pattern::Top3}) {
    if (name(p) == s) return p;
  }
  return std::nullopt;
}

EvalReport evaluate(std::span<const GeometryProblem> problems, std::span<const CandidateList> candidates,
                    std::uint64_t seed, std::size_t beam, const Tolerance& tol) {
  std::map<std::string, const CandidateList*> by_id;
  for (const auto& c : candidates) by_id.emplace(c.problem_id, &c);

  EvalReport r;
  std::size_t ca = 0, cp = 0, ha = 0, hp = 0, ta = 0, tp = 0;
  for (const auto& prob : problems) {
    auto it = by_id.find(prob.id);
    if (it == by_id.end()) continue;
    const auto cands = run_candidates(*it->second, prob, beam);
    ProblemVerdicts pv{prob.id, eval_completion(cands, prob, tol), {}, eval_top3(cands, prob, tol), false};
    if (prob.choices) {
      Rng rng = Rng::keyed(seed, prob.id);
      pv.choice = eval_choice(cands, prob, rng, tol);
      pv.has_choice = true;
      ++r.choice_count;
      ha += pv.choice.answer_correct;
      hp += pv.choice.program_correct;
    }
    ++r.count;
    ca += pv.completion.answer_correct;
    cp += pv.completion.program_correct;
    ta += pv.top3.answer_correct;
    tp += pv.top3.program_correct;
    r.problems.push_back(std::move(pv));
  }
  r.completion_answer = ratio(ca, r.count);
  r.completion_program = ratio(cp, r.count);
  r.choice_answer = ratio(ha, r.choice_count);
  r.choice_program = ratio(hp, r.choice_count);
  r.top3_answer = ratio(ta, r.count);
  r.top3_program = ratio(tp, r.count);
  return r;
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "problems: " << count << " (with choices: " << choice_count << ")\n";
  os << "pattern      answer    program\n";
  os << "completion   " << completion_answer << "    " << completion_program << "\n";
  os << "choice       " << choice_answer << "    " << choice_program << "\n";
  os << "top3         " << top3_answer << "    " << top3_program << "\n";
  return os.str();
}

DatasetStats dataset_stats(std::span<const GeometryProblem> problems) {
  if (problems.empty()) throw Error(ErrorCode::EmptyDataset, "no problems");
  DatasetStats s;
  s.count = problems.size();
  std::size_t with_program = 0, steps = 0, tokens = 0;
  for (const auto& p : problems) {
    ++s.per_type[p.problem_type];
    if (!p.program) continue;
    ++with_program;
    steps += p.program->size();
    tokens += program::serialize_program(*p.program).size();
  }
  s.avg_operators = ratio(steps, with_program);
  s.avg_program_length = ratio(tokens, with_program);
  return s;
}

}  // namespace geoprog::evalharness

#include <doctest.h>

#include "geoprog/error.hpp"
#include "geoprog/evalharness.hpp"
#include "support.hpp"

using namespace geoprog;
using namespace geoprog::evalharness;

namespace {

std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<Candidate> candidates(const GeometryProblem& p, std::initializer_list<std::string_view> progs) {
  CandidateList list{p.id, {}};
  for (auto s : progs) list.programs.push_back(split(s));
  return run_candidates(list, p);
}

const char* kRight = "Sum N0 N1 V0 Gougu N1 V1 V0 Multiple V2 C2 V1 Get V2";
const char* kRightPermuted = "Sum N1 N0 V0 Gougu V1 N1 V0 Multiple V2 C2 V1 Get V2";
const char* kWrong = "Sum N0 N1 V0 Get V0";          // executes to 5
const char* kBroken = "Gougu N1 V1 V0 Get V1";       // V0 never fixed
const char* kGarbage = "N0 Gougu";

}  // namespace

TEST_CASE("tolerance") {
  Tolerance t;
  CHECK(t.matches(8.005, 8));
  CHECK_FALSE(t.matches(8.2, 8));
  CHECK(t.matches(0.005, 0));
  CHECK(t.matches(1000.5, 1000));
  CHECK_FALSE(t.matches(1011, 1000));
}

TEST_CASE("completion takes the first executable candidate") {
  const auto p = testsupport::chord_problem();
  CHECK(eval_completion(candidates(p, {kRight}), p).answer_correct);
  CHECK(eval_completion(candidates(p, {kBroken, kRight}), p).answer_correct);
  CHECK(eval_completion(candidates(p, {kGarbage, kRight}), p).answer_correct);
  CHECK_FALSE(eval_completion(candidates(p, {kWrong, kRight}), p).answer_correct);
  CHECK_FALSE(eval_completion(candidates(p, {kBroken, kGarbage}), p).answer_correct);

  const auto v = eval_completion(candidates(p, {kRightPermuted}), p);
  CHECK(v.answer_correct);
  CHECK(v.program_correct);
}

TEST_CASE("choice") {
  auto p = testsupport::chord_problem();
  Rng rng(1);
  CHECK(eval_choice(candidates(p, {kRight}), p, rng).answer_correct);
  CHECK_FALSE(eval_choice(candidates(p, {kWrong}), p, rng).answer_correct);  // 5 is nearest to 4 and 6 -> 4

  CHECK(nearest_choice(7, {4, 6, 8, 16}) == 1);
  CHECK(nearest_choice(5, {4, 6, 8, 16}) == 0);
  CHECK(nearest_choice(100, {4, 6, 8, 16}) == 3);

  int hits = 0;
  const auto none = candidates(p, {kBroken});
  for (int i = 0; i < 10000; ++i) {
    Rng r = Rng::keyed(77, std::to_string(i));
    hits += eval_choice(none, p, r).answer_correct;
  }
  CHECK(std::abs(hits / 10000.0 - 0.25) <= 0.02);

  p.choices.reset();
  CHECK_THROWS_AS(eval_choice(none, p, rng), Error);
}

TEST_CASE("top-3") {
  const auto p = testsupport::chord_problem();
  CHECK(eval_top3(candidates(p, {kWrong, kBroken, kRight}), p).answer_correct);
  CHECK_FALSE(eval_top3(candidates(p, {kWrong, kWrong, kWrong, kRight}), p).answer_correct);
  // Non-executable candidates do not use up a slot.
  CHECK(eval_top3(candidates(p, {kBroken, kGarbage, kBroken, kBroken, kRight}), p).answer_correct);
  CHECK(eval_completion(candidates(p, {kBroken, kGarbage, kBroken, kBroken, kRight}), p).answer_correct);
  CHECK(eval_top3(candidates(p, {kWrong, kBroken, kRightPermuted}), p).program_correct);
}

TEST_CASE("program match") {
  using program::parse_program;
  CHECK(program_match(parse_program("Gougu N1 N0 V0 Get V0"), parse_program("Gougu N0 N1 V0 Get V0")));
  CHECK_FALSE(program_match(parse_program("Gougu N0 V0 N1 Get V0"), parse_program("Gougu N0 N1 V0 Get V0")));
  CHECK_FALSE(program_match(parse_program("Get V0 Gougu N0 N1 V0"), parse_program("Gougu N0 N1 V0 Get V0")));
  const auto p = parse_program(kRight);
  CHECK(program_match(p, p));
  CHECK(program_match(parse_program(kRightPermuted), p) == program_match(p, parse_program(kRightPermuted)));
}

TEST_CASE("report") {
  const auto& fx = testsupport::fixtures();
  std::vector<CandidateList> preds;
  for (const auto& p : fx) preds.push_back({p.id, {program::serialize_program(*p.program)}});
  const auto r = evaluate(fx, preds, 3);
  CHECK(r.count == fx.size());
  CHECK(r.completion_answer == 1.0);
  CHECK(r.completion_program == 1.0);
  CHECK(r.choice_answer == 1.0);
  CHECK(r.top3_answer == 1.0);
  CHECK(r.to_text().find("completion") != std::string::npos);

  const auto again = evaluate(fx, preds, 3);
  CHECK(again.to_text() == r.to_text());
  CHECK(pattern_from_name("top3") == Pattern::Top3);
  CHECK(!pattern_from_name("top5"));
}

TEST_CASE("dataset statistics") {
  const auto p = testsupport::chord_problem();
  const auto s = dataset_stats(std::vector<GeometryProblem>{p});
  CHECK(s.avg_operators == 4);
  CHECK(s.avg_program_length == 14);
  CHECK(s.per_type.at("Circle") == 1);
  CHECK_THROWS_AS(dataset_stats(std::vector<GeometryProblem>{}), Error);
}

TEST_CASE("choice and top-3 never score below completion") {
  const auto& fx = testsupport::fixtures();
  for (std::uint64_t set = 0; set < 50; ++set) {
    Rng rng = Rng::keyed(5, std::to_string(set));
    std::vector<CandidateList> preds;
    for (const auto& p : fx) {
      CandidateList l{p.id, {}};
      for (std::uint64_t k = 0, n = 1 + rng.below(6); k < n; ++k) {
        switch (rng.below(3)) {
          case 0: l.programs.push_back(program::serialize_program(*p.program)); break;
          case 1: l.programs.push_back({"Get", "C" + std::string(rng.below(2) ? "2" : "360")}); break;
          default: l.programs.push_back({"Get", "V0"}); break;
        }
      }
      preds.push_back(std::move(l));
    }
    const auto r = evaluate(fx, preds, set);
    CAPTURE(set);
    CHECK(r.choice_answer >= r.completion_answer);
    CHECK(r.top3_answer >= r.completion_answer);
    CHECK(r.top3_program >= r.completion_program);
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geoprog/augment.hpp"
#include "geoprog/corpus.hpp"
#include "geoprog/dataset_io.hpp"
#include "support.hpp"

using namespace geoprog;
using namespace geoprog::augment;

namespace {

std::vector<std::string> semantic_text(const GeometryProblem& p) {
  std::vector<std::string> out;
  for (const auto& c : p.semantic) out.push_back(clause::serialize_clause(c));
  return out;
}

std::vector<std::string> structural_text(const GeometryProblem& p) {
  std::vector<std::string> out;
  for (const auto& c : p.structural) out.push_back(clause::serialize_clause(c));
  return out;
}

double answer(const GeometryProblem& p) { return executor::execute(*p.program, p.env()).answer; }

}  // namespace

TEST_CASE("token replacement renames points everywhere") {
  const auto prob = testsupport::chord_problem();
  Renaming r;
  r.points = {{'B', 'V'}};
  const auto out = apply_renaming(prob, r);
  CHECK(structural_text(out) == std::vector<std::string>{"line V C D", "line E C A", "⊙A lieson E V D"});
  CHECK(semantic_text(out).front() == "VD ⊥ EA on C");
  CHECK(out.problem_text == "Find VD.");
  CHECK(out.program == prob.program);

  CHECK(dataset_io::serialize_record(apply_renaming(prob, Renaming{})) == dataset_io::serialize_record(prob));
}

TEST_CASE("argument renames reach the program") {
  const auto& prob = testsupport::fixture("fx-linear-system");
  Renaming r;
  r.arguments = {{'x', 'z'}, {'y', 'w'}};
  const auto out = apply_renaming(prob, r);
  CHECK(semantic_text(out) == std::vector<std::string>{"AB = 3z + w", "AC = z + 2w"});
  CHECK(out.problem_text == "AB = 11 and AC = 7. Find z.");
  CHECK(program::to_string(*out.program) == "Equal N0 N2 Equal N1 N3 Get z");
  CHECK(answer(out) == answer(prob));
}

TEST_CASE("angle ids are renamed in clauses and text") {
  const auto& prob = testsupport::fixture("fx-vertical-angles");
  Renaming r;
  r.angle_ids = {{1, 7}, {2, 3}};
  const auto out = apply_renaming(prob, r);
  CHECK(semantic_text(out) == std::vector<std::string>{"m ∠7 = 4x + 12", "m ∠3 = 6x - 8"});
  CHECK(out.problem_text == "∠7 and ∠3 are vertical angles. Find m ∠7.");
}

TEST_CASE("renaming twice with the inverse is the identity") {
  for (const auto& p : testsupport::fixtures()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng = Rng::keyed(seed, p.id);
      const auto r = sample_renaming(p, rng);
      const auto back = apply_renaming(apply_renaming(p, r), r.inverse());
      CHECK(dataset_io::serialize_record(back) == dataset_io::serialize_record(p));
    }
  }
}

TEST_CASE("sampled renamings are injective and avoid reserved letters") {
  const auto& prob = testsupport::fixture("fx-linear-system");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = sample_renaming(prob, rng);
    std::set<char> images;
    for (auto [from, to] : r.points) images.insert(to);
    CHECK(images.size() == r.points.size());
    REQUIRE(r.arguments.size() == 2);
    for (auto [from, to] : r.arguments) CHECK(std::string_view("clmpst").find(to) == std::string_view::npos);
  }
}

TEST_CASE("connection rotation") {
  const auto prob = testsupport::chord_problem();
  std::set<std::string> lines, circles;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    const auto s = structural_text(connection_rotate(prob, rng));
    lines.insert(s[0]);
    circles.insert(s[2]);
  }
  CHECK(lines == std::set<std::string>{"line B C D", "line D C B"});
  CHECK(circles.count("⊙A lieson E D B"));
  CHECK(circles.count("⊙A lieson B D E"));
  CHECK(circles.size() == 6);
}

TEST_CASE("representation transposition touches semantic clauses only") {
  const auto prob = testsupport::chord_problem();
  std::set<std::string> perps;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    const auto out = repr_transpose(prob, rng);
    CHECK(structural_text(out) == structural_text(prob));
    CHECK(out.problem_text == prob.problem_text);
    perps.insert(semantic_text(out)[0]);
  }
  CHECK(perps.count("BD ⊥ AE on C"));
  CHECK(perps.size() == 4);

  GeometryProblem angles;
  angles.semantic = {clause::parse_semantic("m ∠STR = m ∠1 = 40")};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    seen.insert(semantic_text(repr_transpose(angles, rng))[0]);
  }
  CHECK(seen == std::set<std::string>{"m ∠STR = m ∠1 = 40", "m ∠RTS = m ∠1 = 40"});
}

TEST_CASE("clause shuffle remaps problem variables") {
  const auto prob = testsupport::chord_problem();
  const auto out = shuffle_clauses(prob, {2, 0, 1});
  CHECK(semantic_text(out) == std::vector<std::string>{"CA = 3", "BD ⊥ EA on C", "EC = 2"});
  CHECK(program::to_string(*out.program) == "Sum N1 N0 V0 Gougu N0 V1 V0 Multiple V2 C2 V1 Get V2");
  CHECK(out.variables[0].text == "3");
  CHECK(answer(out) == answer(prob));
  CHECK(shuffle_clauses(prob, {0, 1, 2}).program == prob.program);

  // Text literals keep their numbers after the semantic ones.
  const auto& sys = testsupport::fixture("fx-linear-system");
  const auto swapped = shuffle_clauses(sys, {1, 0});
  CHECK(program::to_string(*swapped.program) == "Equal N1 N2 Equal N0 N3 Get x");
  CHECK(answer(swapped) == answer(sys));
}

TEST_CASE("every strategy preserves answers and vocabulary validity") {
  for (const auto& p : testsupport::fixtures()) {
    const double base = answer(p);
    for (auto s : kStrategyOrder) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng = strategy_stream(p, seed, s);
        const auto out = apply(s, p, rng);
        CAPTURE(p.id);
        CAPTURE(name(s));
        CHECK(std::abs(answer(out) - base) <= 1e-9 * std::max(1.0, std::abs(base)));
        CHECK(program::validate_program(*out.program, corpus::candidate_vocab(out)).empty());
        CHECK(out.variables == clause::assign_problem_variables(out.semantic, out.problem_text));
      }
    }
  }
}

TEST_CASE("pipeline") {
  const auto& p = testsupport::fixture("fx-proportion");
  CHECK(dataset_io::serialize_record(augment_pipeline(p, {0.0, 9})) == dataset_io::serialize_record(p));

  const auto a = augment_pipeline(p, {1.0, 42});
  const auto b = augment_pipeline(p, {1.0, 42});
  CHECK(dataset_io::serialize_record(a) == dataset_io::serialize_record(b));
  CHECK(augment_pipeline_traced(p, {1.0, 42}).fired == std::array<bool, 4>{true, true, true, true});

  // Output depends on (id, seed) only, not on the problem's position in a dataset.
  GeometryProblem q = p;
  q.id = "other";
  CHECK(dataset_io::serialize_record(augment_pipeline(q, {1.0, 42})) != dataset_io::serialize_record(a));

  std::array<int, 4> fired{};
  GeometryProblem r = p;
  for (int i = 0; i < 10000; ++i) {
    r.id = "draw-" + std::to_string(i);
    const auto t = augment_pipeline_traced(r, {0.5, 7});
    for (std::size_t k = 0; k < 4; ++k) fired[k] += t.fired[k];
  }
  for (int f : fired) CHECK(std::abs(f - 5000) <= 150);
}

TEST_CASE("config presets") {
  CHECK(AugmentConfig::training(1).p == 0.5);
  CHECK(AugmentConfig::pretraining(1).p == 0.7);
}

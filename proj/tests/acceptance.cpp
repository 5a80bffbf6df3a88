// Acceptance run: one PASS/FAIL/SKIP line per criterion. Exit status is 0
// when nothing failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "geoprog/augment.hpp"
#include "geoprog/corpus.hpp"
#include "geoprog/dataset_io.hpp"
#include "geoprog/error.hpp"
#include "geoprog/evalharness.hpp"
#include "geoprog/executor.hpp"
#include "geoprog/symbolic.hpp"
#include "oracles/oracles.hpp"

using namespace geoprog;

namespace {

// Tolerances and sizes.
constexpr double kExactTol = 1e-9;
constexpr double kSolverTol = 1e-6;
constexpr double kMaxRuntimeMs = 10.0;
constexpr int kMinFixtures = 25;
constexpr int kAugmentSeeds = 20;
constexpr int kNormalizeTrials = 1000;
constexpr int kMinCorpusSamples = 1000;
constexpr double kMaskLo = 0.29, kMaskHi = 0.31;
constexpr int kCandidateSets = 500;
constexpr int kFallbackTrials = 10000;
constexpr double kFallbackRate = 0.25, kFallbackTol = 0.02;
constexpr int kEquations = 100;
constexpr int kSystems = 50;
constexpr double kStatsTol = 0.05;
constexpr double kAvgOperators = 2.43, kAvgLength = 7.45;
constexpr std::size_t kGeo3kTrain = 8433, kGeo3kTest = 589;
constexpr std::size_t kPgpsTrain = 8022, kPgpsTest = 1000;

struct Outcome {
  enum class Status { Pass, Fail, Skip } status;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Status::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Status::Skip, std::move(d)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

const std::vector<GeometryProblem>& fixtures() {
  static const auto r = dataset_io::load_dataset(GEOPROG_FIXTURES);
  return r.problems;
}

const GeometryProblem& fixture(std::string_view id) {
  for (const auto& p : fixtures()) {
    if (p.id == id) return p;
  }
  throw std::runtime_error("missing fixture " + std::string(id));
}

double answer_of(const GeometryProblem& p) { return executor::execute(*p.program, p.env()).answer; }

Outcome worked_example() {
  const auto& p = fixture("fx-chord-perp");
  const auto start = std::chrono::steady_clock::now();
  const auto prog = program::parse_program("Sum N0 N1 V0 Gougu N1 V1 V0 Multiple V2 C2 V1 Get V2");
  const double got = executor::execute(prog, p.env()).answer;
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const double ref = oracle::perpendicular_chord({0, 0}, 5, {3, 0}, {1, 0});
  const bool ok = std::abs(got - 8.0) <= kExactTol && std::abs(got - ref) <= kExactTol && ms < kMaxRuntimeMs;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail,
          fmt("answer %.12g, oracle %.12g, %.3f ms", got, ref, ms)};
}

Outcome shuffle_consistency() {
  const auto& p = fixture("fx-chord-perp");
  const auto out = augment::shuffle_clauses(p, {2, 0, 1});
  const auto tokens = program::serialize_program(*out.program);
  const std::vector<std::string> gougu(tokens.begin() + 4, tokens.begin() + 8);
  const bool rewritten = gougu == std::vector<std::string>{"Gougu", "N0", "V1", "V0"};
  const double a = answer_of(p), b = answer_of(out);
  const bool ok = rewritten && std::abs(a - b) <= kExactTol;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail,
          fmt("%s; answer %.12g -> %.12g", program::to_string(*out.program).c_str(), a, b)};
}

Outcome gougu_both_ways() {
  const double fwd = executor::execute(program::parse_program("Gougu C3 C4 V0 Get V0"), {}).answer;
  const double rev = executor::execute(program::parse_program("Gougu V0 C4 C5 Get V0"), {}).answer;
  const bool ok = std::abs(fwd - 5) <= kExactTol && std::abs(rev - 3) <= kExactTol;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail, fmt("Gougu(3,4,V)=%.12g Gougu(V,4,5)=%.12g", fwd, rev)};
}

Outcome augmentation_invariance() {
  const auto& fx = fixtures();
  if (static_cast<int>(fx.size()) < kMinFixtures) return fail(fmt("only %zu fixtures", fx.size()));
  int runs = 0, bad = 0;
  std::string first;
  for (const auto& p : fx) {
    const double base = answer_of(p);
    for (auto s : augment::kStrategyOrder) {
      for (int seed = 0; seed < kAugmentSeeds; ++seed) {
        ++runs;
        try {
          Rng rng = augment::strategy_stream(p, static_cast<std::uint64_t>(seed), s);
          const auto out = augment::apply(s, p, rng);
          const bool same = close(answer_of(out), base, kExactTol);
          const bool valid = program::validate_program(*out.program, corpus::candidate_vocab(out)).empty();
          if (!same || !valid) {
            ++bad;
            if (first.empty()) first = p.id + "/" + std::string(augment::name(s)) + "/" + std::to_string(seed);
          }
        } catch (const std::exception& e) {
          ++bad;
          if (first.empty()) first = p.id + ": " + e.what();
        }
      }
    }
  }
  const std::string d = fmt("%zu fixtures x 4 strategies x %d seeds, %d/%d failed", fx.size(), kAugmentSeeds, bad, runs);
  return bad == 0 ? pass(d) : fail(d + ", first " + first);
}

program::SolutionProgram permute_commutative(const program::SolutionProgram& p, Rng& rng) {
  std::vector<program::Step> steps = p.steps();
  for (auto& s : steps) {
    for (const auto& group : program::commutative_groups(s.op, s.operands.size())) {
      std::vector<program::Operand> vals;
      for (int i : group) vals.push_back(s.operands[static_cast<std::size_t>(i)]);
      rng.shuffle(vals);
      for (std::size_t k = 0; k < group.size(); ++k) s.operands[static_cast<std::size_t>(group[k])] = vals[k];
    }
  }
  return program::SolutionProgram(std::move(steps));
}

Outcome normalization_properties() {
  const auto& fx = fixtures();
  Rng rng = Rng::keyed(11, "normalize");
  int agree = 0;
  for (int t = 0; t < kNormalizeTrials; ++t) {
    const auto& p = fx[rng.below(fx.size())];
    const auto q = permute_commutative(*p.program, rng);
    const auto n = program::normalize_program(q);
    const bool idempotent = program::normalize_program(n) == n;
    const bool canonical = n == program::normalize_program(*p.program);
    bool same = false;
    try {
      const double a = executor::execute(q, p.env()).answer;
      const double b = executor::execute(n, p.env()).answer;
      same = close(a, b, kExactTol) && close(a, p.answer, kExactTol);
    } catch (const std::exception&) {
    }
    agree += idempotent && canonical && same;
  }
  const std::string d = fmt("%d/%d permutations agree", agree, kNormalizeTrials);
  return agree == kNormalizeTrials ? pass(d) : fail(d);
}

Outcome masking_statistics() {
  const auto& fx = fixtures();
  const int per = (kMinCorpusSamples + static_cast<int>(fx.size()) - 1) / static_cast<int>(fx.size());
  std::size_t samples = 0, masked = 0, tokens_total = 0, tags_ok = 0;
  for (const auto& p : fx) {
    const auto tokens = corpus::tokenize_and_tag(p);
    for (const auto& s : corpus::make_masked_samples(tokens, 0.3, 5, static_cast<std::size_t>(per), p.id)) {
      ++samples;
      masked += s.masks.size();
      tokens_total += s.tokens.size();
      bool ok = s.tokens.size() == tokens.size();
      for (std::size_t i = 0; ok && i < tokens.size(); ++i) {
        ok = s.tokens[i].class_tag == tokens[i].class_tag && s.tokens[i].section_tag == tokens[i].section_tag &&
             s.tokens[i].position == tokens[i].position;
      }
      tags_ok += ok;
    }
  }
  const double frac = static_cast<double>(masked) / static_cast<double>(tokens_total);
  const bool ok = samples >= kMinCorpusSamples && frac >= kMaskLo && frac <= kMaskHi && tags_ok == samples;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail,
          fmt("%zu samples, masked fraction %.4f, tags preserved in %zu", samples, frac, tags_ok)};
}

// A candidate that runs to a different value: one constant or problem
// variable swapped for another.
std::vector<std::string> mutate(const GeometryProblem& p, Rng& rng) {
  auto tokens = program::serialize_program(*p.program);
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i][0] == 'C' || tokens[i][0] == 'N') slots.push_back(i);
  }
  if (slots.empty()) return tokens;
  const auto vocab = corpus::candidate_vocab(p).tokens();
  std::vector<std::string> pool;
  for (const auto& t : vocab) {
    if (t[0] == 'C' || t[0] == 'N') pool.push_back(t);
  }
  tokens[slots[rng.below(slots.size())]] = pool[rng.below(pool.size())];
  return tokens;
}

Outcome harness_laws() {
  const auto& fx = fixtures();
  int ordered = 0;
  for (int set = 0; set < kCandidateSets; ++set) {
    Rng rng = Rng::keyed(23, "candidates", std::to_string(set));
    std::vector<evalharness::CandidateList> lists;
    for (const auto& p : fx) {
      evalharness::CandidateList list{p.id, {}};
      const auto n = 1 + rng.below(evalharness::kDefaultBeam);
      for (std::uint64_t k = 0; k < n; ++k) {
        switch (rng.below(4)) {
          case 0: list.programs.push_back(program::serialize_program(*p.program)); break;
          case 1: list.programs.push_back(program::serialize_program(permute_commutative(*p.program, rng))); break;
          case 2: list.programs.push_back(mutate(p, rng)); break;
          default: list.programs.push_back({"Get", "V" + std::to_string(rng.below(7))}); break;
        }
      }
      lists.push_back(std::move(list));
    }
    const auto r = evalharness::evaluate(fx, lists, static_cast<std::uint64_t>(set));
    ordered += r.top3_answer >= r.completion_answer && r.top3_program >= r.completion_program;
  }

  const auto& p = fixture("fx-chord-perp");
  const auto none = evalharness::run_candidates({p.id, {{"Get", "V0"}}}, p);
  int hits = 0;
  for (int t = 0; t < kFallbackTrials; ++t) {
    Rng rng = Rng::keyed(31, "fallback", std::to_string(t));
    hits += evalharness::eval_choice(none, p, rng).answer_correct;
  }
  const double rate = static_cast<double>(hits) / kFallbackTrials;
  const bool ok = ordered == kCandidateSets && std::abs(rate - kFallbackRate) <= kFallbackTol;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail,
          fmt("Top-3 >= Completion in %d/%d reports; fallback rate %.4f", ordered, kCandidateSets, rate)};
}

symbolic::Expression num(double v) { return symbolic::Expression::real(v); }

Outcome solver_vs_oracle() {
  using symbolic::ConstraintStore;
  using symbolic::Expression;
  Rng rng = Rng::keyed(47, "solver");
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); };
  const auto x = Expression::symbol("x");
  int agree = 0, flagged = 0, ambiguous = 0;
  std::string first;
  for (int t = 0; t < kEquations; ++t) {
    const int kind = t % 3;  // linear, quadratic with one positive root, two positive roots
    double a = 0, b = 0, c = 0;
    if (kind == 0) {
      a = pick(1, 9) * (rng.below(2) ? 1 : -1);
      b = pick(-50, 50);
      c = pick(-50, 50);
    } else {
      const double r1 = pick(1, 120) / 4.0;
      const double r2 = kind == 1 ? -pick(1, 120) / 4.0 : r1 + pick(1, 40) / 4.0;
      const double k = pick(1, 5);
      a = k;
      b = -k * (r1 + r2);
      c = k * r1 * r2;
    }
    // kind 0 is a x + b = c; otherwise a x^2 + b x + c = 0.
    std::function<double(double)> f;
    if (kind == 0) {
      f = [=](double v) { return a * v + b - c; };
    } else {
      f = [=](double v) { return (a * v + b) * v + c; };
    }
    auto roots = oracle::grid_scan_roots(f, kind == 0 ? -200.0 : 1e-9, 200.0, 1e-2);
    std::vector<double> positive;
    for (double r : roots) {
      if (kind == 0 || r > 0) positive.push_back(r);
    }
    ConstraintStore s;
    try {
      if (kind == 0) {
        s.add_equation({num(a) * x + num(b), num(c)});
      } else {
        s.add_equation({num(a) * pow(x, 2) + num(b) * x + num(c), Expression::integer(0)});
      }
      const auto v = s.value("x");
      if (positive.size() == 1 && v && std::abs(*v - positive[0]) <= kSolverTol) {
        ++agree;
      } else if (first.empty()) {
        first = fmt("equation %d: solver %g oracle %zu roots", t, v ? *v : NAN, positive.size());
      }
    } catch (const Error& e) {
      if (positive.size() >= 2 && e.code() == ErrorCode::AmbiguousRoot) {
        ++agree;
        ++flagged;
      } else if (first.empty()) {
        first = fmt("equation %d: %s", t, e.what());
      }
    }
    ambiguous += positive.size() >= 2;
  }

  const auto y = Expression::symbol("y");
  int systems = 0;
  for (int t = 0; t < kSystems; ++t) {
    double m[6];
    std::optional<oracle::Solution2> ref;
    do {
      for (double& v : m) v = pick(-12, 12);
      ref = oracle::cramer(m[0], m[1], m[2], m[3], m[4], m[5]);
    } while (!ref);
    ConstraintStore s;
    try {
      s.add_equation({num(m[0]) * x + num(m[1]) * y, num(m[4])});
      s.add_equation({num(m[2]) * x + num(m[3]) * y, num(m[5])});
      const auto vx = s.value("x"), vy = s.value("y");
      if (vx && vy && std::abs(*vx - ref->x) <= kSolverTol && std::abs(*vy - ref->y) <= kSolverTol) {
        ++systems;
      } else if (first.empty()) {
        first = fmt("system %d unsolved", t);
      }
    } catch (const Error& e) {
      if (first.empty()) first = fmt("system %d: %s", t, e.what());
    }
  }
  std::string d = fmt("%d/%d equations (%d/%d ambiguous flagged), %d/%d systems", agree, kEquations, flagged,
                      ambiguous, systems, kSystems);
  const bool ok = agree == kEquations && flagged == ambiguous && systems == kSystems;
  return ok ? pass(d) : fail(d + ", first " + first);
}

Outcome published_dataset() {
  const char* root = std::getenv("GEOPROG_PGPS9K");
  if (!root || !*root) return skip("GEOPROG_PGPS9K not set");
  const auto r = dataset_io::import_pgps9k(root);
  if (r.problems.empty()) return fail(fmt("no problems imported, %zu errors", r.errors.size()));
  const auto stats = evalharness::dataset_stats(r.problems);
  const auto [g_train, g_test] = dataset_io::split_dataset(r.problems, dataset_io::SplitMode::Geometry3K);
  const auto [p_train, p_test] = dataset_io::split_dataset(r.problems, dataset_io::SplitMode::PGPS9K);
  const bool ok = std::abs(stats.avg_operators - kAvgOperators) <= kStatsTol &&
                  std::abs(stats.avg_program_length - kAvgLength) <= kStatsTol && g_train.size() == kGeo3kTrain &&
                  g_test.size() == kGeo3kTest && p_train.size() == kPgpsTrain && p_test.size() == kPgpsTest;
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail,
          fmt("%zu imported, %zu rejected; avg OP %.3f, avg PL %.3f; geometry3k %zu/%zu, pgps9k %zu/%zu",
              r.problems.size(), r.errors.size(), stats.avg_operators, stats.avg_program_length, g_train.size(),
              g_test.size(), p_train.size(), p_test.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked example", worked_example},
      {"shuffle consistency", shuffle_consistency},
      {"Gougu bidirectionality", gougu_both_ways},
      {"augmentation invariance", augmentation_invariance},
      {"normalization properties", normalization_properties},
      {"masking statistics", masking_statistics},
      {"harness ordering laws", harness_laws},
      {"solver vs oracle", solver_vs_oracle},
      {"published dataset statistics", published_dataset},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Status::Pass ? "PASS" : o.status == Outcome::Status::Fail ? "FAIL" : "SKIP";
    failed += o.status == Outcome::Status::Fail;
    std::printf("[%s] %zu %s: %s\n", tag, i + 1, criteria[i].first, o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}

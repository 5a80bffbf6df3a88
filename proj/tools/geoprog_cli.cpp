#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoprog/augment.hpp"
#include "geoprog/corpus.hpp"
#include "geoprog/dataset_io.hpp"
#include "geoprog/error.hpp"
#include "geoprog/evalharness.hpp"
#include "geoprog/executor.hpp"

namespace gp = geoprog;
using nlohmann::json;

namespace {

struct Options {
  std::string in, out, pred, program;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double p = 0.5;
  double ratio = 0.3;
  std::size_t samples = 1;
  std::size_t beam = gp::evalharness::kDefaultBeam;
  std::string pattern = "all";
  std::string mode;
};

// Runs f(i) for i in [0, n) on `jobs` threads. Results must go to slot i.
template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// Loads --in and reports record errors on stderr. Returns false if any.
bool load(const Options& o, std::vector<gp::GeometryProblem>& problems) {
  if (o.in.empty()) throw std::runtime_error("--in is required");
  auto r = gp::dataset_io::load_dataset(o.in);
  for (const auto& e : r.errors) {
    std::cerr << o.in << ":" << e.line << (e.id.empty() ? "" : " [" + e.id + "]") << ": " << e.message << "\n";
  }
  problems = std::move(r.problems);
  return r.errors.empty();
}

int cmd_parse(const Options& o) {
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  Output out(o.out);
  out.stream() << gp::dataset_io::save_dataset_to_string(problems);
  std::cerr << problems.size() << " valid records\n";
  return ok ? 0 : 1;
}

int cmd_exec(const Options& o) {
  if (!o.program.empty()) {
    gp::executor::ProblemEnv env;
    const auto r = gp::executor::execute(gp::program::parse_program(o.program), env);
    std::cout << std::setprecision(17) << r.answer << "\n";
    return 0;
  }
  std::vector<gp::GeometryProblem> problems;
  bool ok = load(o, problems);
  Output out(o.out);
  const gp::evalharness::Tolerance tol;
  for (const auto& p : problems) {
    if (!p.program) continue;
    try {
      const double a = gp::executor::execute(*p.program, p.env()).answer;
      const bool match = tol.matches(a, p.answer);
      ok = ok && match;
      out.stream() << p.id << "\t" << std::setprecision(12) << a << "\t" << p.answer << "\t" << (match ? "ok" : "MISMATCH")
                   << "\n";
    } catch (const gp::Error& e) {
      ok = false;
      out.stream() << p.id << "\terror\t" << e.what() << "\n";
    }
  }
  return ok ? 0 : 1;
}

int cmd_normalize(const Options& o) {
  if (!o.program.empty()) {
    std::cout << gp::program::to_string(gp::program::normalize_program(gp::program::parse_program(o.program))) << "\n";
    return 0;
  }
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  for (auto& p : problems) {
    if (p.program) p.program = gp::program::normalize_program(*p.program);
  }
  Output out(o.out);
  out.stream() << gp::dataset_io::save_dataset_to_string(problems);
  return ok ? 0 : 1;
}

int cmd_augment(const Options& o) {
  if (o.p < 0 || o.p > 1) throw std::runtime_error("--p must be in [0, 1]");
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  std::vector<gp::GeometryProblem> result(problems.size());
  const gp::augment::AugmentConfig cfg{o.p, o.seed};
  parallel_for(problems.size(), o.jobs, [&](std::size_t i) { result[i] = gp::augment::augment_pipeline(problems[i], cfg); });
  Output out(o.out);
  out.stream() << gp::dataset_io::save_dataset_to_string(result);
  return ok ? 0 : 1;
}

int cmd_corpus(const Options& o) {
  if (!(o.ratio > 0 && o.ratio < 1)) throw std::runtime_error("--ratio must be in (0, 1)");
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  std::vector<std::string> lines(problems.size());
  parallel_for(problems.size(), o.jobs, [&](std::size_t i) {
    const auto tokens = gp::corpus::tokenize_and_tag(problems[i]);
    for (const auto& s : gp::corpus::make_masked_samples(tokens, o.ratio, o.seed, o.samples, problems[i].id)) {
      lines[i] += gp::corpus::to_jsonl(s) + "\n";
    }
  });
  Output out(o.out);
  for (const auto& l : lines) out.stream() << l;
  return ok ? 0 : 1;
}

int cmd_vocab(const Options& o) {
  std::vector<gp::GeometryProblem> problems;
  bool ok = load(o, problems);
  Output out(o.out);
  for (const auto& p : problems) {
    const auto tokens = gp::corpus::tokenize_and_tag(p);
    const auto vocab = gp::corpus::candidate_vocab(tokens);
    json j;
    j["id"] = p.id;
    j["vocab"] = vocab.tokens();
    j["locations"] = gp::corpus::copy_locations(tokens).first;
    if (p.program) {
      auto& v = j["violations"] = json::array();
      for (const auto& x : gp::program::validate_program(*p.program, vocab)) v.push_back(gp::program::to_string(x));
      ok = ok && v.empty();
    }
    out.stream() << j.dump() << "\n";
  }
  return ok ? 0 : 1;
}

std::vector<gp::evalharness::CandidateList> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<gp::evalharness::CandidateList> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    gp::evalharness::CandidateList c;
    c.problem_id = j.at("id").get<std::string>();
    for (const auto& cand : j.at("candidates")) {
      std::vector<std::string> tokens;
      if (cand.is_string()) {
        std::istringstream is(cand.get<std::string>());
        for (std::string t; is >> t;) tokens.push_back(t);
      } else {
        tokens = cand.get<std::vector<std::string>>();
      }
      c.programs.push_back(std::move(tokens));
    }
    out.push_back(std::move(c));
  }
  return out;
}

int cmd_eval(const Options& o) {
  if (o.pattern != "all" && !gp::evalharness::pattern_from_name(o.pattern)) {
    throw std::runtime_error("--pattern must be completion, choice, top3 or all");
  }
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  const auto preds = load_predictions(o.pred);
  const auto report = gp::evalharness::evaluate(problems, preds, o.seed, o.beam);
  Output out(o.out);
  if (o.pattern == "all") {
    out.stream() << report.to_text();
  } else {
    const auto p = *gp::evalharness::pattern_from_name(o.pattern);
    const double a = p == gp::evalharness::Pattern::Completion ? report.completion_answer
                     : p == gp::evalharness::Pattern::Choice   ? report.choice_answer
                                                               : report.top3_answer;
    const double g = p == gp::evalharness::Pattern::Completion ? report.completion_program
                     : p == gp::evalharness::Pattern::Choice   ? report.choice_program
                                                               : report.top3_program;
    out.stream() << std::fixed << std::setprecision(4) << o.pattern << "\tanswer " << a << "\tprogram " << g << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_stats(const Options& o) {
  std::vector<gp::GeometryProblem> problems;
  const bool ok = load(o, problems);
  const auto s = gp::evalharness::dataset_stats(problems);
  Output out(o.out);
  auto& os = out.stream();
  os << std::fixed << std::setprecision(2);
  os << "problems: " << s.count << "\navg operators: " << s.avg_operators << "\navg program length: " << s.avg_program_length
     << "\n";
  for (const auto& [type, n] : s.per_type) os << "type " << (type.empty() ? "(none)" : type) << ": " << n << "\n";
  if (!o.mode.empty()) {
    const auto mode = o.mode == "geometry3k" ? gp::dataset_io::SplitMode::Geometry3K : gp::dataset_io::SplitMode::PGPS9K;
    const auto [train, test] = gp::dataset_io::split_dataset(problems, mode);
    os << "split " << o.mode << ": train " << train.size() << ", test " << test.size() << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_import(const Options& o) {
  const auto r = gp::dataset_io::import_pgps9k(o.in);
  for (const auto& e : r.errors) std::cerr << e.id << ": " << e.message << "\n";
  Output out(o.out);
  out.stream() << gp::dataset_io::save_dataset_to_string(r.problems);
  std::cerr << r.problems.size() << " imported, " << r.errors.size() << " rejected\n";
  return r.errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry clause parser, program executor and corpus tools"};
  app.require_subcommand(1);
  Options o;

  auto io = [&](CLI::App* c) {
    c->add_option("--in", o.in, "Input records (JSON lines)");
    c->add_option("--out", o.out, "Output file (default stdout)");
  };

  auto* parse = app.add_subcommand("parse", "Validate records and rewrite them in canonical form");
  io(parse);
  auto* exec = app.add_subcommand("exec", "Execute programs and compare with the recorded answers");
  io(exec);
  exec->add_option("--program", o.program, "Execute one program without a problem");
  auto* norm = app.add_subcommand("normalize", "Sort commutative operands");
  io(norm);
  norm->add_option("--program", o.program, "Normalize one program");
  auto* aug = app.add_subcommand("augment", "Apply the augmentation pipeline");
  io(aug);
  aug->add_option("--p", o.p, "Probability of each strategy")->capture_default_str();
  aug->add_option("--seed", o.seed)->capture_default_str();
  aug->add_option("--jobs", o.jobs)->capture_default_str();
  auto* corp = app.add_subcommand("corpus", "Write masked pre-training samples");
  io(corp);
  corp->add_option("--ratio", o.ratio)->capture_default_str();
  corp->add_option("--samples", o.samples, "Samples per problem")->capture_default_str();
  corp->add_option("--seed", o.seed)->capture_default_str();
  corp->add_option("--jobs", o.jobs)->capture_default_str();
  auto* vocab = app.add_subcommand("vocab", "Candidate vocabulary and copy locations per problem");
  io(vocab);
  auto* eval = app.add_subcommand("eval", "Score candidate programs");
  eval->add_option("--data,--in", o.in, "Problem records")->required();
  eval->add_option("--pred", o.pred, "Candidates: JSON lines {id, candidates}")->required();
  eval->add_option("--out", o.out);
  eval->add_option("--pattern", o.pattern, "completion|choice|top3|all")->capture_default_str();
  eval->add_option("--beam", o.beam)->capture_default_str();
  eval->add_option("--seed", o.seed)->capture_default_str();
  auto* stats = app.add_subcommand("stats", "Program statistics and split sizes");
  io(stats);
  stats->add_option("--split", o.mode, "geometry3k|pgps9k")->check(CLI::IsMember({"geometry3k", "pgps9k"}));
  auto* imp = app.add_subcommand("import-pgps9k", "Convert the published annotation files to records");
  imp->add_option("--root", o.in, "Directory holding PGPS9K/ and optionally Geometry3K/")->required();
  imp->add_option("--out", o.out, "Output file (default stdout)");
  auto* formulas = app.add_subcommand("formulas", "Print the operator formula table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*parse) return cmd_parse(o);
    if (*exec) return cmd_exec(o);
    if (*norm) return cmd_normalize(o);
    if (*aug) return cmd_augment(o);
    if (*corp) return cmd_corpus(o);
    if (*vocab) return cmd_vocab(o);
    if (*eval) return cmd_eval(o);
    if (*stats) return cmd_stats(o);
    if (*imp) return cmd_import(o);
    if (*formulas) {
      std::cout << gp::executor::formula_reference();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

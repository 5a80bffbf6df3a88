#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "geoprog/dataset_io.hpp"
#include "geoprog/error.hpp"
#include "geoprog/evalharness.hpp"
#include "support.hpp"

using namespace geoprog;
using namespace geoprog::dataset_io;

TEST_CASE("fixture corpus loads cleanly") {
  const auto r = load_dataset(GEOPROG_FIXTURES);
  CHECK(r.errors.empty());
  CHECK(r.problems.size() >= 25);
  std::set<program::Operator> used;
  for (const auto& p : r.problems) {
    for (const auto& s : p.program->steps()) used.insert(s.op);
    REQUIRE(p.choices);
    CHECK(evalharness::Tolerance{}.matches((*p.choices)[evalharness::nearest_choice(p.answer, *p.choices)], p.answer));
  }
  CHECK(used.size() == program::kOperatorCount);
}

TEST_CASE("invalid records are reported, valid ones kept") {
  std::ifstream in(GEOPROG_FIXTURES);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  const auto first_end = text.find('\n');
  std::string broken = text.substr(0, first_end);
  broken.replace(broken.find("line B C D"), 10, "line B C B");
  const auto r = load_dataset_from_string(broken + "\n" + text.substr(first_end + 1) + "not json\n\n");
  CHECK(r.problems.size() == testsupport::fixtures().size() - 1);
  REQUIRE(r.errors.size() == 2);
  CHECK(r.errors[0].line == 1);
  CHECK(r.errors[0].id == "fx-chord-perp");
  CHECK(r.errors[0].message.find("SchemaError") == 0);
  CHECK(r.errors[1].id.empty());
}

TEST_CASE("record validation") {
  auto reject = [](const std::string& line) {
    try {
      parse_record(line);
    } catch (const Error& e) {
      return e.code() == ErrorCode::SchemaError;
    }
    return false;
  };
  const std::string base = R"("structural":[],"semantic":["AB = 3"],"text":"Find x.")";
  CHECK_FALSE(reject(R"({"id":"a",)" + base + R"(,"program":["Equal","N0","x","Get","x"],"answer":3})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":["Equal","N1","x","Get","x"],"answer":3})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":["Equal","N0","y","Get","y"],"answer":3})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":["Equal","N0"],"answer":3})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":[],"answer":"abc"})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":[],"answer":3,"choices":[1,2]})"));
  CHECK(reject(R"({"id":"a",)" + base + R"(,"program":[],"answer":3,"split":{"pgps9k":"dev"}})"));
  CHECK(reject(R"({"id":"a","structural":[],"semantic":[],"program":[],"answer":3})"));
  CHECK(reject(R"({"id":"a","structural":["line A"],"semantic":[],"text":"","program":[],"answer":3})"));
}

TEST_CASE("save and load round trip") {
  const auto& fx = testsupport::fixtures();
  const auto text = save_dataset_to_string(fx);
  const auto again = load_dataset_from_string(text);
  CHECK(again.errors.empty());
  CHECK(save_dataset_to_string(again.problems) == text);

  const auto path = std::filesystem::temp_directory_path() / "geoprog_roundtrip.jsonl";
  save_dataset(path, fx);
  CHECK(save_dataset_to_string(load_dataset(path).problems) == text);
  std::filesystem::remove(path);
}

TEST_CASE("splits follow the tags") {
  const auto& fx = testsupport::fixtures();
  for (auto mode : {SplitMode::Geometry3K, SplitMode::PGPS9K}) {
    const auto [train, test] = split_dataset(fx, mode);
    CHECK(train.size() + test.size() == fx.size());
    for (const auto& p : test) CHECK(p.splits.at(std::string(name(mode))) == "test");
    for (const auto& p : train) CHECK(p.splits.at(std::string(name(mode))) == "train");
  }
  auto untagged = fx;
  untagged[3].splits.erase("pgps9k");
  CHECK_THROWS_AS(split_dataset(untagged, SplitMode::PGPS9K), Error);
}

TEST_CASE("importer reads the published layout") {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "geoprog_import_test";
  fs::create_directories(root / "PGPS9K");
  fs::create_directories(root / "Geometry3K");
  std::ofstream(root / "PGPS9K" / "train.json") << R"({"p1": {"diagram": "p1.png", "text": "Find BD.", "type": "Circle",
    "parsing_stru_seqs": ["line B C D", "line E C A", "⊙A lieson E B D"],
    "parsing_sem_seqs": ["BD ⊥ EA on C", "EC = 2", "CA = 3"],
    "expression": "Sum N_0 N_1 V_0 Gougu N_1 V_1 V_0 Multiple V_2 C_2 V_1 Get V_2",
    "answer": "8", "choices": [4, 6, 8, 16]},
    "p2": {"text": "Find x.", "parsing_stru_seqs": [], "parsing_sem_seqs": ["AB = 2x"],
    "expression": ["Multiple", "N_0", "C_0_5", "x", "Get", "x"], "answer": 3}})";
  std::ofstream(root / "PGPS9K" / "test.json") << R"({"p3": {"text": "?", "parsing_stru_seqs": ["line A"],
    "parsing_sem_seqs": [], "expression": "Get V_0", "answer": 1}})";
  std::ofstream(root / "Geometry3K" / "test.json") << R"({"p2": {}})";

  const auto r = import_pgps9k(root);
  REQUIRE(r.problems.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].id == "p3");
  CHECK(r.problems[0].answer == 8);
  CHECK(r.problems[0].splits.at("pgps9k") == "train");
  CHECK(r.problems[0].splits.at("geometry3k") == "train");
  CHECK(r.problems[1].splits.at("geometry3k") == "test");
  CHECK(program::to_string(*r.problems[1].program) == "Multiple N0 C0.5 x Get x");
  fs::remove_all(root);

  CHECK(canonical_program_token("N_10") == "N10");
  CHECK(canonical_program_token("Gougu") == "Gougu");
}

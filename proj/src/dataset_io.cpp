#include "geoprog/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geoprog/corpus.hpp"
#include "geoprog/error.hpp"

namespace geoprog::dataset_io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) schema_error(std::string("field '") + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) schema_error(std::string("field '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

double number_value(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  schema_error(std::string(what) + " is not a number");
}

// Wraps parse failures of nested values so the message says where they were.
template <typename F>
auto in_context(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema_error(where + ": " + e.what());
  }
}

void validate(GeometryProblem& p) {
  in_context("problem variables", [&] {
    p.refresh_variables();
    return 0;
  });
  if (!std::isfinite(p.answer)) schema_error("answer is not finite");
  if (p.program) {
    const auto violations = program::validate_program(*p.program, corpus::candidate_vocab(p));
    if (!violations.empty()) schema_error("program: " + program::to_string(violations.front()));
  }
}

GeometryProblem from_json(const json& j) {
  if (!j.is_object()) schema_error("record must be an object");
  GeometryProblem p;
  p.id = string_field(j, "id");
  p.problem_type = j.contains("type") ? string_field(j, "type") : "";
  p.diagram_path = j.contains("diagram_path") ? string_field(j, "diagram_path") : "";
  for (const auto& s : string_list(j, "structural")) {
    p.structural.push_back(in_context("structural clause '" + s + "'", [&] { return clause::parse_structural(s); }));
  }
  for (const auto& s : string_list(j, "semantic")) {
    p.semantic.push_back(in_context("semantic clause '" + s + "'", [&] { return clause::parse_semantic(s); }));
  }
  p.problem_text = string_field(j, "text");
  const auto tokens = string_list(j, "program");
  if (!tokens.empty()) p.program = in_context("program", [&] { return program::parse_program(tokens); });
  p.answer = number_value(field(j, "answer"), "answer");
  if (auto it = j.find("choices"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 4) schema_error("choices must be a list of 4 numbers");
    std::array<double, 4> c{};
    for (std::size_t i = 0; i < 4; ++i) c[i] = number_value((*it)[i], "choice");
    p.choices = c;
  }
  if (auto it = j.find("split"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) schema_error("split must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string() || (v != "train" && v != "test")) schema_error("split tags must be \"train\" or \"test\"");
      p.splits[k] = v.get<std::string>();
    }
  }
  validate(p);
  return p;
}

json to_json(const GeometryProblem& p) {
  json j;
  j["id"] = p.id;
  j["type"] = p.problem_type;
  j["diagram_path"] = p.diagram_path;
  auto& s = j["structural"] = json::array();
  for (const auto& c : p.structural) s.push_back(clause::serialize_clause(c));
  auto& m = j["semantic"] = json::array();
  for (const auto& c : p.semantic) m.push_back(clause::serialize_clause(c));
  j["text"] = p.problem_text;
  j["program"] = p.program ? program::serialize_program(*p.program) : std::vector<std::string>{};
  j["answer"] = p.answer;
  j["choices"] = p.choices ? json(*p.choices) : json(nullptr);
  j["split"] = p.splits;
  return j;
}

LoadResult load_lines(std::istream& in) {
  LoadResult r;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id;
    try {
      const json j = json::parse(line);
      if (j.is_object() && j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
      r.problems.push_back(from_json(j));
    } catch (const json::exception& e) {
      r.errors.push_back({n, id, std::string("SchemaError: ") + e.what()});
    } catch (const Error& e) {
      r.errors.push_back({n, id, e.what()});
    }
  }
  return r;
}

// --- PGPS9K ---------------------------------------------------------------------

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open " + path.string());
  return json::parse(in);
}

std::vector<std::string> program_tokens(const json& expr) {
  std::vector<std::string> out;
  auto add_all = [&](const std::string& s) {
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(canonical_program_token(tok));
  };
  if (expr.is_string()) {
    add_all(expr.get<std::string>());
  } else if (expr.is_array()) {
    for (const auto& e : expr) add_all(e.get<std::string>());
  }
  return out;
}

json pgps_entry_to_record(const std::string& id, const json& e, const std::map<std::string, std::string>& splits) {
  json r;
  r["id"] = id;
  r["type"] = e.value("type", std::string());
  r["diagram_path"] = e.value("diagram", std::string());
  r["structural"] = e.value("parsing_stru_seqs", std::vector<std::string>{});
  r["semantic"] = e.value("parsing_sem_seqs", std::vector<std::string>{});
  r["text"] = e.value("text", std::string());
  r["program"] = e.contains("expression") ? program_tokens(e["expression"]) : std::vector<std::string>{};
  r["answer"] = e.contains("answer") ? e["answer"] : json(nullptr);
  if (e.contains("choices") && e["choices"].is_array() && e["choices"].size() == 4) r["choices"] = e["choices"];
  r["split"] = splits;
  return r;
}

}  // namespace

GeometryProblem parse_record(std::string_view json_line) {
  try {
    return from_json(json::parse(json_line));
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

std::string serialize_record(const GeometryProblem& prob) { return to_json(prob).dump(); }

LoadResult load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open " + path.string());
  return load_lines(in);
}

LoadResult load_dataset_from_string(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  return load_lines(in);
}

std::string save_dataset_to_string(const std::vector<GeometryProblem>& problems) {
  std::string out;
  for (const auto& p : problems) out += serialize_record(p) + "\n";
  return out;
}

void save_dataset(const std::filesystem::path& path, const std::vector<GeometryProblem>& problems) {
  std::ofstream out(path);
  if (!out) schema_error("cannot write " + path.string());
  out << save_dataset_to_string(problems);
}

std::string_view name(SplitMode m) { return m == SplitMode::Geometry3K ? "geometry3k" : "pgps9k"; }

std::pair<std::vector<GeometryProblem>, std::vector<GeometryProblem>> split_dataset(
    const std::vector<GeometryProblem>& problems, SplitMode mode) {
  const std::string key(name(mode));
  std::pair<std::vector<GeometryProblem>, std::vector<GeometryProblem>> out;
  for (const auto& p : problems) {
    auto it = p.splits.find(key);
    if (it == p.splits.end()) throw Error(ErrorCode::MissingSplitTag, p.id + " has no " + key + " split tag");
    (it->second == "test" ? out.second : out.first).push_back(p);
  }
  return out;
}

std::string canonical_program_token(std::string_view token) {
  std::string t(token);
  if (t.size() >= 3 && (t[0] == 'N' || t[0] == 'V' || t[0] == 'C') && t[1] == '_') {
    std::string rest = t.substr(2);
    for (char& c : rest) {
      if (c == '_') c = '.';
    }
    return t.substr(0, 1) + rest;
  }
  return t;
}

LoadResult import_pgps9k(const std::filesystem::path& root) {
  std::map<std::string, json> entries;
  std::map<std::string, std::map<std::string, std::string>> splits;
  for (const char* part : {"train", "test"}) {
    const auto path = root / "PGPS9K" / (std::string(part) + ".json");
    const json file = read_json_file(path);
    for (const auto& [id, e] : file.items()) {
      entries[id] = e;
      splits[id]["pgps9k"] = part;
    }
  }
  const auto g3k_test = root / "Geometry3K" / "test.json";
  if (std::filesystem::exists(g3k_test)) {
    std::set<std::string> test_ids;
    const json file = read_json_file(g3k_test);
    for (const auto& [id, e] : file.items()) test_ids.insert(id);
    for (auto& [id, tags] : splits) tags["geometry3k"] = test_ids.count(id) ? "test" : "train";
  }

  LoadResult r;
  std::size_t n = 0;
  for (const auto& [id, e] : entries) {
    ++n;
    try {
      r.problems.push_back(from_json(pgps_entry_to_record(id, e, splits[id])));
    } catch (const json::exception& ex) {
      r.errors.push_back({n, id, std::string("SchemaError: ") + ex.what()});
    } catch (const Error& ex) {
      r.errors.push_back({n, id, ex.what()});
    }
  }
  return r;
}

}  // namespace geoprog::dataset_io

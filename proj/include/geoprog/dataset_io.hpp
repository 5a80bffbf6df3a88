#pragma once

// Problem records as JSON lines, dataset splits, and the importer for the
// published PGPS9K annotation files. See docs/record_schema.md.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geoprog/problem.hpp"

namespace geoprog::dataset_io {

/// Throws SchemaError when a field is missing or has the wrong type, a clause
/// or the program does not parse, the program is not vocabulary-valid, or
/// the answer is not finite.
GeometryProblem parse_record(std::string_view json_line);
std::string serialize_record(const GeometryProblem& prob);

struct RecordError {
  std::size_t line = 0;  // 1-based
  std::string id;        // empty when the id itself could not be read
  std::string message;
};

struct LoadResult {
  std::vector<GeometryProblem> problems;
  std::vector<RecordError> errors;
};

/// Blank lines are skipped. Invalid records are reported, not fatal.
LoadResult load_dataset(const std::filesystem::path& path);
LoadResult load_dataset_from_string(std::string_view jsonl);
void save_dataset(const std::filesystem::path& path, const std::vector<GeometryProblem>& problems);
std::string save_dataset_to_string(const std::vector<GeometryProblem>& problems);

enum class SplitMode { Geometry3K, PGPS9K };
std::string_view name(SplitMode m);

/// (train, test) by the split tag of `mode`. Throws MissingSplitTag.
std::pair<std::vector<GeometryProblem>, std::vector<GeometryProblem>> split_dataset(
    const std::vector<GeometryProblem>& problems, SplitMode mode);

/// Reads <root>/PGPS9K/{train,test}.json and, when present,
/// <root>/Geometry3K/{train,test}.json (objects keyed by problem id). The
/// PGPS9K files set the "pgps9k" split tag, the Geometry3K files the
/// "geometry3k" tag.
LoadResult import_pgps9k(const std::filesystem::path& root);

/// Program token spelling of the published files ("N_0", "C_0_5") to ours.
std::string canonical_program_token(std::string_view token);

}  // namespace geoprog::dataset_io

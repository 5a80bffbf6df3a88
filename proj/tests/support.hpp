#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "geoprog/dataset_io.hpp"

namespace testsupport {

inline const std::vector<geoprog::GeometryProblem>& fixtures() {
  static const auto problems = [] {
    auto r = geoprog::dataset_io::load_dataset(GEOPROG_FIXTURES);
    if (!r.errors.empty()) throw std::runtime_error("fixture error: " + r.errors.front().message);
    return r.problems;
  }();
  return problems;
}

inline const geoprog::GeometryProblem& fixture(const std::string& id) {
  for (const auto& p : fixtures()) {
    if (p.id == id) return p;
  }
  throw std::runtime_error("no fixture " + id);
}

/// The worked chord example built by hand, independent of the fixture file.
inline geoprog::GeometryProblem chord_problem() {
  return geoprog::dataset_io::parse_record(
      R"({"id":"chord","type":"Circle","diagram_path":"","structural":["line B C D","line E C A","⊙A lieson E B D"],)"
      R"("semantic":["BD ⊥ EA on C","EC = 2","CA = 3"],"text":"Find BD.",)"
      R"("program":["Sum","N0","N1","V0","Gougu","N1","V1","V0","Multiple","V2","C2","V1","Get","V2"],)"
      R"("answer":8,"choices":[4,6,8,16],"split":{"geometry3k":"train","pgps9k":"train"}})");
}

}  // namespace testsupport

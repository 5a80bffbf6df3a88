#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "geoprog/augment.hpp"
#include "geoprog/corpus.hpp"
#include "geoprog/dataset_io.hpp"
#include "geoprog/error.hpp"
#include "geoprog/evalharness.hpp"
#include "geoprog/executor.hpp"

namespace py = pybind11;
using namespace geoprog;

namespace {

std::vector<std::string> clause_strings(const auto& clauses) {
  std::vector<std::string> out;
  for (const auto& c : clauses) out.push_back(clause::serialize_clause(c));
  return out;
}

py::dict report_dict(const evalharness::EvalReport& r) {
  py::dict d;
  d["count"] = r.count;
  d["choice_count"] = r.choice_count;
  d["completion_answer"] = r.completion_answer;
  d["completion_program"] = r.completion_program;
  d["choice_answer"] = r.choice_answer;
  d["choice_program"] = r.choice_program;
  d["top3_answer"] = r.top3_answer;
  d["top3_program"] = r.top3_program;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometry clause parsing, program execution, augmentation and evaluation";

  static const py::handle error_type = py::exception<Error>(m, "GeoprogError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<GeometryProblem>(m, "Problem")
      .def_static("from_json", &dataset_io::parse_record, py::arg("line"))
      .def("to_json", &dataset_io::serialize_record)
      .def_readonly("id", &GeometryProblem::id)
      .def_readonly("problem_type", &GeometryProblem::problem_type)
      .def_readonly("text", &GeometryProblem::problem_text)
      .def_readonly("answer", &GeometryProblem::answer)
      .def_readonly("choices", &GeometryProblem::choices)
      .def_readonly("splits", &GeometryProblem::splits)
      .def_property_readonly("structural", [](const GeometryProblem& p) { return clause_strings(p.structural); })
      .def_property_readonly("semantic", [](const GeometryProblem& p) { return clause_strings(p.semantic); })
      .def_property_readonly("variables",
                             [](const GeometryProblem& p) {
                               std::vector<std::string> out;
                               for (const auto& v : p.variables) out.push_back(v.text);
                               return out;
                             })
      .def_property_readonly("program",
                             [](const GeometryProblem& p) -> std::optional<std::string> {
                               if (!p.program) return std::nullopt;
                               return program::to_string(*p.program);
                             })
      .def("solve", [](const GeometryProblem& p) {
        if (!p.program) throw Error(ErrorCode::SchemaError, "problem has no program");
        return executor::execute(*p.program, p.env()).answer;
      })
      .def("__repr__", [](const GeometryProblem& p) { return "<Problem " + p.id + ">"; });

  m.def(
      "execute",
      [](const std::string& prog, const std::map<int, std::string>& env) {
        return executor::execute(program::parse_program(prog), env).answer;
      },
      py::arg("program"), py::arg("env") = std::map<int, std::string>{});
  m.def(
      "normalize_program",
      [](const std::string& prog) { return program::to_string(program::normalize_program(program::parse_program(prog))); },
      py::arg("program"));
  m.def(
      "augment",
      [](const GeometryProblem& p, double prob, std::uint64_t seed) {
        return augment::augment_pipeline(p, augment::AugmentConfig{prob, seed});
      },
      py::arg("problem"), py::arg("p") = 0.5, py::arg("seed") = 0);
  m.def(
      "shuffle_clauses",
      [](const GeometryProblem& p, const std::vector<std::size_t>& order) { return augment::shuffle_clauses(p, order); },
      py::arg("problem"), py::arg("order"));
  m.def(
      "tokenize",
      [](const GeometryProblem& p) {
        std::vector<py::tuple> out;
        for (const auto& t : corpus::tokenize_and_tag(p)) {
          out.push_back(py::make_tuple(t.text, std::string(corpus::name(t.class_tag)),
                                       std::string(corpus::name(t.section_tag)), t.problem_variable));
        }
        return out;
      },
      py::arg("problem"));
  m.def(
      "masked_samples",
      [](const GeometryProblem& p, double ratio, std::uint64_t seed, std::size_t k) {
        std::vector<std::string> out;
        for (const auto& s : corpus::make_masked_samples(corpus::tokenize_and_tag(p), ratio, seed, k, p.id)) {
          out.push_back(corpus::to_jsonl(s));
        }
        return out;
      },
      py::arg("problem"), py::arg("ratio") = 0.3, py::arg("seed") = 0, py::arg("samples") = 1);
  m.def(
      "candidate_vocab", [](const GeometryProblem& p) { return corpus::candidate_vocab(p).tokens(); },
      py::arg("problem"));
  m.def(
      "load_dataset",
      [](const std::filesystem::path& path) {
        auto r = dataset_io::load_dataset(path);
        std::vector<py::tuple> errors;
        for (const auto& e : r.errors) errors.push_back(py::make_tuple(e.line, e.id, e.message));
        return py::make_tuple(std::move(r.problems), errors);
      },
      py::arg("path"));
  m.def(
      "evaluate",
      [](const std::vector<GeometryProblem>& problems, const std::map<std::string, std::vector<std::string>>& preds,
         std::uint64_t seed, std::size_t beam) {
        std::vector<evalharness::CandidateList> lists;
        for (const auto& [id, progs] : preds) {
          evalharness::CandidateList l{id, {}};
          for (const auto& s : progs) {
            std::vector<std::string> tokens;
            std::istringstream in(s);
            for (std::string t; in >> t;) tokens.push_back(t);
            l.programs.push_back(std::move(tokens));
          }
          lists.push_back(std::move(l));
        }
        return report_dict(evalharness::evaluate(problems, lists, seed, beam));
      },
      py::arg("problems"), py::arg("predictions"), py::arg("seed") = 0, py::arg("beam") = evalharness::kDefaultBeam);
  m.def(
      "dataset_stats",
      [](const std::vector<GeometryProblem>& problems) {
        const auto s = evalharness::dataset_stats(problems);
        py::dict d;
        d["count"] = s.count;
        d["avg_operators"] = s.avg_operators;
        d["avg_program_length"] = s.avg_program_length;
        d["per_type"] = s.per_type;
        return d;
      },
      py::arg("problems"));
}

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoprog {

enum class ErrorCode {
  // clause_model
  TemplateMismatch,
  DuplicatePoint,
  MixedChainKinds,
  InvalidLabel,
  TooManyVariables,
  // program_lang
  UnknownToken,
  ArityMismatch,
  LeadingOperand,
  EmptyProgram,
  // symbolic
  SyntaxError,
  Inconsistent,
  AmbiguousRoot,
  NonlinearSystem,
  UnboundSymbol,
  DivisionByZero,
  DomainError,
  // executor
  UnboundProblemVariable,
  NoGetStep,
  UnboundAnswer,
  // evalharness / dataset_io
  MissingChoices,
  EmptyDataset,
  SchemaError,
  MissingSplitTag,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the library reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the executor; `code()` names the underlying cause.
class NotExecutable : public Error {
 public:
  using Error::Error;
};

}  // namespace geoprog

#include "geoprog/error.hpp"

namespace geoprog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TemplateMismatch: return "TemplateMismatch";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::MixedChainKinds: return "MixedChainKinds";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::LeadingOperand: return "LeadingOperand";
    case ErrorCode::EmptyProgram: return "EmptyProgram";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::AmbiguousRoot: return "AmbiguousRoot";
    case ErrorCode::NonlinearSystem: return "NonlinearSystem";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnboundProblemVariable: return "UnboundProblemVariable";
    case ErrorCode::NoGetStep: return "NoGetStep";
    case ErrorCode::UnboundAnswer: return "UnboundAnswer";
    case ErrorCode::MissingChoices: return "MissingChoices";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingSplitTag: return "MissingSplitTag";
  }
  return "Unknown";
}

}  // namespace geoprog

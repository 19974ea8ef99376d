#include "blockspec/types.hpp"

#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RhoInvalid: return "RhoInvalid";
    case ErrorCode::EntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::NotIdentifiable: return "NotIdentifiable";
    case ErrorCode::DegenerateFactors: return "DegenerateFactors";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OmegaOutOfRange: return "OmegaOutOfRange";
    case ErrorCode::XiOutOfRange: return "XiOutOfRange";
    case ErrorCode::TooLargeForExact: return "TooLargeForExact";
    case ErrorCode::NoKFound: return "NoKFound";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::LapackFailure: return "LapackFailure";
  }
  return "Unknown";
}

KnowledgeMode parse_knowledge_mode(std::string_view text) {
  if (text == "rows") return KnowledgeMode::RowsDistinct;
  if (text == "columns") return KnowledgeMode::ColumnsDistinct;
  if (text == "neither") return KnowledgeMode::Neither;
  throw Error(ErrorCode::ConfigError, "unknown knowledge mode '" + std::string(text) + "'");
}

std::string_view to_string(KnowledgeMode mode) noexcept {
  switch (mode) {
    case KnowledgeMode::RowsDistinct: return "rows";
    case KnowledgeMode::ColumnsDistinct: return "columns";
    case KnowledgeMode::Neither: return "neither";
  }
  return "rows";
}

}  // namespace blockspec

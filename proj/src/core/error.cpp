#include "scenesmith/core/error.hpp"

namespace scenesmith {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateAabb: return "DegenerateAabb";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::ChildRegionEscapesParent: return "ChildRegionEscapesParent";
    case ErrorCode::UnknownAnchor: return "UnknownAnchor";
    case ErrorCode::UnsupportedRelation: return "UnsupportedRelation";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::UnmatchedTranscript: return "UnmatchedTranscript";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::EmptyTemplate: return "EmptyTemplate";
    case ErrorCode::PipelineError: return "PipelineError";
    case ErrorCode::ClarificationNeeded: return "ClarificationNeeded";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::EmptyOutcomes: return "EmptyOutcomes";
    case ErrorCode::DatasetError: return "DatasetError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(std::string source, std::size_t line, const std::string& message)
    : Error(ErrorCode::ParseError,
            source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

SchemaError::SchemaError(std::string field, const std::string& message)
    : Error(ErrorCode::SchemaError, "schema error in '" + field + "': " + message),
      field_(std::move(field)) {}

}  // namespace scenesmith

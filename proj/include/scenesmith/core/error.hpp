#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenesmith {

enum class ErrorCode {
  DuplicateId,
  EmptyInput,
  DegenerateAabb,
  InvalidArgument,
  IoError,
  ParseError,
  SchemaError,
  DuplicateName,
  DimensionMismatch,
  EmptyIndex,
  InvalidParams,
  OutOfBounds,
  InvalidRegion,
  InvalidSpec,
  DegeneratePath,
  ChildRegionEscapesParent,
  UnknownAnchor,
  UnsupportedRelation,
  TransportError,
  UnmatchedTranscript,
  RateLimited,
  EmptyTemplate,
  PipelineError,
  ClarificationNeeded,
  VersionUnsupported,
  UnresolvedReference,
  EmptyOutcomes,
  DatasetError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a source location; line is 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace scenesmith

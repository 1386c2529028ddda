#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gist {

enum class ErrorKind {
  EmptyDocument,
  SchemaError,
  DanglingEmbeddingRef,
  DimMismatch,
  DuplicateKey,
  ParseError,
  CycleError,
  UnknownSynset,
  PatternCompileError,
  NoPairs,
  MissingResource,
  TooFewDocuments,
  MissingVariant,
  MissingLabel,
  GroupTooSmall,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this exception; callers that
// need to branch on the failure inspect kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the "<Kind>: " prefix that what() carries.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace gist

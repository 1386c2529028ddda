#include "gist/error.hpp"

namespace gist {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::DanglingEmbeddingRef: return "DanglingEmbeddingRef";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CycleError: return "CycleError";
    case ErrorKind::UnknownSynset: return "UnknownSynset";
    case ErrorKind::PatternCompileError: return "PatternCompileError";
    case ErrorKind::NoPairs: return "NoPairs";
    case ErrorKind::MissingResource: return "MissingResource";
    case ErrorKind::TooFewDocuments: return "TooFewDocuments";
    case ErrorKind::MissingVariant: return "MissingVariant";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::GroupTooSmall: return "GroupTooSmall";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(message) {}

}  // namespace gist

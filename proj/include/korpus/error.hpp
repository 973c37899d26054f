#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace korpus {

/// Closed catalog of failure codes. Every module reports through these, and the
/// HTTP layer surfaces them verbatim as ApiError codes.
enum class ErrorCode {
  // registry / core model
  UnknownLanguage,
  DuplicateDialect,
  DuplicateEntry,
  UnknownDialect,
  UnknownCorpusType,
  UnknownGenre,
  UnknownGrammeme,
  UnknownPos,
  UnknownConcept,
  DuplicateCategory,
  InvalidMeta,
  InvalidValue,
  // ingestion
  UnsupportedEncoding,
  DecodeError,
  CountMismatch,
  UnknownText,
  // morphology
  ParseError,
  UndefinedStem,
  NoTemplateMatch,
  UnknownLemma,
  UnknownTarget,
  NonDenseOrdinal,
  DuplicateWordform,
  UnmappedGrammeme,
  MalformedRow,
  UnknownFeature,
  // tagger
  UnknownToken,
  InvalidChoice,
  TokenUntagged,
  InvalidMeaning,
  EmptyDictionary,
  EmptyScope,
  // search
  InvalidQuery,
  // service
  IoError,
  FormatVersionUnsupported,
  ChecksumMismatch,
  NotFound,
  MethodNotAllowed,
  InvalidRequest,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  nlohmann::json detail_;
};

}  // namespace korpus

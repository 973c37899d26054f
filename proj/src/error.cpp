#include "korpus/error.hpp"

namespace korpus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::DuplicateDialect: return "DuplicateDialect";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::UnknownDialect: return "UnknownDialect";
    case ErrorCode::UnknownCorpusType: return "UnknownCorpusType";
    case ErrorCode::UnknownGenre: return "UnknownGenre";
    case ErrorCode::UnknownGrammeme: return "UnknownGrammeme";
    case ErrorCode::UnknownPos: return "UnknownPos";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::DuplicateCategory: return "DuplicateCategory";
    case ErrorCode::InvalidMeta: return "InvalidMeta";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::UnknownText: return "UnknownText";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UndefinedStem: return "UndefinedStem";
    case ErrorCode::NoTemplateMatch: return "NoTemplateMatch";
    case ErrorCode::UnknownLemma: return "UnknownLemma";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::NonDenseOrdinal: return "NonDenseOrdinal";
    case ErrorCode::DuplicateWordform: return "DuplicateWordform";
    case ErrorCode::UnmappedGrammeme: return "UnmappedGrammeme";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::InvalidChoice: return "InvalidChoice";
    case ErrorCode::TokenUntagged: return "TokenUntagged";
    case ErrorCode::InvalidMeaning: return "InvalidMeaning";
    case ErrorCode::EmptyDictionary: return "EmptyDictionary";
    case ErrorCode::EmptyScope: return "EmptyScope";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatVersionUnsupported: return "FormatVersionUnsupported";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::MethodNotAllowed: return "MethodNotAllowed";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

}  // namespace korpus

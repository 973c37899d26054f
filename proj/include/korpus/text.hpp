#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "korpus/ids.hpp"
#include "korpus/registry.hpp"
#include "korpus/timeutil.hpp"

namespace korpus {

/// Half-open range of code-point offsets into a document's normalized text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { Word, Punctuation, Number };

std::string_view to_string(TokenKind kind);
TokenKind token_kind_from_string(std::string_view text);

struct Token {
  std::uint32_t position = 0;
  Span span;
  std::string surface;
  TokenKind kind = TokenKind::Word;
  /// Ordinal among word tokens of the sentence; unset for punctuation and numbers.
  std::optional<std::uint32_t> word_index;
  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::uint32_t index = 0;
  Span span;
  std::vector<Token> tokens;
  std::optional<std::string> translation;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct TextDoc {
  TextId id;
  TextMeta meta;
  std::string normalized_text;
  std::vector<Sentence> sentences;
  Date accession_date;
  /// Unrecognized document fields, carried through bundle round trips untouched.
  nlohmann::json extra = nlohmann::json::object();

  std::string slice(Span span) const;
  std::size_t word_count() const;
  friend bool operator==(const TextDoc&, const TextDoc&) = default;
};

/// Corpus filter shared by coverage, queue and frequency queries.
struct Scope {
  std::optional<LanguageId> language;
  std::optional<CorpusTypeId> corpus_type;
  std::optional<DialectId> dialect;
  std::optional<GenreId> genre;
  /// Empty means every text.
  std::vector<TextId> texts;

  bool matches(const TextDoc& doc) const;
};

class Corpus {
 public:
  void add(TextDoc doc);
  bool remove(TextId id);
  const TextDoc* find(TextId id) const;
  TextDoc* find(TextId id);
  const TextDoc& require(TextId id) const;
  const std::map<TextId, TextDoc>& texts() const noexcept { return texts_; }
  std::size_t size() const noexcept { return texts_.size(); }
  bool empty() const noexcept { return texts_.empty(); }
  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::map<TextId, TextDoc> texts_;
};

}  // namespace korpus

#pragma once

#include <atomic>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "korpus/registry.hpp"
#include "korpus/text.hpp"

namespace korpus {

struct RawDocument {
  std::string bytes;
  std::string declared_encoding = "UTF-8";
};

/// Encoding labels accepted by normalize_text (matching is case-insensitive and
/// tolerates the common aliases utf8, cp1251, latin1).
std::vector<std::string> supported_encodings();

/// Decodes to Unicode, strips a BOM, composes to NFC and turns CRLF/CR into LF.
std::string normalize_text(const RawDocument& raw);

using Abbreviations = std::set<std::string>;

/// Sentence spans over `text` (code-point offsets). A sentence ends after a run of
/// . ! ? … (plus any closing quotes/brackets) that is followed by whitespace or the
/// end of text, unless the word carrying a single period is a listed abbreviation.
std::vector<Span> segment_sentences(std::u32string_view text, const Abbreviations& abbreviations = {});
std::vector<Span> segment_sentences(std::string_view utf8, const Abbreviations& abbreviations = {});

/// Tokens of text[range) with absolute offsets. Positions count from 0 within the
/// range; word_index is left unset (assigned by build_sentences).
std::vector<Token> tokenize(std::u32string_view text, Span range);
std::vector<Token> tokenize(std::string_view sentence_text);

/// Segments and tokenizes normalized text into numbered sentences.
std::vector<Sentence> build_sentences(std::string_view normalized, const Abbreviations& abbreviations = {});

enum class AlignMode { Strict, Partial };

struct AlignReport {
  std::size_t attached = 0;
  std::size_t untranslated = 0;
  std::size_t rejected = 0;
};

/// Attaches translations[i] to sentence i. Strict mode throws CountMismatch unless
/// the counts agree; partial mode attaches what it can and reports the rest.
AlignReport align_translation(TextDoc& doc, std::span<const std::string> translations, AlignMode mode = AlignMode::Strict);

/// Assigns text ids from an atomic sequence, so ingest may run concurrently.
class Ingestor {
 public:
  explicit Ingestor(std::uint32_t first_id = 1) : next_(first_id) {}

  TextDoc ingest(const Registry& registry, const RawDocument& raw, TextMeta meta,
                 const Abbreviations& abbreviations = {});
  TextDoc ingest(const Registry& registry, const RawDocument& raw, TextMeta meta, const Abbreviations& abbreviations,
                 Date accession_date);

  TextId next_id() { return TextId{next_.fetch_add(1)}; }
  /// Ensures future ids are greater than `id`.
  void advance_past(TextId id);

 private:
  std::atomic<std::uint32_t> next_;
};

}  // namespace korpus

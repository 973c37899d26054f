#include "korpus/ingest.hpp"

#include <algorithm>

#include <unicode/ucnv.h>
#include <unicode/ucnv_err.h>
#include <unicode/unistr.h>

#include "korpus/error.hpp"
#include "korpus/unicode.hpp"

namespace korpus {

// --- text containers ----------------------------------------------------------

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "word";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Number: return "number";
  }
  return "word";
}

TokenKind token_kind_from_string(std::string_view text) {
  if (text == "word") return TokenKind::Word;
  if (text == "punctuation") return TokenKind::Punctuation;
  if (text == "number") return TokenKind::Number;
  throw Error(ErrorCode::ParseError, "unknown token kind: " + std::string(text));
}

std::string TextDoc::slice(Span span) const {
  const std::u32string text = unicode::to_u32(normalized_text);
  const std::size_t end = std::min(span.end, text.size());
  const std::size_t start = std::min(span.start, end);
  return unicode::to_utf8(std::u32string_view(text).substr(start, end - start));
}

std::size_t TextDoc::word_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) {
    n += static_cast<std::size_t>(std::count_if(s.tokens.begin(), s.tokens.end(),
                                                [](const Token& t) { return t.kind == TokenKind::Word; }));
  }
  return n;
}

bool Scope::matches(const TextDoc& doc) const {
  if (language && doc.meta.language != *language) return false;
  if (corpus_type && doc.meta.corpus_type != *corpus_type) return false;
  if (dialect && doc.meta.dialect != dialect) return false;
  if (genre && doc.meta.genre != genre) return false;
  if (!texts.empty() && std::find(texts.begin(), texts.end(), doc.id) == texts.end()) return false;
  return true;
}

void Corpus::add(TextDoc doc) {
  const TextId id = doc.id;
  texts_.insert_or_assign(id, std::move(doc));
}

bool Corpus::remove(TextId id) { return texts_.erase(id) > 0; }

const TextDoc* Corpus::find(TextId id) const {
  auto it = texts_.find(id);
  return it == texts_.end() ? nullptr : &it->second;
}

TextDoc* Corpus::find(TextId id) {
  auto it = texts_.find(id);
  return it == texts_.end() ? nullptr : &it->second;
}

const TextDoc& Corpus::require(TextId id) const {
  if (const TextDoc* doc = find(id)) return *doc;
  throw Error(ErrorCode::UnknownText, "no text with id " + std::to_string(id.value), {{"text", id.value}});
}

// --- normalization --------------------------------------------------------------

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Maps an accepted label to an ICU converter name; empty when unsupported.
std::string converter_for(std::string_view label) {
  const std::string l = ascii_lower(label);
  if (l == "utf-8" || l == "utf8" || l == "utf-8-bom" || l == "utf8-bom") return "UTF-8";
  if (l == "windows-1251" || l == "cp1251" || l == "win1251") return "windows-1251";
  if (l == "iso-8859-1" || l == "latin1" || l == "latin-1" || l == "iso8859-1") return "ISO-8859-1";
  return {};
}

std::string decode(std::string_view bytes, const std::string& converter) {
  UErrorCode status = U_ZERO_ERROR;
  UConverter* conv = ucnv_open(converter.c_str(), &status);
  if (U_FAILURE(status)) throw Error(ErrorCode::UnsupportedEncoding, "no converter for " + converter);
  ucnv_setToUCallBack(conv, UCNV_TO_U_CALLBACK_STOP, nullptr, nullptr, nullptr, &status);
  icu::UnicodeString text(bytes.data(), static_cast<int32_t>(bytes.size()), conv, status);
  ucnv_close(conv);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::DecodeError, "byte sequence is not valid " + converter, {{"encoding", converter}});
  }
  // ICU passes the one unassigned windows-1251 slot (0x98) through as a C1 control.
  if (converter == "windows-1251") {
    for (int32_t i = 0; i < text.length(); ++i) {
      if (text[i] >= 0x80 && text[i] <= 0x9F) {
        throw Error(ErrorCode::DecodeError, "byte sequence is not valid " + converter,
                    {{"encoding", converter}, {"offset", i}});
      }
    }
  }
  std::string out;
  text.toUTF8String(out);
  return out;
}

}  // namespace

std::vector<std::string> supported_encodings() { return {"UTF-8", "UTF-8-BOM", "Windows-1251", "ISO-8859-1"}; }

std::string normalize_text(const RawDocument& raw) {
  const std::string converter = converter_for(raw.declared_encoding);
  if (converter.empty()) {
    throw Error(ErrorCode::UnsupportedEncoding, "unsupported encoding: " + raw.declared_encoding,
                {{"encoding", raw.declared_encoding}, {"supported", supported_encodings()}});
  }
  std::string_view bytes = raw.bytes;
  if (converter == "UTF-8" && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);

  std::string decoded = decode(bytes, converter);
  std::string unified;
  unified.reserve(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if (decoded[i] == '\r') {
      unified.push_back('\n');
      if (i + 1 < decoded.size() && decoded[i + 1] == '\n') ++i;
    } else {
      unified.push_back(decoded[i]);
    }
  }
  // A BOM decoded from a non-UTF-8 label would survive as U+FEFF.
  std::string text = unicode::nfc(unified);
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  return text;
}

// --- segmentation ---------------------------------------------------------------

namespace {

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closer(char32_t c) { return c == U'»' || c == U'”' || c == U'"' || c == U')' || c == U']'; }

}  // namespace

std::vector<Span> segment_sentences(std::u32string_view text, const Abbreviations& abbreviations) {
  std::vector<Span> spans;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (true) {
    while (i < n && unicode::is_space(text[i])) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    std::size_t end = n;
    std::size_t j = start;
    bool closed = false;
    while (j < n) {
      if (!is_terminator(text[j])) {
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k < n && is_terminator(text[k])) ++k;
      const std::size_t run_end = k;
      while (k < n && is_closer(text[k])) ++k;
      if (k < n && !unicode::is_space(text[k])) {
        j = k;
        continue;
      }
      if (run_end - j == 1 && text[j] == U'.' && !abbreviations.empty()) {
        std::size_t w = j;
        while (w > start && !unicode::is_space(text[w - 1])) --w;
        const std::string word = unicode::to_utf8(text.substr(w, run_end - w));
        if (abbreviations.count(word)) {
          j = k;
          continue;
        }
      }
      end = k;
      closed = true;
      break;
    }
    if (!closed) {
      while (end > start && unicode::is_space(text[end - 1])) --end;
    }
    spans.push_back({start, end});
    i = end;
  }
  return spans;
}

std::vector<Span> segment_sentences(std::string_view utf8, const Abbreviations& abbreviations) {
  return segment_sentences(unicode::to_u32(utf8), abbreviations);
}

// --- tokenization ---------------------------------------------------------------

namespace {

bool word_char(char32_t c) { return unicode::is_letter(c) || unicode::is_mark(c); }

}  // namespace

std::vector<Token> tokenize(std::u32string_view text, Span range) {
  std::vector<Token> tokens;
  const std::size_t end = std::min(range.end, text.size());
  std::size_t j = range.start;
  auto emit = [&](std::size_t from, std::size_t to, TokenKind kind) {
    Token t;
    t.position = static_cast<std::uint32_t>(tokens.size());
    t.span = {from, to};
    t.surface = unicode::to_utf8(text.substr(from, to - from));
    t.kind = kind;
    tokens.push_back(std::move(t));
  };
  while (j < end) {
    const char32_t c = text[j];
    if (unicode::is_space(c)) {
      ++j;
    } else if (unicode::is_letter(c)) {
      std::size_t k = j + 1;
      while (k < end) {
        if (word_char(text[k])) {
          ++k;
        } else if (k + 1 < end && (unicode::is_apostrophe(text[k]) || unicode::is_hyphen(text[k])) &&
                   unicode::is_letter(text[k + 1]) && word_char(text[k - 1])) {
          k += 2;
        } else {
          break;
        }
      }
      emit(j, k, TokenKind::Word);
      j = k;
    } else if (unicode::is_digit(c)) {
      std::size_t k = j + 1;
      while (k < end && unicode::is_digit(text[k])) ++k;
      emit(j, k, TokenKind::Number);
      j = k;
    } else {
      std::size_t k = j + 1;
      while (k < end && !unicode::is_space(text[k]) && !unicode::is_letter(text[k]) && !unicode::is_digit(text[k])) ++k;
      emit(j, k, TokenKind::Punctuation);
      j = k;
    }
  }
  return tokens;
}

std::vector<Token> tokenize(std::string_view sentence_text) {
  const std::u32string text = unicode::to_u32(sentence_text);
  return tokenize(text, Span{0, text.size()});
}

std::vector<Sentence> build_sentences(std::string_view normalized, const Abbreviations& abbreviations) {
  const std::u32string text = unicode::to_u32(normalized);
  std::vector<Sentence> sentences;
  for (const Span& span : segment_sentences(text, abbreviations)) {
    Sentence s;
    s.index = static_cast<std::uint32_t>(sentences.size());
    s.span = span;
    s.tokens = tokenize(text, span);
    std::uint32_t word_index = 0;
    for (Token& t : s.tokens) {
      if (t.kind == TokenKind::Word) t.word_index = word_index++;
    }
    sentences.push_back(std::move(s));
  }
  return sentences;
}

AlignReport align_translation(TextDoc& doc, std::span<const std::string> translations, AlignMode mode) {
  const std::size_t sentences = doc.sentences.size();
  if (translations.size() != sentences && (mode == AlignMode::Strict || translations.size() > sentences)) {
    throw Error(ErrorCode::CountMismatch,
                "text has " + std::to_string(sentences) + " sentences but " + std::to_string(translations.size()) +
                    " translations were supplied",
                {{"sentences", sentences}, {"translations", translations.size()}});
  }
  AlignReport report;
  for (std::size_t i = 0; i < translations.size(); ++i) {
    doc.sentences[i].translation = translations[i];
    ++report.attached;
  }
  report.untranslated = sentences - report.attached;
  return report;
}

// --- ingest ---------------------------------------------------------------------

TextDoc Ingestor::ingest(const Registry& registry, const RawDocument& raw, TextMeta meta,
                         const Abbreviations& abbreviations) {
  return ingest(registry, raw, std::move(meta), abbreviations, today());
}

TextDoc Ingestor::ingest(const Registry& registry, const RawDocument& raw, TextMeta meta,
                         const Abbreviations& abbreviations, Date accession_date) {
  registry.validate_meta(meta);
  TextDoc doc;
  doc.normalized_text = normalize_text(raw);
  doc.sentences = build_sentences(doc.normalized_text, abbreviations);
  doc.meta = std::move(meta);
  doc.accession_date = accession_date;
  doc.id = next_id();
  return doc;
}

void Ingestor::advance_past(TextId id) {
  std::uint32_t current = next_.load();
  while (current <= id.value && !next_.compare_exchange_weak(current, id.value + 1)) {
  }
}

}  // namespace korpus

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "korpus/dictionary.hpp"
#include "korpus/markup.hpp"
#include "korpus/registry.hpp"
#include "korpus/text.hpp"

namespace korpus {

struct Occurrence {
  TextId text;
  std::uint32_t sentence = 0;
  std::uint32_t word_index = 0;
  std::uint32_t position = 0;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// One way of reading a token: a verified token has exactly its chosen
/// candidate, an auto token every candidate.
struct Reading {
  LemmaId lemma;
  std::string lemma_key;
  std::string pos;
  Gramset gramset;
  bool verified = false;
  friend bool operator==(const Reading&, const Reading&) = default;
};

struct Slot {
  Occurrence at;
  std::string key;
  std::vector<Reading> readings;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Word-level indexes over a tagged corpus. Building is a pure function of
/// (corpus, markup, dictionary), and add_text on a built index gives the same
/// result as rebuilding with the extra text.
class CorpusIndex {
 public:
  static CorpusIndex build(const Corpus& corpus, const MarkupStore& markup, const Dictionary& dictionary);

  void add_text(const TextDoc& doc, const TextMarkup* markup, const Dictionary& dictionary);
  void remove_text(TextId id);

  /// Occurrences of a folded surface, sorted.
  const std::vector<Occurrence>& posting(std::string_view surface) const;
  const std::map<std::string, std::vector<Occurrence>>& postings() const noexcept { return postings_; }
  /// Tokens that have `lemma` among their readings, with the verified flag.
  const std::vector<std::pair<Occurrence, bool>>& lemma_occurrences(LemmaId lemma) const;
  /// Word slots of one sentence, indexed by word_index.
  const std::vector<Slot>* slots(TextId text, std::uint32_t sentence) const;
  const std::map<std::pair<TextId, std::uint32_t>, std::vector<Slot>>& sentences() const noexcept { return sentences_; }

  bool empty() const noexcept { return sentences_.empty(); }
  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;

 private:
  std::map<std::string, std::vector<Occurrence>> postings_;
  std::map<LemmaId, std::vector<std::pair<Occurrence, bool>>> lemma_postings_;
  std::map<std::pair<TextId, std::uint32_t>, std::vector<Slot>> sentences_;
};

/// Everything a query reads; all references must outlive the call.
struct SearchContext {
  const Registry& registry;
  const Corpus& corpus;
  const Dictionary& dictionary;
  const MarkupStore& markup;
  const CorpusIndex& index;
};

template <class T>
struct Page {
  std::vector<T> items;
  std::size_t total = 0;
  std::size_t page = 1;
  std::size_t page_size = 10;
};

struct TextQuery {
  std::optional<LanguageId> language;
  std::optional<DialectId> dialect;
  std::optional<CorpusTypeId> corpus_type;
  std::optional<GenreId> genre;
  std::optional<std::string> informant;
  std::optional<std::string> recorder;
  std::optional<std::string> author;
  std::optional<std::string> title;
  std::optional<std::string> word;
  std::optional<std::string> fragment;
  std::optional<int> year_from;
  std::optional<int> year_to;
  std::size_t page = 1;
  std::size_t page_size = 10;
};

struct TextHit {
  TextId id;
  std::string title;
  std::optional<std::string> title_translation;
  std::optional<std::string> snippet;
  friend bool operator==(const TextHit&, const TextHit&) = default;
};

/// Conjunctive metadata/content filter. Substring filters ignore case; the year
/// range matches a text whose recording or publication year falls inside it.
/// Ordered by (title, id). Throws InvalidQuery.
Page<TextHit> search_texts(const SearchContext& ctx, const TextQuery& q);

/// Does one text pass the filters of `q` (pagination ignored)?
bool text_matches(const SearchContext& ctx, const TextDoc& doc, const TextQuery& q);

struct WordConstraint {
  /// Matches the token surface or the lemma of a reading.
  std::optional<std::string> word;
  std::optional<std::string> pos;
  std::vector<GrammemeId> grammemes;
  bool empty() const noexcept { return !word && !pos && grammemes.empty(); }
};

struct LexGramQuery {
  std::optional<LanguageId> language;
  std::optional<CorpusTypeId> corpus_type;
  WordConstraint word1;
  std::optional<WordConstraint> word2;
  int distance_from = 1;
  int distance_to = 1;
  /// Only verified markup counts as a reading.
  bool verified_only = false;
};

struct LexGramHit {
  TextId text;
  std::uint32_t sentence = 0;
  std::uint32_t position1 = 0;
  std::optional<std::uint32_t> position2;
  std::string sentence_text;
  std::optional<std::string> translation;
  friend bool operator==(const LexGramHit&, const LexGramHit&) = default;
};

struct LexGramResult {
  std::vector<LexGramHit> hits;
  std::size_t text_count = 0;
  std::size_t entry_count = 0;
};

/// True if some reading of the slot satisfies every part of `c` at once (or `c`
/// only asks for a surface the slot has).
bool slot_satisfies(const Slot& slot, const WordConstraint& c, bool verified_only);

/// Ordered two-word distance search within sentences. word2 must follow word1 by
/// distance_from..distance_to word tokens. Throws InvalidQuery.
LexGramResult lexgram_search(const SearchContext& ctx, const LexGramQuery& q);

struct LemmaQuery {
  std::optional<std::string> surface;
  /// Match `surface` as a prefix instead of a substring.
  bool prefix = false;
  std::optional<std::string> pos;
  std::vector<GrammemeId> grammemes;
  std::optional<LanguageId> language;
  std::optional<DialectId> dialect;
  std::optional<std::string> interpretation;
  std::optional<std::string> concept_id;
  bool with_examples = false;
  std::size_t page = 1;
  std::size_t page_size = 10;
};

struct ExampleCounts {
  std::size_t verified = 0;
  std::size_t unverified = 0;
  std::size_t total() const noexcept { return verified + unverified; }
  friend bool operator==(const ExampleCounts&, const ExampleCounts&) = default;
};

struct LemmaHit {
  LemmaId id;
  std::string surface;
  std::string pos;
  LanguageId language;
  std::vector<std::map<std::string, std::string>> interpretations;
  std::size_t wordform_count = 0;
  ExampleCounts examples;
  friend bool operator==(const LemmaHit&, const LemmaHit&) = default;
};

ExampleCounts example_counts(const CorpusIndex& index, LemmaId lemma);

/// Conjunctive lemma filter ordered by (surface, id). `grammemes` requires a
/// wordform whose gramset has them all; `dialect` matches dialects of usage or a
/// wordform variety; `with_examples` keeps lemmas attested in the corpus.
Page<LemmaHit> search_lemmas(const SearchContext& ctx, const LemmaQuery& q);
bool lemma_matches(const SearchContext& ctx, const Lemma& lemma, const LemmaQuery& q);

/// Distinct lemmas that analyze(surface) hits, in id order.
std::vector<LemmaId> search_lemma_by_wordform(const Dictionary& dictionary, std::string_view surface);

enum class FrequencyUnit { Wordform, Lemma };

struct FrequencyRow {
  std::string item;
  std::optional<LemmaId> lemma;
  std::size_t count = 0;
  friend bool operator==(const FrequencyRow&, const FrequencyRow&) = default;
};

struct FrequencyTable {
  FrequencyUnit unit = FrequencyUnit::Wordform;
  std::vector<FrequencyRow> rows;
  std::size_t word_tokens = 0;
  /// Lemma unit: auto tokens whose candidates name more than one lemma.
  std::size_t ambiguous = 0;
  /// Lemma unit: tokens without any reading.
  std::size_t unrecognized = 0;
};

/// Ranked by count descending, ties by item then lemma id. Throws EmptyScope.
FrequencyTable frequency(const SearchContext& ctx, const Scope& scope, FrequencyUnit unit);

/// Lemmas ordered by their code-point-reversed surface, ties by surface then id.
std::vector<LemmaId> reverse_dictionary(const Dictionary& dictionary, std::optional<LanguageId> language = std::nullopt);

enum class StatsDimension { ByCorpus, ByGenre, ByYear };

std::string_view to_string(StatsDimension d);
StatsDimension stats_dimension_from_string(std::string_view text);

struct StatsRow {
  /// by_year only: "recorded", "published" or "accession".
  std::string series;
  std::string language;
  std::string bucket;
  std::size_t count = 0;
  friend bool operator==(const StatsRow&, const StatsRow&) = default;
};

struct StatsTable {
  StatsDimension dimension = StatsDimension::ByCorpus;
  std::vector<StatsRow> rows;
  std::size_t total = 0;
};

/// Text counts per (language, corpus type), (language, genre) or per year in
/// three series. Missing values land in "(none)"/"unknown" buckets so every
/// series sums to the total.
StatsTable stats(const Registry& registry, const Corpus& corpus, StatsDimension dimension, const Scope& scope = {});

}  // namespace korpus

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "korpus/ids.hpp"
#include "korpus/registry.hpp"

namespace korpus {

struct Meaning {
  /// 1-based and dense within a lemma.
  int ordinal = 1;
  std::optional<std::string> concept_id;
  /// Gloss per interpretation language label ("Russian", "English", ...).
  std::map<std::string, std::string> interpretations;
  std::map<LanguageId, std::vector<LemmaId>> translation_links;
  friend bool operator==(const Meaning&, const Meaning&) = default;
};

enum class WordformOrigin { Generated, Manual, Imported };

std::string_view to_string(WordformOrigin origin);
WordformOrigin wordform_origin_from_string(std::string_view text);

struct Wordform {
  Gramset gramset;
  std::string surface;
  /// Paradigm column, e.g. the standardized variety the form belongs to.
  std::optional<DialectId> variety;
  WordformOrigin origin = WordformOrigin::Manual;
  friend bool operator==(const Wordform&, const Wordform&) = default;
};

struct Lemma {
  LemmaId id;
  std::string surface;
  LanguageId language;
  std::string pos;
  std::set<DialectId> dialects_of_usage;
  std::vector<Meaning> meanings;
  std::vector<Wordform> wordforms;
  /// Paradigm template that produced the generated wordforms, if any.
  std::optional<std::string> template_id;
  nlohmann::json extra = nlohmann::json::object();
  friend bool operator==(const Lemma&, const Lemma&) = default;
};

/// One reading of a surface form. A hit on the dictionary form itself (no stored
/// wordform) carries an empty gramset and no variety.
struct AnalysisHit {
  LemmaId lemma;
  Gramset gramset;
  std::optional<DialectId> variety;
  friend bool operator==(const AnalysisHit&, const AnalysisHit&) = default;
};

struct TranslationSource {
  LemmaId lemma;
  int meaning = 0;
  friend auto operator<=>(const TranslationSource&, const TranslationSource&) = default;
};

/// Lemmas with their meanings and paradigms, indexed by folded wordform surface.
///
/// Safe for concurrent readers; every mutating call needs exclusive access and
/// patches the wordform index before returning.
class Dictionary {
 public:
  /// Stores a new lemma and returns its id (record.id is ignored).
  LemmaId add_lemma(const Registry& registry, Lemma record);
  /// Stores a lemma under its own id; used when loading bundles.
  void restore_lemma(Lemma lemma);
  /// Removes a lemma and every translation link pointing at it.
  bool remove_lemma(LemmaId id);

  const Lemma* find(LemmaId id) const;
  const Lemma& require(LemmaId id) const;
  const std::map<LemmaId, Lemma>& lemmas() const noexcept { return lemmas_; }
  std::size_t size() const noexcept { return lemmas_.size(); }
  std::size_t wordform_count() const;
  bool empty() const noexcept { return lemmas_.empty(); }
  /// Lemmas whose dictionary form folds to the same key as `surface`.
  std::vector<LemmaId> find_by_surface(std::string_view surface) const;

  /// Replaces meaning `ordinal` or appends it when ordinal == count + 1.
  void upsert_meaning(const Registry& registry, LemmaId lemma, Meaning meaning);
  void link_translation(LemmaId lemma, int ordinal, LemmaId target);
  /// Reverse side of link_translation: every (lemma, meaning) linking to `target`.
  std::vector<TranslationSource> translations_into(LemmaId target) const;

  void add_wordform(LemmaId lemma, Wordform wordform);
  /// Drops the lemma's generated forms and stores `forms` instead. Cells already
  /// held by a manual or imported form are left alone.
  std::size_t replace_generated(LemmaId lemma, std::vector<Wordform> forms, std::string template_id);

  /// Every stored reading whose surface folds to the same key as `surface`, plus
  /// lemmas whose dictionary form matches and has no wordform hit of its own.
  std::vector<AnalysisHit> analyze(std::string_view surface) const;

  friend bool operator==(const Dictionary& a, const Dictionary& b) { return a.lemmas_ == b.lemmas_; }

 private:
  struct IndexEntry {
    LemmaId lemma;
    int wordform = -1;  // -1: the dictionary form
  };

  Lemma& mutable_lemma(LemmaId id);
  void index_lemma(const Lemma& lemma);
  void unindex_lemma(const Lemma& lemma);
  void check_links(const Meaning& meaning) const;
  void add_reverse_links(const Lemma& lemma);
  void drop_reverse_links(const Lemma& lemma);

  std::map<LemmaId, Lemma> lemmas_;
  std::unordered_map<std::string, std::vector<IndexEntry>> index_;
  std::map<LemmaId, std::set<TranslationSource>> reverse_links_;
  std::uint32_t next_id_ = 1;
};

/// Convenience free-function spelling of Dictionary::analyze.
inline std::vector<AnalysisHit> analyze(std::string_view surface, const Dictionary& dictionary) {
  return dictionary.analyze(surface);
}

}  // namespace korpus

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "korpus/ids.hpp"

namespace korpus {

struct LanguageTag {
  LanguageId id;
  std::string code;
  std::string name;
  friend bool operator==(const LanguageTag&, const LanguageTag&) = default;
};

/// A dialect or, with `standardized` set, a codified written variety.
struct Dialect {
  DialectId id;
  LanguageId language;
  std::string name;
  bool standardized = false;
  friend bool operator==(const Dialect&, const Dialect&) = default;
};

struct CorpusType {
  CorpusTypeId id;
  std::string name;
  friend bool operator==(const CorpusType&, const CorpusType&) = default;
};

struct Genre {
  GenreId id;
  CorpusTypeId corpus_type;
  std::string name;
  friend bool operator==(const Genre&, const Genre&) = default;
};

struct ConceptCategory {
  std::string id;
  std::string label;
  friend bool operator==(const ConceptCategory&, const ConceptCategory&) = default;
};

struct Grammeme {
  GrammemeId id;
  std::string name;
  std::string category;
  std::set<std::string> applicable_pos;
  friend bool operator==(const Grammeme&, const Grammeme&) = default;
};

/// Bundle of grammemes identifying one paradigm cell. Only a Registry can build
/// one, which guarantees canonical category order and one grammeme per category,
/// so equal bundles compare equal regardless of how they were spelled.
class Gramset {
 public:
  Gramset() = default;

  const std::vector<GrammemeId>& grammemes() const noexcept { return ids_; }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t size() const noexcept { return ids_.size(); }
  bool contains(GrammemeId id) const;
  /// True if every grammeme of `required` is present here.
  bool includes(const Gramset& required) const;
  bool includes(std::span<const GrammemeId> required) const;

  friend bool operator==(const Gramset&, const Gramset&) = default;
  friend auto operator<=>(const Gramset&, const Gramset&) = default;

 private:
  friend class Registry;
  explicit Gramset(std::vector<GrammemeId> ids) : ids_(std::move(ids)) {}
  std::vector<GrammemeId> ids_;
};

/// Document-level metadata filled in from the ingestion template.
struct TextMeta {
  std::string title;
  std::optional<std::string> title_translation;
  LanguageId language;
  std::optional<DialectId> dialect;
  CorpusTypeId corpus_type;
  std::optional<GenreId> genre;
  std::optional<std::string> author;
  std::optional<std::string> informant;
  std::optional<std::string> recorder;
  std::optional<int> year_recorded;
  std::optional<int> year_published;
  std::optional<std::string> source;
  std::optional<std::string> place_of_recording;
  std::optional<std::string> license;
  friend bool operator==(const TextMeta&, const TextMeta&) = default;
};

struct RegistryFinding {
  enum class Kind { DanglingReference, Duplicate, Invalid };
  Kind kind;
  std::string subject;
  std::string detail;
  friend auto operator<=>(const RegistryFinding&, const RegistryFinding&) = default;
};

std::string_view to_string(RegistryFinding::Kind kind);

/// Taxonomy of languages, dialects, text types, genres, grammemes, parts of speech
/// and concept categories. Read-mostly: mutate from a single writer only.
class Registry {
 public:
  Registry() = default;

  static Registry from_json(const nlohmann::json& doc);
  static Registry load_file(const std::filesystem::path& path);
  /// Shipped default inventory.
  static Registry load_default();
  nlohmann::json to_json() const;

  LanguageId add_language(std::string code, std::string name);
  const Dialect& register_dialect(LanguageId language, std::string name, bool standardized);
  CorpusTypeId add_corpus_type(std::string name);
  GenreId add_genre(CorpusTypeId corpus_type, std::string name);
  void add_concept(std::string id, std::string label);
  /// Appends a category to the canonical order; no-op if it already exists.
  void add_category(const std::string& name);
  GrammemeId add_grammeme(std::string name, std::string category, std::set<std::string> applicable_pos);
  void add_pos(std::string pos);

  // Removal does not cascade; validate() reports what is left dangling.
  void remove_language(LanguageId id);
  void remove_dialect(DialectId id);
  void remove_corpus_type(CorpusTypeId id);
  void remove_genre(GenreId id);

  const LanguageTag* language(LanguageId id) const;
  const LanguageTag* find_language(std::string_view code) const;
  const LanguageTag& require_language(std::string_view code) const;
  const Dialect* dialect(DialectId id) const;
  const Dialect* find_dialect(LanguageId language, std::string_view name) const;
  /// Looks a dialect up by name in any language; nullptr if absent or ambiguous.
  const Dialect* find_dialect(std::string_view name) const;
  std::vector<const Dialect*> dialects_of(LanguageId language) const;
  const CorpusType* corpus_type(CorpusTypeId id) const;
  const CorpusType* find_corpus_type(std::string_view name) const;
  const Genre* genre(GenreId id) const;
  const Genre* find_genre(CorpusTypeId corpus_type, std::string_view name) const;
  const Genre* find_genre(std::string_view name) const;
  const ConceptCategory* find_concept(std::string_view id) const;
  const Grammeme* grammeme(GrammemeId id) const;
  /// Accepts a bare name or "category:name" when the bare name is ambiguous.
  const Grammeme* find_grammeme(std::string_view name) const;
  bool has_pos(std::string_view pos) const;

  const std::map<LanguageId, LanguageTag>& languages() const noexcept { return languages_; }
  const std::map<DialectId, Dialect>& dialects() const noexcept { return dialects_; }
  const std::map<CorpusTypeId, CorpusType>& corpus_types() const noexcept { return corpus_types_; }
  const std::map<GenreId, Genre>& genres() const noexcept { return genres_; }
  const std::map<std::string, ConceptCategory>& concepts() const noexcept { return concepts_; }
  const std::map<GrammemeId, Grammeme>& grammemes() const noexcept { return grammemes_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const std::vector<std::string>& pos_tags() const noexcept { return pos_tags_; }

  Gramset make_gramset(std::span<const GrammemeId> grammemes) const;
  Gramset make_gramset(std::span<const std::string> names) const;
  Gramset make_gramset(std::initializer_list<std::string_view> names) const;
  /// Stable reference names, qualified only where a bare name is ambiguous.
  std::vector<std::string> gramset_names(const Gramset& gramset) const;
  std::string grammeme_ref(GrammemeId id) const;
  /// "Indicative, Presence, Positive, 3rd, Sg"
  std::string describe(const Gramset& gramset) const;
  /// Canonical ordering: lexicographic over (category rank, grammeme id).
  bool gramset_less(const Gramset& a, const Gramset& b) const;

  /// Throws InvalidMeta / Unknown* when metadata does not fit the taxonomy.
  void validate_meta(const TextMeta& meta) const;
  std::vector<RegistryFinding> validate() const;

  friend bool operator==(const Registry&, const Registry&) = default;

 private:
  std::size_t category_rank(const std::string& category) const;

  std::map<LanguageId, LanguageTag> languages_;
  std::map<DialectId, Dialect> dialects_;
  std::map<CorpusTypeId, CorpusType> corpus_types_;
  std::map<GenreId, Genre> genres_;
  std::map<std::string, ConceptCategory> concepts_;
  std::map<GrammemeId, Grammeme> grammemes_;
  std::vector<std::string> categories_;
  std::vector<std::string> pos_tags_;
  std::uint32_t next_language_ = 1;
  std::uint32_t next_dialect_ = 1;
  std::uint32_t next_corpus_type_ = 1;
  std::uint32_t next_genre_ = 1;
  std::uint32_t next_grammeme_ = 1;
};

/// Convenience over validate(): same findings, different spelling.
inline std::vector<RegistryFinding> validate_registry(const Registry& registry) { return registry.validate(); }

nlohmann::json meta_to_json(const Registry& registry, const TextMeta& meta);
/// Resolves names/codes against the registry and validates the result.
TextMeta meta_from_json(const Registry& registry, const nlohmann::json& j);

}  // namespace korpus

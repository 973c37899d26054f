#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "korpus/dictionary.hpp"
#include "korpus/registry.hpp"

namespace korpus {

/// Grammeme ↔ UniMorph feature token correspondence.
///
/// A grammeme may map to the empty token when UniMorph leaves it unmarked (for
/// example positive polarity); such a grammeme needs an `implied` rule so import
/// can restore it.
class FeatureMap {
 public:
  struct Implied {
    GrammemeId grammeme;
    std::set<std::string> pos;
    /// Restored when any of these tokens is present and the grammeme's category is not.
    std::set<std::string> when_any;
  };

  static FeatureMap from_json(const Registry& registry, const nlohmann::json& doc);
  static FeatureMap load_file(const Registry& registry, const std::filesystem::path& path);
  static FeatureMap load_default(const Registry& registry);

  const std::string* pos_token(std::string_view pos) const;
  const std::string* grammeme_token(GrammemeId id) const;
  /// Inverse lookups; nullptr for unknown tokens.
  const std::string* pos_for_token(std::string_view token) const;
  std::optional<GrammemeId> grammeme_for_token(std::string_view token) const;
  /// Output rank of a category (categories missing from the order sort last).
  std::size_t category_rank(std::string_view category) const;
  const std::vector<Implied>& implied() const noexcept { return implied_; }

 private:
  std::map<std::string, std::string, std::less<>> pos_;
  std::map<std::string, std::string, std::less<>> pos_inverse_;
  std::map<GrammemeId, std::string> features_;
  std::map<std::string, GrammemeId, std::less<>> features_inverse_;
  std::vector<std::string> order_;
  std::vector<Implied> implied_;
};

struct UnimorphRow {
  std::string lemma;
  std::string form;
  std::string features;
  friend auto operator<=>(const UnimorphRow&, const UnimorphRow&) = default;
};

/// "POS;F1;F2..." for one wordform; throws UnmappedGrammeme / UnknownPos.
std::string unimorph_features(const Registry& registry, const FeatureMap& map, std::string_view pos,
                              const Gramset& gramset);

/// One row per (lemma, wordform) of `language`, ordered by lemma surface, then
/// canonical gramset order.
std::vector<UnimorphRow> export_unimorph(const Dictionary& dictionary, const Registry& registry, LanguageId language,
                                         const FeatureMap& map);

/// Tab-separated, LF-terminated, no header.
std::string format_unimorph(const std::vector<UnimorphRow>& rows);

/// Splits TSV text into rows, throwing MalformedRow (with 1-based line number)
/// for anything but three non-empty tab-separated columns. Blank lines are skipped.
std::vector<UnimorphRow> parse_unimorph(std::string_view text);

struct ImportReport {
  std::size_t rows = 0;
  std::size_t lemmas_created = 0;
  std::size_t wordforms_added = 0;
  std::size_t wordforms_skipped = 0;
};

/// Adds the rows to `dictionary` as lemmas of `language`. Lemmas are matched on
/// (surface, part of speech); new ones are created. All rows are validated before
/// anything is written.
ImportReport import_unimorph(Dictionary& dictionary, const Registry& registry, std::string_view text,
                             LanguageId language, const FeatureMap& map, std::optional<DialectId> variety = std::nullopt);

}  // namespace korpus

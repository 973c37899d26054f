#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "korpus/dictionary.hpp"
#include "korpus/registry.hpp"

namespace korpus {

/// Strips `strip` from the end of the lemma and appends `append`.
struct StemRule {
  std::string name;
  std::string strip;
  std::string append;
  friend bool operator==(const StemRule&, const StemRule&) = default;
};

struct AffixRow {
  Gramset gramset;
  std::string stem;
  std::string suffix;
  friend bool operator==(const AffixRow&, const AffixRow&) = default;
};

/// Declarative inflection class: lemmas of `language`/`pos` ending in
/// `lemma_pattern` get one wordform per affix row, stem + suffix.
struct ParadigmTemplate {
  std::string id;
  LanguageId language;
  std::string pos;
  std::string lemma_pattern;
  std::optional<DialectId> variety;
  std::vector<StemRule> stems;
  std::vector<AffixRow> rows;

  /// Name of the implicit stem that is the unchanged lemma.
  static constexpr std::string_view kLemmaStem = "lemma";

  bool matches(const Lemma& lemma) const;
  /// One wordform per row, in row order. `surface` must end with lemma_pattern.
  std::vector<Wordform> expand(std::string_view surface) const;
  friend bool operator==(const ParadigmTemplate&, const ParadigmTemplate&) = default;
};

/// Ordered, validated templates; the first match wins.
class TemplateSet {
 public:
  TemplateSet() = default;
  explicit TemplateSet(std::vector<ParadigmTemplate> templates) : templates_(std::move(templates)) {}

  const ParadigmTemplate* match(const Lemma& lemma) const;
  const ParadigmTemplate* find(std::string_view id) const;
  const std::vector<ParadigmTemplate>& templates() const noexcept { return templates_; }
  std::size_t size() const noexcept { return templates_.size(); }
  bool empty() const noexcept { return templates_.empty(); }

 private:
  std::vector<ParadigmTemplate> templates_;
};

TemplateSet load_ruleset(const Registry& registry, const nlohmann::json& document);
TemplateSet load_ruleset_text(const Registry& registry, std::string_view text);
TemplateSet load_ruleset_file(const Registry& registry, const std::filesystem::path& path);
/// Shipped sample rules (Veps verb and noun classes).
TemplateSet load_default_ruleset(const Registry& registry);

/// Generates the full paradigm of a stored lemma and stores it on the lemma.
/// Returns the whole paradigm in affix-table order; throws NoTemplateMatch.
std::vector<Wordform> generate_paradigm(Dictionary& dictionary, LemmaId lemma, const TemplateSet& templates);

/// Same generation without touching any dictionary.
std::vector<Wordform> generate_paradigm(const Lemma& lemma, const TemplateSet& templates);

}  // namespace korpus

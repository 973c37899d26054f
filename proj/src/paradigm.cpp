#include "korpus/paradigm.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "korpus/error.hpp"
#include "korpus/unicode.hpp"

namespace korpus {

using nlohmann::json;

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

bool ParadigmTemplate::matches(const Lemma& lemma) const {
  return lemma.language == language && lemma.pos == pos && ends_with(lemma.surface, lemma_pattern);
}

std::vector<Wordform> ParadigmTemplate::expand(std::string_view surface) const {
  std::map<std::string, std::string, std::less<>> stem_values;
  stem_values.emplace(std::string(kLemmaStem), std::string(surface));
  for (const StemRule& rule : stems) {
    if (!ends_with(surface, rule.strip)) {
      throw Error(ErrorCode::NoTemplateMatch, "stem rule '" + rule.name + "' cannot strip '" + rule.strip + "' from " +
                                                  std::string(surface));
    }
    std::string stem(surface.substr(0, surface.size() - rule.strip.size()));
    stem += rule.append;
    stem_values.insert_or_assign(rule.name, std::move(stem));
  }
  std::vector<Wordform> forms;
  forms.reserve(rows.size());
  for (const AffixRow& row : rows) {
    Wordform wf;
    wf.gramset = row.gramset;
    wf.surface = stem_values.at(row.stem) + row.suffix;
    wf.variety = variety;
    wf.origin = WordformOrigin::Generated;
    forms.push_back(std::move(wf));
  }
  return forms;
}

const ParadigmTemplate* TemplateSet::match(const Lemma& lemma) const {
  for (const auto& t : templates_) {
    if (t.matches(lemma)) return &t;
  }
  return nullptr;
}

const ParadigmTemplate* TemplateSet::find(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

TemplateSet load_ruleset(const Registry& registry, const json& document) {
  std::vector<ParadigmTemplate> out;
  if (document.is_null() || (document.is_object() && document.empty())) return TemplateSet{};
  try {
    std::set<std::string> ids;
    for (const json& jt : document.at("templates")) {
      ParadigmTemplate t;
      t.id = jt.at("id").get<std::string>();
      if (!ids.insert(t.id).second) throw Error(ErrorCode::ParseError, "duplicate template id: " + t.id);
      t.language = registry.require_language(jt.at("language").get<std::string>()).id;
      t.pos = jt.at("pos").get<std::string>();
      if (!registry.has_pos(t.pos)) throw Error(ErrorCode::UnknownPos, t.id + ": unknown part of speech " + t.pos);
      t.lemma_pattern = unicode::nfc(jt.at("lemma_pattern").get<std::string>());
      if (t.lemma_pattern.empty()) throw Error(ErrorCode::ParseError, t.id + ": lemma_pattern must not be empty");
      if (jt.contains("variety")) {
        const std::string name = jt.at("variety").get<std::string>();
        const Dialect* d = registry.find_dialect(t.language, name);
        if (!d) throw Error(ErrorCode::UnknownDialect, t.id + ": unknown variety " + name);
        t.variety = d->id;
      }
      std::set<std::string> stem_names{std::string(ParadigmTemplate::kLemmaStem)};
      for (const json& js : jt.value("stems", json::array())) {
        StemRule rule{js.at("name").get<std::string>(), unicode::nfc(js.value("strip", "")),
                      unicode::nfc(js.value("append", ""))};
        if (!stem_names.insert(rule.name).second) throw Error(ErrorCode::ParseError, t.id + ": stem defined twice: " + rule.name);
        if (!ends_with(t.lemma_pattern, rule.strip)) {
          throw Error(ErrorCode::ParseError,
                      t.id + ": stem '" + rule.name + "' strips '" + rule.strip + "', which is not a suffix of the pattern");
        }
        t.stems.push_back(std::move(rule));
      }
      std::vector<Gramset> seen;
      for (const json& jr : jt.at("rows")) {
        AffixRow row;
        const auto names = jr.at("gramset").get<std::vector<std::string>>();
        row.gramset = registry.make_gramset(std::span<const std::string>(names));
        row.stem = jr.value("stem", std::string(ParadigmTemplate::kLemmaStem));
        row.suffix = unicode::nfc(jr.value("suffix", ""));
        if (!stem_names.count(row.stem)) {
          throw Error(ErrorCode::UndefinedStem, t.id + ": row uses undefined stem '" + row.stem + "'",
                      {{"template", t.id}, {"stem", row.stem}});
        }
        if (std::find(seen.begin(), seen.end(), row.gramset) != seen.end()) {
          throw Error(ErrorCode::ParseError, t.id + ": gramset listed twice: " + registry.describe(row.gramset));
        }
        seen.push_back(row.gramset);
        t.rows.push_back(std::move(row));
      }
      out.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("template document: ") + e.what());
  }
  return TemplateSet(std::move(out));
}

TemplateSet load_ruleset_text(const Registry& registry, std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return TemplateSet{};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("template document: ") + e.what());
  }
  return load_ruleset(registry, doc);
}

TemplateSet load_ruleset_file(const Registry& registry, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open template file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ruleset_text(registry, text);
}

TemplateSet load_default_ruleset(const Registry& registry) {
  return load_ruleset_file(registry, std::filesystem::path(KORPUS_DATA_DIR) / "templates.json");
}

std::vector<Wordform> generate_paradigm(const Lemma& lemma, const TemplateSet& templates) {
  const ParadigmTemplate* t = templates.match(lemma);
  if (!t) {
    throw Error(ErrorCode::NoTemplateMatch, "no paradigm template matches " + lemma.surface + " (" + lemma.pos + ")",
                {{"lemma", lemma.id.value}});
  }
  return t->expand(lemma.surface);
}

std::vector<Wordform> generate_paradigm(Dictionary& dictionary, LemmaId id, const TemplateSet& templates) {
  const Lemma& lemma = dictionary.require(id);
  const ParadigmTemplate* t = templates.match(lemma);
  if (!t) {
    throw Error(ErrorCode::NoTemplateMatch, "no paradigm template matches " + lemma.surface + " (" + lemma.pos + ")",
                {{"lemma", id.value}});
  }
  std::vector<Wordform> forms = t->expand(lemma.surface);
  dictionary.replace_generated(id, forms, t->id);
  return forms;
}

}  // namespace korpus

#include "korpus/unimorph.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "korpus/error.hpp"

namespace korpus {

using nlohmann::json;

FeatureMap FeatureMap::from_json(const Registry& registry, const json& doc) {
  FeatureMap m;
  try {
    for (const auto& [pos, token] : doc.at("pos").items()) {
      const std::string tok = token.get<std::string>();
      if (tok.empty()) throw Error(ErrorCode::ParseError, "empty UniMorph token for part of speech " + pos);
      if (!m.pos_inverse_.emplace(tok, pos).second) throw Error(ErrorCode::ParseError, "UniMorph token used twice: " + tok);
      m.pos_.emplace(pos, tok);
    }
    for (const auto& [name, token] : doc.at("features").items()) {
      const Grammeme* g = registry.find_grammeme(name);
      if (!g) throw Error(ErrorCode::UnknownGrammeme, "feature map names unknown grammeme " + name);
      const std::string tok = token.get<std::string>();
      if (tok.find_first_of(";\t\n") != std::string::npos) {
        throw Error(ErrorCode::ParseError, "UniMorph token contains a separator: " + tok);
      }
      if (!tok.empty()) {
        if (m.pos_inverse_.count(tok) || !m.features_inverse_.emplace(tok, g->id).second) {
          throw Error(ErrorCode::ParseError, "UniMorph token used twice: " + tok);
        }
      }
      m.features_.emplace(g->id, tok);
    }
    m.order_ = doc.value("order", std::vector<std::string>{});
    for (const json& ji : doc.value("implied", json::array())) {
      const std::string name = ji.at("grammeme").get<std::string>();
      const Grammeme* g = registry.find_grammeme(name);
      if (!g) throw Error(ErrorCode::UnknownGrammeme, "implied rule names unknown grammeme " + name);
      m.implied_.push_back({g->id, ji.value("pos", std::set<std::string>{}), ji.at("when_any").get<std::set<std::string>>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("feature map: ") + e.what());
  }
  for (const auto& [id, tok] : m.features_) {
    if (!tok.empty()) continue;
    const bool restorable = std::any_of(m.implied_.begin(), m.implied_.end(), [&](const Implied& r) { return r.grammeme == id; });
    if (!restorable) {
      throw Error(ErrorCode::ParseError, "grammeme " + registry.grammeme_ref(id) + " is unmarked but has no implied rule");
    }
  }
  return m;
}

FeatureMap FeatureMap::load_file(const Registry& registry, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open feature map " + path.string());
  try {
    return from_json(registry, json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

FeatureMap FeatureMap::load_default(const Registry& registry) {
  return load_file(registry, std::filesystem::path(KORPUS_DATA_DIR) / "unimorph_features.json");
}

const std::string* FeatureMap::pos_token(std::string_view pos) const {
  auto it = pos_.find(pos);
  return it == pos_.end() ? nullptr : &it->second;
}

const std::string* FeatureMap::grammeme_token(GrammemeId id) const {
  auto it = features_.find(id);
  return it == features_.end() ? nullptr : &it->second;
}

const std::string* FeatureMap::pos_for_token(std::string_view token) const {
  auto it = pos_inverse_.find(token);
  return it == pos_inverse_.end() ? nullptr : &it->second;
}

std::optional<GrammemeId> FeatureMap::grammeme_for_token(std::string_view token) const {
  auto it = features_inverse_.find(token);
  if (it == features_inverse_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureMap::category_rank(std::string_view category) const {
  auto it = std::find(order_.begin(), order_.end(), category);
  return static_cast<std::size_t>(it - order_.begin());
}

std::string unimorph_features(const Registry& registry, const FeatureMap& map, std::string_view pos,
                              const Gramset& gramset) {
  const std::string* pos_tok = map.pos_token(pos);
  if (!pos_tok) {
    throw Error(ErrorCode::UnknownPos, "feature map has no token for part of speech " + std::string(pos),
                {{"pos", std::string(pos)}});
  }
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> parts;
  std::size_t seq = 0;
  for (GrammemeId id : gramset.grammemes()) {
    const std::string* tok = map.grammeme_token(id);
    if (!tok) {
      const std::string name = registry.grammeme_ref(id);
      throw Error(ErrorCode::UnmappedGrammeme, "grammeme " + name + " has no UniMorph feature", {{"grammeme", name}});
    }
    if (tok->empty()) continue;
    const Grammeme* g = registry.grammeme(id);
    parts.emplace_back(map.category_rank(g->category), seq++, *tok);
  }
  std::sort(parts.begin(), parts.end());
  std::string out = *pos_tok;
  for (const auto& p : parts) {
    out += ';';
    out += std::get<2>(p);
  }
  return out;
}

std::vector<UnimorphRow> export_unimorph(const Dictionary& dictionary, const Registry& registry, LanguageId language,
                                         const FeatureMap& map) {
  struct Item {
    const Lemma* lemma;
    const Wordform* form;
  };
  std::vector<Item> items;
  for (const auto& [id, lemma] : dictionary.lemmas()) {
    if (lemma.language != language) continue;
    for (const Wordform& wf : lemma.wordforms) items.push_back({&lemma, &wf});
  }
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (a.lemma->surface != b.lemma->surface) return a.lemma->surface < b.lemma->surface;
    if (a.form->gramset != b.form->gramset) return registry.gramset_less(a.form->gramset, b.form->gramset);
    if (a.form->surface != b.form->surface) return a.form->surface < b.form->surface;
    if (a.lemma->id != b.lemma->id) return a.lemma->id < b.lemma->id;
    return a.form->variety < b.form->variety;
  });
  std::vector<UnimorphRow> rows;
  rows.reserve(items.size());
  for (const Item& item : items) {
    rows.push_back({item.lemma->surface, item.form->surface,
                    unimorph_features(registry, map, item.lemma->pos, item.form->gramset)});
  }
  return rows;
}

std::string format_unimorph(const std::vector<UnimorphRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.lemma;
    out += '\t';
    out += r.form;
    out += '\t';
    out += r.features;
    out += '\n';
  }
  return out;
}

std::vector<UnimorphRow> parse_unimorph(std::string_view text) {
  std::vector<UnimorphRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    const bool ok = cols.size() == 3 && std::none_of(cols.begin(), cols.end(), [](auto c) { return c.empty(); });
    if (!ok) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected 3 tab-separated columns, found " + std::to_string(cols.size()),
                  {{"line", line_no}, {"columns", cols.size()}});
    }
    rows.push_back({std::string(cols[0]), std::string(cols[1]), std::string(cols[2])});
  }
  return rows;
}

ImportReport import_unimorph(Dictionary& dictionary, const Registry& registry, std::string_view text,
                             LanguageId language, const FeatureMap& map, std::optional<DialectId> variety) {
  if (!registry.language(language)) throw Error(ErrorCode::UnknownLanguage, "import language is not registered");

  struct Parsed {
    std::string lemma;
    std::string pos;
    Wordform form;
  };
  std::vector<Parsed> parsed;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  // Parse line by line ourselves so errors carry the original line numbers.
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    std::vector<UnimorphRow> one;
    try {
      one = parse_unimorph(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 3 tab-separated columns",
                  {{"line", line_no}});
    }
    if (one.empty()) continue;
    const UnimorphRow& row = one.front();

    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
      const std::size_t semi = row.features.find(';', start);
      tokens.push_back(row.features.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    const std::string* lemma_pos = map.pos_for_token(tokens.front());
    if (!lemma_pos) {
      throw Error(ErrorCode::UnknownFeature, "line " + std::to_string(line_no) + ": first feature must be a part of speech, got '" +
                                                 tokens.front() + "'",
                  {{"line", line_no}, {"feature", tokens.front()}});
    }
    std::vector<GrammemeId> ids;
    std::set<std::string> categories;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto id = map.grammeme_for_token(tokens[i]);
      if (!id) {
        throw Error(ErrorCode::UnknownFeature, "line " + std::to_string(line_no) + ": unknown feature '" + tokens[i] + "'",
                    {{"line", line_no}, {"feature", tokens[i]}});
      }
      ids.push_back(*id);
      categories.insert(registry.grammeme(*id)->category);
    }
    const std::set<std::string> present(tokens.begin() + 1, tokens.end());
    for (const auto& rule : map.implied()) {
      const Grammeme* g = registry.grammeme(rule.grammeme);
      if (!rule.pos.empty() && !rule.pos.count(*lemma_pos)) continue;
      if (categories.count(g->category)) continue;
      const bool triggered = std::any_of(rule.when_any.begin(), rule.when_any.end(),
                                         [&](const std::string& t) { return present.count(t) > 0; });
      if (!triggered) continue;
      ids.push_back(rule.grammeme);
      categories.insert(g->category);
    }
    Wordform wf;
    try {
      wf.gramset = registry.make_gramset(std::span<const GrammemeId>(ids));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what(), {{"line", line_no}});
    }
    wf.surface = row.form;
    wf.variety = variety;
    wf.origin = WordformOrigin::Imported;
    parsed.push_back({row.lemma, *lemma_pos, std::move(wf)});
  }

  ImportReport report;
  report.rows = parsed.size();
  std::map<std::pair<std::string, std::string>, LemmaId> lemma_for;
  for (Parsed& p : parsed) {
    const auto key = std::pair(p.lemma, p.pos);
    auto it = lemma_for.find(key);
    if (it == lemma_for.end()) {
      std::optional<LemmaId> existing;
      for (const auto& [id, lemma] : dictionary.lemmas()) {
        if (lemma.language == language && lemma.pos == p.pos && lemma.surface == p.lemma) {
          existing = id;
          break;
        }
      }
      if (!existing) {
        Lemma record;
        record.surface = p.lemma;
        record.language = language;
        record.pos = p.pos;
        existing = dictionary.add_lemma(registry, std::move(record));
        ++report.lemmas_created;
      }
      it = lemma_for.emplace(key, *existing).first;
    }
    const Lemma& lemma = dictionary.require(it->second);
    const bool taken = std::any_of(lemma.wordforms.begin(), lemma.wordforms.end(), [&](const Wordform& wf) {
      return wf.gramset == p.form.gramset && wf.variety == p.form.variety;
    });
    if (taken) {
      ++report.wordforms_skipped;
      continue;
    }
    dictionary.add_wordform(it->second, std::move(p.form));
    ++report.wordforms_added;
  }
  return report;
}

}  // namespace korpus

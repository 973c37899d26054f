#include "korpus/registry.hpp"

#include <algorithm>
#include <fstream>

#include "korpus/error.hpp"

namespace korpus {

using nlohmann::json;

std::string_view to_string(RegistryFinding::Kind kind) {
  switch (kind) {
    case RegistryFinding::Kind::DanglingReference: return "dangling-reference";
    case RegistryFinding::Kind::Duplicate: return "duplicate";
    case RegistryFinding::Kind::Invalid: return "invalid";
  }
  return "invalid";
}

bool Gramset::contains(GrammemeId id) const { return std::find(ids_.begin(), ids_.end(), id) != ids_.end(); }

bool Gramset::includes(const Gramset& required) const { return includes(std::span(required.ids_)); }

bool Gramset::includes(std::span<const GrammemeId> required) const {
  return std::all_of(required.begin(), required.end(), [&](GrammemeId id) { return contains(id); });
}

namespace {

bool valid_code(std::string_view code) {
  if (code.empty()) return false;
  return std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

void require_non_empty(const std::string& value, const char* what) {
  if (value.empty()) throw Error(ErrorCode::InvalidValue, std::string(what) + " must not be empty");
}

}  // namespace

LanguageId Registry::add_language(std::string code, std::string name) {
  if (!valid_code(code)) throw Error(ErrorCode::InvalidValue, "language code must be lowercase ASCII: '" + code + "'");
  if (find_language(code)) throw Error(ErrorCode::DuplicateEntry, "duplicate language code: " + code);
  LanguageId id{next_language_++};
  languages_.emplace(id, LanguageTag{id, std::move(code), std::move(name)});
  return id;
}

const Dialect& Registry::register_dialect(LanguageId language, std::string name, bool standardized) {
  if (!this->language(language)) {
    throw Error(ErrorCode::UnknownLanguage, "no language with id " + std::to_string(language.value));
  }
  require_non_empty(name, "dialect name");
  if (find_dialect(language, name)) throw Error(ErrorCode::DuplicateDialect, "duplicate dialect: " + name);
  DialectId id{next_dialect_++};
  return dialects_.emplace(id, Dialect{id, language, std::move(name), standardized}).first->second;
}

CorpusTypeId Registry::add_corpus_type(std::string name) {
  require_non_empty(name, "corpus type name");
  if (find_corpus_type(name)) throw Error(ErrorCode::DuplicateEntry, "duplicate corpus type: " + name);
  CorpusTypeId id{next_corpus_type_++};
  corpus_types_.emplace(id, CorpusType{id, std::move(name)});
  return id;
}

GenreId Registry::add_genre(CorpusTypeId corpus_type, std::string name) {
  if (!this->corpus_type(corpus_type)) {
    throw Error(ErrorCode::UnknownCorpusType, "no corpus type with id " + std::to_string(corpus_type.value));
  }
  require_non_empty(name, "genre name");
  if (find_genre(corpus_type, name)) throw Error(ErrorCode::DuplicateEntry, "duplicate genre: " + name);
  GenreId id{next_genre_++};
  genres_.emplace(id, Genre{id, corpus_type, std::move(name)});
  return id;
}

void Registry::add_concept(std::string id, std::string label) {
  require_non_empty(id, "concept id");
  if (concepts_.count(id)) throw Error(ErrorCode::DuplicateEntry, "duplicate concept: " + id);
  std::string key = id;
  concepts_.emplace(std::move(key), ConceptCategory{std::move(id), std::move(label)});
}

void Registry::add_category(const std::string& name) {
  require_non_empty(name, "grammeme category");
  if (std::find(categories_.begin(), categories_.end(), name) == categories_.end()) categories_.push_back(name);
}

GrammemeId Registry::add_grammeme(std::string name, std::string category, std::set<std::string> applicable_pos) {
  require_non_empty(name, "grammeme name");
  require_non_empty(category, "grammeme category");
  for (const auto& [gid, g] : grammemes_) {
    if (g.name == name && g.category == category) {
      throw Error(ErrorCode::DuplicateEntry, "duplicate grammeme: " + category + ":" + name);
    }
  }
  add_category(category);
  GrammemeId id{next_grammeme_++};
  grammemes_.emplace(id, Grammeme{id, std::move(name), std::move(category), std::move(applicable_pos)});
  return id;
}

void Registry::add_pos(std::string pos) {
  require_non_empty(pos, "part of speech");
  if (has_pos(pos)) throw Error(ErrorCode::DuplicateEntry, "duplicate part of speech: " + pos);
  pos_tags_.push_back(std::move(pos));
}

void Registry::remove_language(LanguageId id) { languages_.erase(id); }
void Registry::remove_dialect(DialectId id) { dialects_.erase(id); }
void Registry::remove_corpus_type(CorpusTypeId id) { corpus_types_.erase(id); }
void Registry::remove_genre(GenreId id) { genres_.erase(id); }

const LanguageTag* Registry::language(LanguageId id) const {
  auto it = languages_.find(id);
  return it == languages_.end() ? nullptr : &it->second;
}

const LanguageTag* Registry::find_language(std::string_view code) const {
  for (const auto& [id, lang] : languages_) {
    if (lang.code == code) return &lang;
  }
  return nullptr;
}

const LanguageTag& Registry::require_language(std::string_view code) const {
  if (const auto* lang = find_language(code)) return *lang;
  throw Error(ErrorCode::UnknownLanguage, "unknown language: " + std::string(code));
}

const Dialect* Registry::dialect(DialectId id) const {
  auto it = dialects_.find(id);
  return it == dialects_.end() ? nullptr : &it->second;
}

const Dialect* Registry::find_dialect(LanguageId language, std::string_view name) const {
  for (const auto& [id, d] : dialects_) {
    if (d.language == language && d.name == name) return &d;
  }
  return nullptr;
}

const Dialect* Registry::find_dialect(std::string_view name) const {
  const Dialect* found = nullptr;
  for (const auto& [id, d] : dialects_) {
    if (d.name != name) continue;
    if (found) return nullptr;
    found = &d;
  }
  return found;
}

std::vector<const Dialect*> Registry::dialects_of(LanguageId language) const {
  std::vector<const Dialect*> out;
  for (const auto& [id, d] : dialects_) {
    if (d.language == language) out.push_back(&d);
  }
  return out;
}

const CorpusType* Registry::corpus_type(CorpusTypeId id) const {
  auto it = corpus_types_.find(id);
  return it == corpus_types_.end() ? nullptr : &it->second;
}

const CorpusType* Registry::find_corpus_type(std::string_view name) const {
  for (const auto& [id, ct] : corpus_types_) {
    if (ct.name == name) return &ct;
  }
  return nullptr;
}

const Genre* Registry::genre(GenreId id) const {
  auto it = genres_.find(id);
  return it == genres_.end() ? nullptr : &it->second;
}

const Genre* Registry::find_genre(CorpusTypeId corpus_type, std::string_view name) const {
  for (const auto& [id, g] : genres_) {
    if (g.corpus_type == corpus_type && g.name == name) return &g;
  }
  return nullptr;
}

const Genre* Registry::find_genre(std::string_view name) const {
  const Genre* found = nullptr;
  for (const auto& [id, g] : genres_) {
    if (g.name != name) continue;
    if (found) return nullptr;
    found = &g;
  }
  return found;
}

const ConceptCategory* Registry::find_concept(std::string_view id) const {
  auto it = concepts_.find(std::string(id));
  return it == concepts_.end() ? nullptr : &it->second;
}

const Grammeme* Registry::grammeme(GrammemeId id) const {
  auto it = grammemes_.find(id);
  return it == grammemes_.end() ? nullptr : &it->second;
}

const Grammeme* Registry::find_grammeme(std::string_view name) const {
  std::string_view category;
  if (auto colon = name.find(':'); colon != std::string_view::npos) {
    category = name.substr(0, colon);
    name = name.substr(colon + 1);
  }
  const Grammeme* found = nullptr;
  for (const auto& [id, g] : grammemes_) {
    if (g.name != name || (!category.empty() && g.category != category)) continue;
    if (found) return nullptr;
    found = &g;
  }
  return found;
}

bool Registry::has_pos(std::string_view pos) const {
  return std::find(pos_tags_.begin(), pos_tags_.end(), pos) != pos_tags_.end();
}

std::size_t Registry::category_rank(const std::string& category) const {
  auto it = std::find(categories_.begin(), categories_.end(), category);
  return static_cast<std::size_t>(it - categories_.begin());
}

Gramset Registry::make_gramset(std::span<const GrammemeId> grammemes) const {
  std::vector<std::pair<std::size_t, GrammemeId>> ranked;
  ranked.reserve(grammemes.size());
  for (GrammemeId id : grammemes) {
    const Grammeme* g = grammeme(id);
    if (!g) throw Error(ErrorCode::UnknownGrammeme, "unknown grammeme id " + std::to_string(id.value));
    ranked.emplace_back(category_rank(g->category), id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<GrammemeId> ids;
  ids.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i > 0 && ranked[i].first == ranked[i - 1].first) {
      if (ranked[i].second == ranked[i - 1].second) {
        throw Error(ErrorCode::DuplicateCategory, "grammeme listed twice: " + grammeme(ranked[i].second)->name);
      }
      const auto& a = *grammeme(ranked[i - 1].second);
      const auto& b = *grammeme(ranked[i].second);
      throw Error(ErrorCode::DuplicateCategory,
                  "grammemes " + a.name + " and " + b.name + " share category " + a.category,
                  json{{"category", a.category}, {"grammemes", {a.name, b.name}}});
    }
    ids.push_back(ranked[i].second);
  }
  return Gramset(std::move(ids));
}

Gramset Registry::make_gramset(std::span<const std::string> names) const {
  std::vector<GrammemeId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    const Grammeme* g = find_grammeme(name);
    if (!g) throw Error(ErrorCode::UnknownGrammeme, "unknown grammeme: " + name, json{{"grammeme", name}});
    ids.push_back(g->id);
  }
  return make_gramset(std::span<const GrammemeId>(ids));
}

Gramset Registry::make_gramset(std::initializer_list<std::string_view> names) const {
  std::vector<std::string> owned(names.begin(), names.end());
  return make_gramset(std::span<const std::string>(owned));
}

std::string Registry::grammeme_ref(GrammemeId id) const {
  const Grammeme* g = grammeme(id);
  if (!g) return "#" + std::to_string(id.value);
  if (find_grammeme(g->name) == g) return g->name;
  return g->category + ":" + g->name;
}

std::vector<std::string> Registry::gramset_names(const Gramset& gramset) const {
  std::vector<std::string> out;
  for (GrammemeId id : gramset.grammemes()) out.push_back(grammeme_ref(id));
  return out;
}

std::string Registry::describe(const Gramset& gramset) const {
  std::string out;
  for (GrammemeId id : gramset.grammemes()) {
    if (!out.empty()) out += ", ";
    const Grammeme* g = grammeme(id);
    out += g ? g->name : "#" + std::to_string(id.value);
  }
  return out;
}

bool Registry::gramset_less(const Gramset& a, const Gramset& b) const {
  auto key = [this](GrammemeId id) {
    const Grammeme* g = grammeme(id);
    return std::pair(g ? category_rank(g->category) : categories_.size(), id);
  };
  return std::lexicographical_compare(a.grammemes().begin(), a.grammemes().end(), b.grammemes().begin(),
                                      b.grammemes().end(), [&](GrammemeId x, GrammemeId y) { return key(x) < key(y); });
}

void Registry::validate_meta(const TextMeta& meta) const {
  if (meta.title.empty()) throw Error(ErrorCode::InvalidMeta, "text title must not be empty");
  if (!language(meta.language)) throw Error(ErrorCode::UnknownLanguage, "text language is not registered");
  if (meta.dialect) {
    const Dialect* d = dialect(*meta.dialect);
    if (!d) throw Error(ErrorCode::UnknownDialect, "text dialect is not registered");
    if (d->language != meta.language) {
      throw Error(ErrorCode::InvalidMeta, "dialect '" + d->name + "' does not belong to the text language");
    }
  }
  if (!corpus_type(meta.corpus_type)) throw Error(ErrorCode::UnknownCorpusType, "text corpus type is not registered");
  if (meta.genre) {
    const Genre* g = genre(*meta.genre);
    if (!g) throw Error(ErrorCode::UnknownGenre, "text genre is not registered");
    if (g->corpus_type != meta.corpus_type) {
      throw Error(ErrorCode::InvalidMeta, "genre '" + g->name + "' does not belong to the text corpus type");
    }
  }
}

std::vector<RegistryFinding> Registry::validate() const {
  using Kind = RegistryFinding::Kind;
  std::vector<RegistryFinding> out;
  std::set<std::string> seen;
  for (const auto& [id, lang] : languages_) {
    if (!valid_code(lang.code)) out.push_back({Kind::Invalid, "language:" + std::to_string(id.value), "bad code"});
    if (!seen.insert(lang.code).second) out.push_back({Kind::Duplicate, "language:" + lang.code, "code"});
  }
  seen.clear();
  for (const auto& [id, d] : dialects_) {
    const std::string subject = "dialect:" + std::to_string(id.value);
    if (!language(d.language)) {
      out.push_back({Kind::DanglingReference, subject, "language " + std::to_string(d.language.value)});
    }
    if (!seen.insert(std::to_string(d.language.value) + "\x1f" + d.name).second) {
      out.push_back({Kind::Duplicate, subject, d.name});
    }
  }
  seen.clear();
  for (const auto& [id, ct] : corpus_types_) {
    if (!seen.insert(ct.name).second) out.push_back({Kind::Duplicate, "corpus-type:" + std::to_string(id.value), ct.name});
  }
  seen.clear();
  for (const auto& [id, g] : genres_) {
    const std::string subject = "genre:" + std::to_string(id.value);
    if (!corpus_type(g.corpus_type)) {
      out.push_back({Kind::DanglingReference, subject, "corpus type " + std::to_string(g.corpus_type.value)});
    }
    if (!seen.insert(std::to_string(g.corpus_type.value) + "\x1f" + g.name).second) {
      out.push_back({Kind::Duplicate, subject, g.name});
    }
  }
  seen.clear();
  for (const auto& [id, g] : grammemes_) {
    const std::string subject = "grammeme:" + std::to_string(id.value);
    if (g.category.empty()) out.push_back({Kind::Invalid, subject, "empty category"});
    if (!seen.insert(g.category + "\x1f" + g.name).second) out.push_back({Kind::Duplicate, subject, g.name});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- structured-text form -------------------------------------------------

namespace {

template <class IdT>
std::uint32_t bump(std::uint32_t next, IdT id) {
  return std::max(next, id.value + 1);
}

}  // namespace

Registry Registry::from_json(const json& doc) {
  Registry r;
  try {
    for (const auto& j : doc.value("languages", json::array())) {
      const std::string code = j.at("code");
      if (j.contains("id")) r.next_language_ = j.at("id").get<std::uint32_t>();
      r.add_language(code, j.value("name", code));
      r.next_language_ = std::max<std::uint32_t>(r.next_language_, 1);
    }
    // Explicit ids may leave gaps; keep the counter past the largest one seen.
    for (const auto& [id, lang] : r.languages_) r.next_language_ = bump(r.next_language_, id);

    auto resolve_language = [&r](const json& ref) -> LanguageId {
      if (ref.is_number()) return LanguageId{ref.get<std::uint32_t>()};
      return r.require_language(ref.get<std::string>()).id;
    };
    for (const auto& j : doc.value("dialects", json::array())) {
      const LanguageId lang = resolve_language(j.at("language"));
      const std::string name = j.at("name");
      const bool standardized = j.value("standardized", false);
      if (j.contains("id")) {
        DialectId id{j.at("id").get<std::uint32_t>()};
        if (r.find_dialect(lang, name)) throw Error(ErrorCode::DuplicateDialect, "duplicate dialect: " + name);
        r.dialects_.emplace(id, Dialect{id, lang, name, standardized});
        r.next_dialect_ = bump(r.next_dialect_, id);
      } else {
        r.register_dialect(lang, name, standardized);
      }
    }
    for (const auto& j : doc.value("corpus_types", json::array())) {
      const std::string name = j.is_string() ? j.get<std::string>() : j.at("name").get<std::string>();
      if (j.is_object() && j.contains("id")) r.next_corpus_type_ = j.at("id").get<std::uint32_t>();
      r.add_corpus_type(name);
    }
    for (const auto& j : doc.value("genres", json::array())) {
      const json& ref = j.at("corpus_type");
      CorpusTypeId ct;
      if (ref.is_number()) {
        ct = CorpusTypeId{ref.get<std::uint32_t>()};
      } else {
        const CorpusType* found = r.find_corpus_type(ref.get<std::string>());
        if (!found) throw Error(ErrorCode::UnknownCorpusType, "unknown corpus type: " + ref.get<std::string>());
        ct = found->id;
      }
      if (j.contains("id")) {
        GenreId id{j.at("id").get<std::uint32_t>()};
        r.genres_.emplace(id, Genre{id, ct, j.at("name").get<std::string>()});
        r.next_genre_ = bump(r.next_genre_, id);
      } else {
        r.add_genre(ct, j.at("name"));
      }
    }
    for (const auto& c : doc.value("categories", json::array())) r.add_category(c.get<std::string>());
    for (const auto& j : doc.value("grammemes", json::array())) {
      if (j.contains("id")) r.next_grammeme_ = j.at("id").get<std::uint32_t>();
      r.add_grammeme(j.at("name"), j.at("category"), j.value("pos", std::set<std::string>{}));
    }
    for (const auto& p : doc.value("pos", json::array())) r.add_pos(p.get<std::string>());
    for (const auto& j : doc.value("concepts", json::array())) r.add_concept(j.at("id"), j.value("label", ""));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("registry document: ") + e.what());
  }
  return r;
}

Registry Registry::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open registry file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return from_json(doc);
}

Registry Registry::load_default() { return load_file(std::filesystem::path(KORPUS_DATA_DIR) / "registry.json"); }

json Registry::to_json() const {
  json doc;
  doc["languages"] = json::array();
  for (const auto& [id, l] : languages_) doc["languages"].push_back({{"id", id}, {"code", l.code}, {"name", l.name}});
  doc["dialects"] = json::array();
  for (const auto& [id, d] : dialects_) {
    doc["dialects"].push_back({{"id", id}, {"language", d.language}, {"name", d.name}, {"standardized", d.standardized}});
  }
  doc["corpus_types"] = json::array();
  for (const auto& [id, ct] : corpus_types_) doc["corpus_types"].push_back({{"id", id}, {"name", ct.name}});
  doc["genres"] = json::array();
  for (const auto& [id, g] : genres_) {
    doc["genres"].push_back({{"id", id}, {"corpus_type", g.corpus_type}, {"name", g.name}});
  }
  doc["categories"] = categories_;
  doc["grammemes"] = json::array();
  for (const auto& [id, g] : grammemes_) {
    doc["grammemes"].push_back({{"id", id}, {"name", g.name}, {"category", g.category}, {"pos", g.applicable_pos}});
  }
  doc["pos"] = pos_tags_;
  doc["concepts"] = json::array();
  for (const auto& [id, c] : concepts_) doc["concepts"].push_back({{"id", c.id}, {"label", c.label}});
  return doc;
}

// --- text metadata ----------------------------------------------------------

json meta_to_json(const Registry& registry, const TextMeta& meta) {
  json j;
  j["title"] = meta.title;
  if (meta.title_translation) j["title_translation"] = *meta.title_translation;
  const LanguageTag* lang = registry.language(meta.language);
  j["language"] = lang ? json(lang->code) : json(meta.language);
  if (meta.dialect) {
    const Dialect* d = registry.dialect(*meta.dialect);
    j["dialect"] = d ? json(d->name) : json(*meta.dialect);
  }
  const CorpusType* ct = registry.corpus_type(meta.corpus_type);
  j["corpus_type"] = ct ? json(ct->name) : json(meta.corpus_type);
  if (meta.genre) {
    const Genre* g = registry.genre(*meta.genre);
    j["genre"] = g ? json(g->name) : json(*meta.genre);
  }
  auto opt = [&j](const char* key, const auto& value) {
    if (value) j[key] = *value;
  };
  opt("author", meta.author);
  opt("informant", meta.informant);
  opt("recorder", meta.recorder);
  opt("year_recorded", meta.year_recorded);
  opt("year_published", meta.year_published);
  opt("source", meta.source);
  opt("place_of_recording", meta.place_of_recording);
  opt("license", meta.license);
  return j;
}

TextMeta meta_from_json(const Registry& registry, const json& j) {
  TextMeta meta;
  try {
    meta.title = j.value("title", "");
    if (j.contains("title_translation")) meta.title_translation = j.at("title_translation").get<std::string>();

    const json& lang = j.at("language");
    meta.language = lang.is_number() ? LanguageId{lang.get<std::uint32_t>()}
                                     : registry.require_language(lang.get<std::string>()).id;
    if (j.contains("dialect") && !j.at("dialect").is_null()) {
      const json& ref = j.at("dialect");
      if (ref.is_number()) {
        meta.dialect = DialectId{ref.get<std::uint32_t>()};
      } else {
        const std::string name = ref.get<std::string>();
        const Dialect* d = registry.find_dialect(meta.language, name);
        if (!d && registry.find_dialect(name)) {
          throw Error(ErrorCode::InvalidMeta, "dialect '" + name + "' does not belong to the text language");
        }
        if (!d) throw Error(ErrorCode::UnknownDialect, "unknown dialect: " + name);
        meta.dialect = d->id;
      }
    }
    const json& ct = j.at("corpus_type");
    if (ct.is_number()) {
      meta.corpus_type = CorpusTypeId{ct.get<std::uint32_t>()};
    } else {
      const CorpusType* found = registry.find_corpus_type(ct.get<std::string>());
      if (!found) throw Error(ErrorCode::UnknownCorpusType, "unknown corpus type: " + ct.get<std::string>());
      meta.corpus_type = found->id;
    }
    if (j.contains("genre") && !j.at("genre").is_null()) {
      const json& ref = j.at("genre");
      if (ref.is_number()) {
        meta.genre = GenreId{ref.get<std::uint32_t>()};
      } else {
        const std::string name = ref.get<std::string>();
        const Genre* g = registry.find_genre(meta.corpus_type, name);
        if (!g) {
          bool elsewhere = std::any_of(registry.genres().begin(), registry.genres().end(),
                                       [&](const auto& kv) { return kv.second.name == name; });
          if (elsewhere) {
            throw Error(ErrorCode::InvalidMeta, "genre '" + name + "' does not belong to the text corpus type");
          }
          throw Error(ErrorCode::UnknownGenre, "unknown genre: " + name);
        }
        meta.genre = g->id;
      }
    }
    auto opt_str = [&j](const char* key, std::optional<std::string>& out) {
      if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<std::string>();
    };
    auto opt_int = [&j](const char* key, std::optional<int>& out) {
      if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<int>();
    };
    opt_str("author", meta.author);
    opt_str("informant", meta.informant);
    opt_str("recorder", meta.recorder);
    opt_int("year_recorded", meta.year_recorded);
    opt_int("year_published", meta.year_published);
    opt_str("source", meta.source);
    opt_str("place_of_recording", meta.place_of_recording);
    opt_str("license", meta.license);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidMeta, std::string("metadata: ") + e.what());
  }
  registry.validate_meta(meta);
  return meta;
}

}  // namespace korpus

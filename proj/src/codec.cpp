#include "korpus/codec.hpp"

#include <algorithm>

#include "korpus/error.hpp"

namespace korpus::codec {

using nlohmann::json;

namespace {

json span_json(const Span& s) { return json::array({s.start, s.end}); }

Span span_from(const json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

LanguageId language_from(const Registry& registry, const json& j) {
  return j.is_number() ? LanguageId{j.get<std::uint32_t>()} : registry.require_language(j.get<std::string>()).id;
}

json language_json(const Registry& registry, LanguageId id) {
  const LanguageTag* tag = registry.language(id);
  return tag ? json(tag->code) : json(id);
}

json extra_fields(const json& j, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
      extra[key] = value;
    }
  }
  return extra;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json gramset_to_json(const Registry& registry, const Gramset& gramset) { return registry.gramset_names(gramset); }

Gramset gramset_from_json(const Registry& registry, const json& j) {
  const auto names = guarded("gramset", [&] { return j.get<std::vector<std::string>>(); });
  return registry.make_gramset(std::span<const std::string>(names));
}

json lemma_to_json(const Registry& registry, const Lemma& lemma) {
  json j = lemma.extra.is_object() ? lemma.extra : json::object();
  j["id"] = lemma.id;
  j["surface"] = lemma.surface;
  j["language"] = language_json(registry, lemma.language);
  j["pos"] = lemma.pos;
  j["dialects_of_usage"] = lemma.dialects_of_usage;
  json meanings = json::array();
  for (const Meaning& m : lemma.meanings) {
    json jm = {{"ordinal", m.ordinal}, {"interpretations", m.interpretations}};
    if (m.concept_id) jm["concept"] = *m.concept_id;
    json links = json::object();
    for (const auto& [lang, targets] : m.translation_links) {
      const LanguageTag* tag = registry.language(lang);
      links[tag ? tag->code : std::to_string(lang.value)] = targets;
    }
    jm["translation_links"] = std::move(links);
    meanings.push_back(std::move(jm));
  }
  j["meanings"] = std::move(meanings);
  json forms = json::array();
  for (const Wordform& wf : lemma.wordforms) {
    json jf = {{"gramset", gramset_to_json(registry, wf.gramset)}, {"surface", wf.surface}, {"origin", to_string(wf.origin)}};
    if (wf.variety) jf["variety"] = *wf.variety;
    forms.push_back(std::move(jf));
  }
  j["wordforms"] = std::move(forms);
  if (lemma.template_id) j["template"] = *lemma.template_id;
  return j;
}

Lemma lemma_from_json(const Registry& registry, const json& j) {
  return guarded("lemma", [&] {
    Lemma l;
    l.id = LemmaId{j.value("id", 0u)};
    l.surface = j.at("surface").get<std::string>();
    l.language = language_from(registry, j.at("language"));
    l.pos = j.at("pos").get<std::string>();
    for (const json& d : j.value("dialects_of_usage", json::array())) l.dialects_of_usage.insert(d.get<DialectId>());
    int next_ordinal = 1;
    for (const json& jm : j.value("meanings", json::array())) {
      Meaning m;
      m.ordinal = jm.value("ordinal", next_ordinal);
      next_ordinal = m.ordinal + 1;
      if (jm.contains("concept") && !jm.at("concept").is_null()) m.concept_id = jm.at("concept").get<std::string>();
      m.interpretations = jm.value("interpretations", std::map<std::string, std::string>{});
      for (const auto& [lang, targets] : jm.value("translation_links", json::object()).items()) {
        const bool numeric = !lang.empty() && std::all_of(lang.begin(), lang.end(), [](char c) { return c >= '0' && c <= '9'; });
        const LanguageId id = numeric ? LanguageId{static_cast<std::uint32_t>(std::stoul(lang))}
                                      : registry.require_language(lang).id;
        m.translation_links[id] = targets.get<std::vector<LemmaId>>();
      }
      l.meanings.push_back(std::move(m));
    }
    for (const json& jf : j.value("wordforms", json::array())) {
      Wordform wf;
      wf.gramset = gramset_from_json(registry, jf.at("gramset"));
      wf.surface = jf.at("surface").get<std::string>();
      if (jf.contains("variety") && !jf.at("variety").is_null()) wf.variety = jf.at("variety").get<DialectId>();
      wf.origin = wordform_origin_from_string(jf.value("origin", "manual"));
      l.wordforms.push_back(std::move(wf));
    }
    if (j.contains("template") && !j.at("template").is_null()) l.template_id = j.at("template").get<std::string>();
    l.extra = extra_fields(j, {"id", "surface", "language", "pos", "dialects_of_usage", "meanings", "wordforms", "template"});
    return l;
  });
}

json text_to_json(const Registry& registry, const TextDoc& doc) {
  json j = doc.extra.is_object() ? doc.extra : json::object();
  j["id"] = doc.id;
  j["meta"] = meta_to_json(registry, doc.meta);
  j["accession_date"] = format_date(doc.accession_date);
  j["normalized_text"] = doc.normalized_text;
  json sentences = json::array();
  for (const Sentence& s : doc.sentences) {
    json js = {{"index", s.index}, {"span", span_json(s.span)}};
    if (s.translation) js["translation"] = *s.translation;
    json tokens = json::array();
    for (const Token& t : s.tokens) {
      json jt = {{"position", t.position}, {"span", span_json(t.span)}, {"surface", t.surface}, {"kind", to_string(t.kind)}};
      if (t.word_index) jt["word_index"] = *t.word_index;
      tokens.push_back(std::move(jt));
    }
    js["tokens"] = std::move(tokens);
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return j;
}

TextDoc text_from_json(const Registry& registry, const json& j) {
  return guarded("text", [&] {
    TextDoc doc;
    doc.id = j.at("id").get<TextId>();
    doc.meta = meta_from_json(registry, j.at("meta"));
    doc.accession_date = parse_date(j.at("accession_date").get<std::string>());
    doc.normalized_text = j.at("normalized_text").get<std::string>();
    for (const json& js : j.at("sentences")) {
      Sentence s;
      s.index = js.at("index").get<std::uint32_t>();
      s.span = span_from(js.at("span"));
      if (js.contains("translation") && !js.at("translation").is_null()) s.translation = js.at("translation").get<std::string>();
      for (const json& jt : js.at("tokens")) {
        Token t;
        t.position = jt.at("position").get<std::uint32_t>();
        t.span = span_from(jt.at("span"));
        t.surface = jt.at("surface").get<std::string>();
        t.kind = token_kind_from_string(jt.at("kind").get<std::string>());
        if (jt.contains("word_index")) t.word_index = jt.at("word_index").get<std::uint32_t>();
        s.tokens.push_back(std::move(t));
      }
      doc.sentences.push_back(std::move(s));
    }
    doc.extra = extra_fields(j, {"id", "meta", "accession_date", "normalized_text", "sentences", "markup"});
    return doc;
  });
}

json markup_to_json(const Registry& registry, const TokenMarkup& m) {
  json candidates = json::array();
  for (const MarkupCandidate& c : m.candidates) {
    candidates.push_back({{"lemma", c.lemma},
                          {"meaning", c.meaning_ordinal},
                          {"gramset", gramset_to_json(registry, c.gramset)},
                          {"source", to_string(c.source)},
                          {"rank", c.rank}});
  }
  json j = {{"ref", m.ref.str()}, {"state", to_string(m.state)}, {"candidates", std::move(candidates)}};
  if (m.chosen) j["chosen"] = *m.chosen;
  if (m.editor) j["editor"] = *m.editor;
  if (m.verified_at) j["verified_at"] = format_timestamp(*m.verified_at);
  return j;
}

TokenMarkup markup_from_json(const Registry& registry, const json& j) {
  return guarded("markup", [&] {
    TokenMarkup m;
    m.ref = TokenRef::parse(j.at("ref").get<std::string>());
    m.state = markup_state_from_string(j.at("state").get<std::string>());
    for (const json& jc : j.value("candidates", json::array())) {
      m.candidates.push_back({jc.at("lemma").get<LemmaId>(), jc.at("meaning").get<int>(),
                              gramset_from_json(registry, jc.at("gramset")),
                              candidate_source_from_string(jc.value("source", "dictionary")), jc.value("rank", 0)});
    }
    if (j.contains("chosen")) m.chosen = j.at("chosen").get<std::size_t>();
    if (j.contains("editor")) m.editor = j.at("editor").get<std::string>();
    if (j.contains("verified_at")) m.verified_at = parse_timestamp(j.at("verified_at").get<std::string>());
    if (!m.well_formed()) throw Error(ErrorCode::ParseError, "inconsistent markup at " + m.ref.str());
    return m;
  });
}

}  // namespace korpus::codec

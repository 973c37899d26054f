#include "korpus/service.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <httplib.h>

#include "korpus/codec.hpp"
#include "korpus/ingest.hpp"
#include "korpus/paradigm.hpp"
#include "korpus/predictor.hpp"
#include "korpus/unicode.hpp"
#include "korpus/unimorph.hpp"

namespace korpus {

using nlohmann::json;

struct Service::Impl {
  httplib::Server server;
};

// ---------------------------------------------------------------- wire helpers

std::string ApiResponse::payload() const { return text ? *text : body.dump(); }

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownText:
    case ErrorCode::UnknownLemma:
    case ErrorCode::UnknownToken:
      return 404;
    case ErrorCode::MethodNotAllowed:
      return 405;
    case ErrorCode::DuplicateEntry:
    case ErrorCode::DuplicateDialect:
    case ErrorCode::DuplicateCategory:
    case ErrorCode::DuplicateWordform:
      return 409;
    case ErrorCode::IoError:
    case ErrorCode::FormatVersionUnsupported:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::Internal:
      return 500;
    default:
      return 400;
  }
}

json api_error(const Error& e) {
  json err = {{"code", to_string(e.code())}, {"message", e.what()}};
  if (!e.detail().is_null()) err["detail"] = e.detail();
  return {{"error", std::move(err)}};
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 && hex_value(s[i + 2]) >= 0) {
      out += static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2]));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_query_string(std::string_view query) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos <= query.size()) {
    auto amp = query.find('&', pos);
    if (amp == std::string_view::npos) amp = query.size();
    const auto pair = query.substr(pos, amp - pos);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos) {
        out[percent_decode(pair)] = "";
      } else {
        out[percent_decode(pair.substr(0, eq))] = percent_decode(pair.substr(eq + 1));
      }
    }
    pos = amp + 1;
  }
  return out;
}

std::string encode_query_string(const std::map<std::string, std::string>& query) {
  auto enc = [](const std::string& s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
      if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == ',') {
        out += static_cast<char>(c);
      } else {
        out += '%';
        out += kHex[c >> 4];
        out += kHex[c & 0xF];
      }
    }
    return out;
  };
  std::string out;
  for (const auto& [k, v] : query) {
    if (!out.empty()) out += '&';
    out += enc(k) + "=" + enc(v);
  }
  return out;
}

// ---------------------------------------------------------------- request parsing

namespace {

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& q) : q_(q) {}

  std::optional<std::string> str(const std::string& name) const {
    auto it = q_.find(name);
    if (it == q_.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }

  std::optional<long long> integer(const std::string& name) const {
    auto s = str(name);
    if (!s) return std::nullopt;
    long long v = 0;
    auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || p != s->data() + s->size()) {
      throw Error(ErrorCode::InvalidRequest, "parameter " + name + " must be an integer", {{"parameter", name}, {"value", *s}});
    }
    return v;
  }

  std::size_t count(const std::string& name, std::size_t fallback) const {
    auto v = integer(name);
    if (!v) return fallback;
    if (*v < 1) throw Error(ErrorCode::InvalidQuery, "parameter " + name + " must be at least 1", {{"parameter", name}});
    return static_cast<std::size_t>(*v);
  }

  bool flag(const std::string& name) const {
    auto s = str(name);
    if (!s) return false;
    if (*s == "1" || *s == "true" || *s == "yes") return true;
    if (*s == "0" || *s == "false" || *s == "no") return false;
    throw Error(ErrorCode::InvalidRequest, "parameter " + name + " must be true or false", {{"parameter", name}});
  }

 private:
  const std::map<std::string, std::string>& q_;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    if (next > pos) out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::uint32_t parse_id(const std::string& s, const char* what) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidRequest, std::string("malformed ") + what + ": " + s);
  }
  return v;
}

LanguageId resolve_language(const Registry& r, const std::string& ref) {
  if (const LanguageTag* t = r.find_language(ref)) return t->id;
  for (const auto& [id, t] : r.languages()) {
    if (t.name == ref) return id;
  }
  throw Error(ErrorCode::UnknownLanguage, "unknown language: " + ref, {{"language", ref}});
}

CorpusTypeId resolve_corpus_type(const Registry& r, const std::string& ref) {
  if (const CorpusType* c = r.find_corpus_type(ref)) return c->id;
  throw Error(ErrorCode::UnknownCorpusType, "unknown corpus type: " + ref, {{"corpus_type", ref}});
}

DialectId resolve_dialect(const Registry& r, std::optional<LanguageId> language, const std::string& ref) {
  const Dialect* d = language ? r.find_dialect(*language, ref) : r.find_dialect(ref);
  if (!d) throw Error(ErrorCode::UnknownDialect, "unknown dialect: " + ref, {{"dialect", ref}});
  return d->id;
}

GenreId resolve_genre(const Registry& r, std::optional<CorpusTypeId> corpus_type, const std::string& ref) {
  const Genre* g = corpus_type ? r.find_genre(*corpus_type, ref) : r.find_genre(ref);
  if (!g) throw Error(ErrorCode::UnknownGenre, "unknown genre: " + ref, {{"genre", ref}});
  return g->id;
}

std::vector<GrammemeId> resolve_grammemes(const Registry& r, const std::optional<std::string>& list) {
  std::vector<GrammemeId> out;
  if (!list) return out;
  for (const std::string& name : split(*list, ',')) {
    const Grammeme* g = r.find_grammeme(name);
    if (!g) throw Error(ErrorCode::UnknownGrammeme, "unknown grammeme: " + name, {{"grammeme", name}});
    out.push_back(g->id);
  }
  return out;
}

void check_pos(const Registry& r, const std::optional<std::string>& pos) {
  if (pos && !r.has_pos(*pos)) throw Error(ErrorCode::UnknownPos, "unknown part of speech: " + *pos, {{"pos", *pos}});
}

Scope scope_from(const Registry& r, const Params& p) {
  Scope s;
  if (auto v = p.str("language")) s.language = resolve_language(r, *v);
  if (auto v = p.str("corpus_type")) s.corpus_type = resolve_corpus_type(r, *v);
  if (auto v = p.str("dialect")) s.dialect = resolve_dialect(r, s.language, *v);
  if (auto v = p.str("genre")) s.genre = resolve_genre(r, s.corpus_type, *v);
  if (auto v = p.str("texts")) {
    for (const std::string& id : split(*v, ',')) s.texts.push_back(TextId{parse_id(id, "text id")});
  }
  return s;
}

TemplateSet templates_of(const CorpusState& s) {
  return s.templates ? load_ruleset(s.registry, *s.templates) : load_default_ruleset(s.registry);
}

FeatureMap feature_map_of(const CorpusState& s) {
  return s.feature_map ? FeatureMap::from_json(s.registry, *s.feature_map) : FeatureMap::load_default(s.registry);
}

template <class T>
T body_get(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw Error(ErrorCode::InvalidRequest, std::string("request body needs '") + key + "'", {{"field", key}});
  }
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidRequest, std::string("request field '") + key + "' has the wrong type", {{"field", key}});
  }
}

// ---------------------------------------------------------------- rendering

json page_json(std::size_t total, std::size_t page, std::size_t page_size, json items) {
  return {{"total", total}, {"page", page}, {"page_size", page_size}, {"items", std::move(items)}};
}

json lemma_hit_json(const Registry& r, const LemmaHit& h) {
  const LanguageTag* lang = r.language(h.language);
  return {{"id", h.id},
          {"surface", h.surface},
          {"pos", h.pos},
          {"language", lang ? json(lang->code) : json(h.language)},
          {"interpretations", h.interpretations},
          {"wordform_count", h.wordform_count},
          {"examples", {{"verified", h.examples.verified}, {"unverified", h.examples.unverified}, {"total", h.examples.total()}}}};
}

json markup_view(const CorpusState& s, const TokenMarkup& m) {
  json j = codec::markup_to_json(s.registry, m);
  if (const TextDoc* doc = s.corpus.find(m.ref.text)) {
    for (const Sentence& sent : doc->sentences) {
      if (sent.index != m.ref.sentence) continue;
      for (const Token& t : sent.tokens) {
        if (t.position == m.ref.position) j["surface"] = t.surface;
      }
      j["sentence_text"] = doc->slice(sent.span);
    }
  }
  j["homonymy"] = to_string(classify_homonymy(m));
  for (std::size_t i = 0; i < m.candidates.size(); ++i) {
    const MarkupCandidate& c = m.candidates[i];
    json& jc = j["candidates"][i];
    jc["description"] = s.registry.describe(c.gramset);
    if (const Lemma* l = s.dictionary.find(c.lemma)) {
      jc["lemma_surface"] = l->surface;
      jc["pos"] = l->pos;
      if (c.meaning_ordinal >= 1 && c.meaning_ordinal <= static_cast<int>(l->meanings.size())) {
        jc["gloss"] = l->meanings[static_cast<std::size_t>(c.meaning_ordinal - 1)].interpretations;
      }
    }
  }
  return j;
}

json summary_json(const TagSummary& s) {
  return {{"untagged", s.untagged}, {"auto", s.automatic}, {"verified", s.verified}};
}

json wordforms_json(const Registry& r, const std::vector<Wordform>& forms) {
  json out = json::array();
  for (const Wordform& wf : forms) {
    json j = {{"gramset", codec::gramset_to_json(r, wf.gramset)}, {"description", r.describe(wf.gramset)}, {"surface", wf.surface}};
    if (wf.variety) {
      const Dialect* d = r.dialect(*wf.variety);
      j["variety"] = d ? json(d->name) : json(*wf.variety);
    }
    out.push_back(std::move(j));
  }
  return out;
}

json coverage_json(const Coverage& c) {
  return {{"covered", c.covered}, {"total", c.total}, {"percent", c.percent()}, {"display", c.str()}};
}

}  // namespace

// ---------------------------------------------------------------- service

Service::Service(CorpusState state) : Service(std::move(state), Options{}) {}

Service::Service(CorpusState state, Options options)
    : options_(std::move(options)), state_(std::move(state)), impl_(std::make_unique<Impl>()) {
  for (const auto& [id, doc] : state_.corpus.texts()) next_text_id_ = std::max(next_text_id_, id.value + 1);
  reindex();
}

Service::~Service() = default;

void Service::reindex() {
  auto snap = std::make_shared<Snapshot>();
  {
    std::shared_lock lock(state_mutex_);
    snap->state = state_;
  }
  snap->index = CorpusIndex::build(snap->state.corpus, snap->state.markup, snap->state.dictionary);
  std::lock_guard guard(snapshot_mutex_);
  snapshot_ = std::move(snap);
}

std::shared_ptr<const Snapshot> Service::snapshot() const {
  std::lock_guard guard(snapshot_mutex_);
  return snapshot_;
}

CorpusState Service::state() const {
  std::shared_lock lock(state_mutex_);
  return state_;
}

void Service::save(const std::filesystem::path& directory) const {
  std::shared_lock lock(state_mutex_);
  save_bundle(state_, directory);
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    ApiResponse r;
    r.status = http_status(e.code());
    r.body = api_error(e);
    return r;
  } catch (const std::exception& e) {
    ApiResponse r;
    r.status = 500;
    r.body = api_error(Error(ErrorCode::Internal, e.what()));
    return r;
  }
}

ApiResponse Service::dispatch(const ApiRequest& rq) {
  const std::vector<std::string> seg = split(rq.path, '/');
  const Params p(rq.query);
  auto not_found = [&]() -> ApiResponse {
    throw Error(ErrorCode::NotFound, "no such endpoint: " + rq.path, {{"path", rq.path}});
  };
  auto allow = [&](std::initializer_list<const char*> methods) {
    for (const char* m : methods) {
      if (rq.method == m) return;
    }
    throw Error(ErrorCode::MethodNotAllowed, rq.method + " is not allowed on " + rq.path, {{"method", rq.method}});
  };
  auto ok = [](json body) {
    ApiResponse r;
    r.body = std::move(body);
    return r;
  };
  // Runs a mutation under the exclusive lock and persists it when configured.
  auto mutate = [&](auto&& f) -> ApiResponse {
    std::unique_lock lock(state_mutex_);
    json body = f(state_);
    if (options_.bundle) save_bundle(state_, *options_.bundle);
    return ok(std::move(body));
  };
  auto read = [&](auto&& f) -> ApiResponse {
    std::shared_lock lock(state_mutex_);
    return ok(f(std::as_const(state_)));
  };

  if (seg.size() < 2 || seg[0] != "v1") return not_found();
  const std::string& resource = seg[1];

  // /v1/texts, /v1/texts/{id}
  if (resource == "texts" && seg.size() == 2) {
    allow({"GET", "POST"});
    if (rq.method == "GET") {
      const auto snap = snapshot();
      const Registry& r = snap->state.registry;
      TextQuery q;
      if (auto v = p.str("language")) q.language = resolve_language(r, *v);
      if (auto v = p.str("corpus_type")) q.corpus_type = resolve_corpus_type(r, *v);
      if (auto v = p.str("dialect")) q.dialect = resolve_dialect(r, q.language, *v);
      if (auto v = p.str("genre")) q.genre = resolve_genre(r, q.corpus_type, *v);
      q.informant = p.str("informant");
      q.recorder = p.str("recorder");
      q.author = p.str("author");
      q.title = p.str("title");
      q.word = p.str("word");
      q.fragment = p.str("fragment");
      if (auto v = p.integer("year_from")) q.year_from = static_cast<int>(*v);
      if (auto v = p.integer("year_to")) q.year_to = static_cast<int>(*v);
      q.page = p.count("page", 1);
      q.page_size = p.count("page_size", 10);
      const Page<TextHit> page = search_texts(snap->context(), q);
      json items = json::array();
      for (const TextHit& h : page.items) {
        json j = {{"id", h.id}, {"title", h.title}};
        if (h.title_translation) j["title_translation"] = *h.title_translation;
        if (h.snippet) j["snippet"] = *h.snippet;
        items.push_back(std::move(j));
      }
      return ok(page_json(page.total, page.page, page.page_size, std::move(items)));
    }
    return mutate([&](CorpusState& s) {
      const json& b = rq.body;
      RawDocument raw;
      if (b.contains("content_base64")) {
        raw.bytes = base64_decode(body_get<std::string>(b, "content_base64"));
      } else {
        raw.bytes = body_get<std::string>(b, "content");
      }
      raw.declared_encoding = b.value("encoding", "UTF-8");
      const TextMeta meta = meta_from_json(s.registry, body_get<json>(b, "meta"));
      Abbreviations abbreviations;
      if (b.contains("abbreviations")) abbreviations = body_get<Abbreviations>(b, "abbreviations");
      const Date accession = b.contains("accession_date") ? parse_date(body_get<std::string>(b, "accession_date")) : today();
      Ingestor ingestor(next_text_id_);
      TextDoc doc = ingestor.ingest(s.registry, raw, meta, abbreviations, accession);
      json result = {{"id", doc.id}, {"sentences", doc.sentences.size()}, {"word_tokens", doc.word_count()}};
      if (b.contains("translations")) {
        const auto translations = body_get<std::vector<std::string>>(b, "translations");
        const std::string mode = b.value("align", "strict");
        if (mode != "strict" && mode != "partial") {
          throw Error(ErrorCode::InvalidRequest, "align must be strict or partial", {{"align", mode}});
        }
        const AlignReport rep = align_translation(doc, translations, mode == "strict" ? AlignMode::Strict : AlignMode::Partial);
        result["alignment"] = {{"attached", rep.attached}, {"untranslated", rep.untranslated}, {"rejected", rep.rejected}};
      }
      if (b.contains("extra")) {
        for (const auto& [k, v] : body_get<json>(b, "extra").items()) doc.extra[k] = v;
      }
      TagResult tagged = tag_text(doc, s.dictionary);
      result["summary"] = summary_json(tagged.summary);
      s.markup.set_text(doc.id, std::move(tagged.markup));
      next_text_id_ = doc.id.value + 1;
      s.corpus.add(std::move(doc));
      return result;
    });
  }
  if (resource == "texts" && seg.size() == 3) {
    allow({"GET"});
    const TextId id{parse_id(seg[2], "text id")};
    return read([&](const CorpusState& s) {
      const TextDoc* doc = s.corpus.find(id);
      if (!doc) throw Error(ErrorCode::UnknownText, "no text with id " + seg[2], {{"text", id}});
      json j = codec::text_to_json(s.registry, *doc);
      json markup = json::array();
      if (const TextMarkup* m = s.markup.text(id)) {
        for (const auto& [ref, tm] : *m) markup.push_back(markup_view(s, tm));
      }
      j["markup"] = std::move(markup);
      return j;
    });
  }

  // /v1/lemmas, /v1/lemmas/{id}, /v1/lemmas/{id}/generate
  if (resource == "lemmas" && seg.size() == 2) {
    allow({"GET", "POST"});
    if (rq.method == "GET") {
      const auto snap = snapshot();
      const Registry& r = snap->state.registry;
      if (auto form = p.str("wordform")) {
        json items = json::array();
        const SearchContext ctx = snap->context();
        for (LemmaId id : search_lemma_by_wordform(snap->state.dictionary, *form)) {
          const Lemma& l = snap->state.dictionary.require(id);
          LemmaHit h{l.id, l.surface, l.pos, l.language, {}, l.wordforms.size(), example_counts(ctx.index, l.id)};
          for (const Meaning& m : l.meanings) h.interpretations.push_back(m.interpretations);
          items.push_back(lemma_hit_json(r, h));
        }
        const std::size_t n = items.size();
        return ok(page_json(n, 1, std::max<std::size_t>(n, 1), std::move(items)));
      }
      LemmaQuery q;
      q.surface = p.str("surface");
      q.prefix = p.flag("prefix");
      q.pos = p.str("pos");
      check_pos(r, q.pos);
      q.grammemes = resolve_grammemes(r, p.str("gramset"));
      if (auto v = p.str("language")) q.language = resolve_language(r, *v);
      if (auto v = p.str("dialect")) q.dialect = resolve_dialect(r, q.language, *v);
      q.interpretation = p.str("interpretation");
      q.concept_id = p.str("concept");
      if (q.concept_id && !r.find_concept(*q.concept_id)) {
        throw Error(ErrorCode::UnknownConcept, "unknown concept: " + *q.concept_id, {{"concept", *q.concept_id}});
      }
      q.with_examples = p.flag("with_examples");
      q.page = p.count("page", 1);
      q.page_size = p.count("page_size", 10);
      const Page<LemmaHit> page = search_lemmas(snap->context(), q);
      json items = json::array();
      for (const LemmaHit& h : page.items) items.push_back(lemma_hit_json(r, h));
      return ok(page_json(page.total, page.page, page.page_size, std::move(items)));
    }
    return mutate([&](CorpusState& s) {
      json body = rq.body;
      const bool generate = body.is_object() && body.value("generate", false);
      if (body.is_object()) body.erase("generate");
      Lemma record = codec::lemma_from_json(s.registry, body);
      std::optional<std::vector<Wordform>> generated;
      const TemplateSet templates = templates_of(s);
      if (generate) generated = generate_paradigm(record, templates);
      const LemmaId id = s.dictionary.add_lemma(s.registry, std::move(record));
      if (generated) generate_paradigm(s.dictionary, id, templates);
      return codec::lemma_to_json(s.registry, s.dictionary.require(id));
    });
  }
  if (resource == "lemmas" && (seg.size() == 3 || (seg.size() == 4 && seg[3] == "generate"))) {
    const LemmaId id{parse_id(seg[2], "lemma id")};
    if (seg.size() == 4) {
      allow({"POST"});
      return mutate([&](CorpusState& s) {
        const TemplateSet templates = templates_of(s);
        const std::vector<Wordform> forms = generate_paradigm(s.dictionary, id, templates);
        const Lemma& l = s.dictionary.require(id);
        return json{{"lemma", id}, {"template", l.template_id ? json(*l.template_id) : json()}, {"wordforms", wordforms_json(s.registry, forms)}};
      });
    }
    allow({"GET"});
    const auto snap = snapshot();
    return read([&](const CorpusState& s) {
      const Lemma& l = s.dictionary.require(id);
      json j = codec::lemma_to_json(s.registry, l);
      j["paradigm"] = wordforms_json(s.registry, l.wordforms);
      const ExampleCounts c = example_counts(snap->index, id);
      j["examples"] = {{"verified", c.verified}, {"unverified", c.unverified}, {"total", c.total()}};
      return j;
    });
  }

  // /v1/search/lexgram
  if (resource == "search" && seg.size() == 3 && seg[2] == "lexgram") {
    allow({"GET"});
    const auto snap = snapshot();
    const Registry& r = snap->state.registry;
    LexGramQuery q;
    if (auto v = p.str("language")) q.language = resolve_language(r, *v);
    if (auto v = p.str("corpus_type")) q.corpus_type = resolve_corpus_type(r, *v);
    auto constraint = [&](const std::string& n) {
      WordConstraint c;
      c.word = p.str("word" + n);
      c.pos = p.str("pos" + n);
      check_pos(r, c.pos);
      c.grammemes = resolve_grammemes(r, p.str("gramset" + n));
      return c;
    };
    q.word1 = constraint("1");
    WordConstraint w2 = constraint("2");
    if (!w2.empty()) q.word2 = std::move(w2);
    if (auto v = p.integer("distance_from")) q.distance_from = static_cast<int>(*v);
    if (auto v = p.integer("distance_to")) q.distance_to = static_cast<int>(*v);
    q.verified_only = p.flag("verified_only");
    const LexGramResult res = lexgram_search(snap->context(), q);
    json hits = json::array();
    for (const LexGramHit& h : res.hits) {
      json positions = json::array({h.position1});
      if (h.position2) positions.push_back(*h.position2);
      json j = {{"text", h.text}, {"sentence", h.sentence}, {"positions", std::move(positions)}, {"sentence_text", h.sentence_text}};
      if (h.translation) j["translation"] = *h.translation;
      hits.push_back(std::move(j));
    }
    return ok({{"text_count", res.text_count}, {"entry_count", res.entry_count}, {"hits", std::move(hits)}});
  }

  // /v1/dict/frequency, /v1/dict/reverse
  if (resource == "dict" && seg.size() == 3) {
    allow({"GET"});
    const auto snap = snapshot();
    const Registry& r = snap->state.registry;
    if (seg[2] == "frequency") {
      const std::string unit_name = p.str("unit").value_or("wordform");
      if (unit_name != "wordform" && unit_name != "lemma") {
        throw Error(ErrorCode::InvalidQuery, "unit must be wordform or lemma", {{"unit", unit_name}});
      }
      const FrequencyUnit unit = unit_name == "lemma" ? FrequencyUnit::Lemma : FrequencyUnit::Wordform;
      const FrequencyTable t = frequency(snap->context(), scope_from(r, p), unit);
      const std::size_t limit = p.count("limit", t.rows.size() + 1);
      json rows = json::array();
      for (std::size_t i = 0; i < t.rows.size() && i < limit; ++i) {
        json j = {{"item", t.rows[i].item}, {"count", t.rows[i].count}};
        if (t.rows[i].lemma) j["lemma"] = *t.rows[i].lemma;
        rows.push_back(std::move(j));
      }
      json out = {{"unit", unit_name}, {"word_tokens", t.word_tokens}, {"rows", std::move(rows)}};
      if (unit == FrequencyUnit::Lemma) {
        out["ambiguous"] = t.ambiguous;
        out["unrecognized"] = t.unrecognized;
      }
      return ok(std::move(out));
    }
    if (seg[2] == "reverse") {
      std::optional<LanguageId> language;
      if (auto v = p.str("language")) language = resolve_language(r, *v);
      json items = json::array();
      for (LemmaId id : reverse_dictionary(snap->state.dictionary, language)) {
        const Lemma& l = snap->state.dictionary.require(id);
        items.push_back({{"id", id}, {"surface", l.surface}, {"pos", l.pos}});
      }
      return ok({{"items", std::move(items)}});
    }
    return not_found();
  }

  // /v1/stats/{dimension}
  if (resource == "stats" && seg.size() == 3) {
    allow({"GET"});
    const StatsDimension dim = [&] {
      try {
        return stats_dimension_from_string(seg[2]);
      } catch (const Error&) {
        throw Error(ErrorCode::NotFound, "no such statistics table: " + seg[2], {{"dimension", seg[2]}});
      }
    }();
    const auto snap = snapshot();
    const StatsTable t = stats(snap->state.registry, snap->state.corpus, dim, scope_from(snap->state.registry, p));
    json rows = json::array();
    for (const StatsRow& row : t.rows) {
      json j = {{"language", row.language}, {"bucket", row.bucket}, {"count", row.count}};
      if (!row.series.empty()) j["series"] = row.series;
      rows.push_back(std::move(j));
    }
    return ok({{"dimension", to_string(dim)}, {"total", t.total}, {"rows", std::move(rows)}});
  }

  // /v1/queue
  if (resource == "queue" && seg.size() == 2) {
    allow({"GET"});
    return read([&](const CorpusState& s) {
      std::optional<Homonymy> filter;
      if (auto v = p.str("class")) {
        try {
          filter = homonymy_from_string(*v);
        } catch (const Error&) {
          throw Error(ErrorCode::InvalidQuery, "unknown homonymy class: " + *v, {{"class", *v}});
        }
      }
      const std::vector<TokenRef> refs = pending_queue(s.corpus, s.markup, scope_from(s.registry, p), filter);
      const std::size_t limit = p.count("limit", refs.size() + 1);
      json items = json::array();
      for (std::size_t i = 0; i < refs.size() && i < limit; ++i) {
        const TokenMarkup* m = s.markup.find(refs[i]);
        const TokenMarkup untagged{refs[i], MarkupState::Untagged, {}, std::nullopt, std::nullopt, std::nullopt};
        items.push_back(markup_view(s, m ? *m : untagged));
      }
      return json{{"total", refs.size()}, {"items", std::move(items)}};
    });
  }

  // /v1/markup/{text}/{sentence}/{position}/{resolve|manual}
  if (resource == "markup" && seg.size() == 6) {
    allow({"POST"});
    const TokenRef ref{TextId{parse_id(seg[2], "text id")}, parse_id(seg[3], "sentence index"),
                       parse_id(seg[4], "token position")};
    const std::string editor = rq.body.is_object() ? rq.body.value("editor", options_.default_editor) : options_.default_editor;
    if (seg[5] == "resolve") {
      const auto choice = body_get<long long>(rq.body, "choice");
      return mutate([&](CorpusState& s) {
        if (choice < 0) {
          throw Error(ErrorCode::InvalidChoice, "choice must not be negative", {{"token", ref.str()}, {"choice", choice}});
        }
        const TokenMarkup& m = resolve(s.markup, ref, static_cast<std::size_t>(choice), editor, now_seconds(), &s.audit);
        return markup_view(s, m);
      });
    }
    if (seg[5] == "manual") {
      return mutate([&](CorpusState& s) {
        const LemmaId lemma{body_get<std::uint32_t>(rq.body, "lemma")};
        const int meaning = rq.body.value("meaning", 1);
        const Gramset gramset = rq.body.contains("gramset") ? codec::gramset_from_json(s.registry, rq.body.at("gramset")) : Gramset{};
        const CandidateSource source = candidate_source_from_string(rq.body.value("source", "manual"));
        const TokenMarkup& m =
            attach_manual(s.markup, s.dictionary, ref, lemma, meaning, gramset, editor, now_seconds(), &s.audit, source);
        return markup_view(s, m);
      });
    }
    return not_found();
  }

  // /v1/export/unimorph, /v1/import/unimorph
  if (resource == "export" && seg.size() == 3 && seg[2] == "unimorph") {
    allow({"GET"});
    std::shared_lock lock(state_mutex_);
    const auto lang = Params(rq.query).str("lang");
    if (!lang) throw Error(ErrorCode::InvalidRequest, "parameter lang is required", {{"parameter", "lang"}});
    const LanguageId language = resolve_language(state_.registry, *lang);
    ApiResponse r;
    r.text = format_unimorph(export_unimorph(state_.dictionary, state_.registry, language, feature_map_of(state_)));
    r.content_type = "text/tab-separated-values; charset=utf-8";
    return r;
  }
  if (resource == "import" && seg.size() == 3 && seg[2] == "unimorph") {
    allow({"POST"});
    return mutate([&](CorpusState& s) {
      const LanguageId language = resolve_language(s.registry, body_get<std::string>(rq.body, "lang"));
      std::optional<DialectId> variety;
      if (rq.body.contains("variety")) variety = resolve_dialect(s.registry, language, body_get<std::string>(rq.body, "variety"));
      const ImportReport rep =
          import_unimorph(s.dictionary, s.registry, body_get<std::string>(rq.body, "content"), language, feature_map_of(s), variety);
      return json{{"rows", rep.rows},
                  {"lemmas_created", rep.lemmas_created},
                  {"wordforms_added", rep.wordforms_added},
                  {"wordforms_skipped", rep.wordforms_skipped}};
    });
  }

  // /v1/reindex, /v1/tag
  if (resource == "reindex" && seg.size() == 2) {
    allow({"POST"});
    reindex();
    const auto snap = snapshot();
    return ok({{"texts", snap->state.corpus.size()},
               {"sentences", snap->index.sentences().size()},
               {"postings", snap->index.postings().size()}});
  }
  if (resource == "tag" && seg.size() == 2) {
    allow({"POST"});
    return mutate([&](CorpusState& s) {
      std::vector<TextId> ids;
      if (rq.body.is_object() && rq.body.contains("texts")) {
        for (std::uint32_t v : body_get<std::vector<std::uint32_t>>(rq.body, "texts")) ids.push_back(TextId{v});
      } else {
        for (const auto& [id, doc] : s.corpus.texts()) ids.push_back(id);
      }
      TagSummary total;
      for (TextId id : ids) {
        const TextDoc* doc = s.corpus.find(id);
        if (!doc) throw Error(ErrorCode::UnknownText, "no text with id " + std::to_string(id.value), {{"text", id}});
      }
      for (TextId id : ids) {
        TagResult r = tag_text(*s.corpus.find(id), s.dictionary, s.markup.text(id));
        total.untagged += r.summary.untagged;
        total.automatic += r.summary.automatic;
        total.verified += r.summary.verified;
        s.markup.set_text(id, std::move(r.markup));
      }
      return json{{"texts", ids.size()}, {"summary", summary_json(total)}};
    });
  }

  // /v1/predict, /v1/coverage, /v1/registry
  if (resource == "predict" && seg.size() == 2) {
    allow({"GET"});
    return read([&](const CorpusState& s) {
      const auto surface = p.str("surface");
      if (!surface) throw Error(ErrorCode::InvalidRequest, "parameter surface is required", {{"parameter", "surface"}});
      const auto k = p.integer("k").value_or(5);
      if (k < 1) throw Error(ErrorCode::InvalidQuery, "k must be at least 1", {{"k", k}});
      json items = json::array();
      for (const PredictorSuggestion& sg : predict_unknown(*surface, s.dictionary, static_cast<std::size_t>(k))) {
        json j = {{"pos", sg.pos},
                  {"gramset", codec::gramset_to_json(s.registry, sg.gramset)},
                  {"description", s.registry.describe(sg.gramset)},
                  {"matched_suffix", sg.matched_suffix},
                  {"support", sg.support}};
        if (sg.hypothesized_lemma) j["hypothesized_lemma"] = *sg.hypothesized_lemma;
        items.push_back(std::move(j));
      }
      return json{{"surface", *surface}, {"suggestions", std::move(items)}};
    });
  }
  if (resource == "coverage" && seg.size() == 2) {
    allow({"GET"});
    return read([&](const CorpusState& s) { return coverage_json(markup_coverage(s.corpus, s.markup, scope_from(s.registry, p))); });
  }
  if (resource == "registry" && seg.size() == 2) {
    allow({"GET"});
    return read([&](const CorpusState& s) { return s.registry.to_json(); });
  }
  return not_found();
}

// ---------------------------------------------------------------- HTTP

namespace {

ApiRequest to_api_request(const httplib::Request& req) {
  ApiRequest rq;
  rq.method = req.method;
  rq.path = req.path;
  for (const auto& [k, v] : req.params) rq.query[k] = v;
  if (!req.body.empty()) rq.body = json::parse(req.body);
  return rq;
}

}  // namespace

void Service::serve(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port), {{"host", host}, {"port", port}});
  }
  serve_bound();
}

int Service::bind_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + host);
  return port;
}

void Service::serve_bound() {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse out;
    try {
      out = handle(to_api_request(req));
    } catch (const json::exception& e) {
      out.status = 400;
      out.body = api_error(Error(ErrorCode::InvalidRequest, std::string("request body is not valid JSON: ") + e.what()));
    }
    res.status = out.status;
    res.set_content(out.payload(), out.content_type);
  };
  auto& srv = impl_->server;
  srv.Get(".*", handler);
  srv.Post(".*", handler);
  srv.Put(".*", handler);
  srv.Delete(".*", handler);
  srv.Patch(".*", handler);
  srv.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace korpus

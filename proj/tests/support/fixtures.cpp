#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "korpus/error.hpp"

namespace korpus::testkit {

Date fixed_date() { return Date{std::chrono::year{2021}, std::chrono::month{10}, std::chrono::day{1}}; }

Timestamp fixed_time() { return std::chrono::sys_days{fixed_date()} + std::chrono::hours{12}; }

Lemma make_lemma(const Registry& registry, const std::string& surface, const std::string& language,
                 const std::string& pos, const std::vector<std::string>& english,
                 const std::optional<std::string>& concept_id) {
  Lemma l;
  l.surface = surface;
  l.language = registry.require_language(language).id;
  l.pos = pos;
  int ordinal = 1;
  for (const std::string& gloss : english) {
    Meaning m;
    m.ordinal = ordinal++;
    m.interpretations["English"] = gloss;
    if (m.ordinal == 1) m.concept_id = concept_id;
    l.meanings.push_back(std::move(m));
  }
  return l;
}

namespace {

const std::vector<std::string> kOnsets = {"k", "h", "p", "t", "s", "v", "m", "n", "l", "r",
                                          "j", "d", "g", "b", "č", "š", "ž", "z"};
const std::vector<std::string> kVowels = {"a", "o", "u", "i", "e", "ä", "ö", "ü"};
const std::vector<std::string> kCodas = {"š", "l", "r", "s", "k", "h", "n"};
const std::vector<std::string> kStemVowels = {"o", "u", "i", "e"};

std::set<DialectId> dialects_named(const Registry& registry, const std::string& language,
                                   std::initializer_list<const char*> names) {
  std::set<DialectId> out;
  const LanguageId lang = registry.require_language(language).id;
  for (const char* n : names) {
    const Dialect* d = registry.find_dialect(lang, n);
    if (!d) throw Error(ErrorCode::UnknownDialect, std::string("fixture dialect missing: ") + n);
    out.insert(d->id);
  }
  return out;
}

void generate_all(Dictionary& dictionary, const TemplateSet& templates, LemmaId id) {
  generate_paradigm(dictionary, id, templates);
}

}  // namespace

ShineVerbs add_shine_verbs(Dictionary& dictionary, const Registry& registry, const TemplateSet* templates) {
  const std::string shine = "to shine; to glisten; to glitter; to twinkle";
  const std::string light = "to give someone light";
  const auto veps_dialects =
      dialects_named(registry, "vep", {"Central Eastern Veps", "Central Western Veps", "Northern Veps", "Southern Veps"});

  Lemma h = make_lemma(registry, "hoštta", "vep", "Verb",
                       {shine, light, "to be transparent, to shine through", "to be seen, to be visible"}, "B373");
  h.meanings[0].interpretations["Russian"] = "блестеть, сверкать, сиять";
  h.dialects_of_usage = veps_dialects;
  Lemma ki = make_lemma(registry, "kištta", "vep", "Verb", {shine}, "B373");
  Lemma ku = make_lemma(registry, "kuštta", "vep", "Verb", {shine, light}, "B373");

  ShineVerbs out;
  out.hoshtta = dictionary.add_lemma(registry, std::move(h));
  out.kishtta = dictionary.add_lemma(registry, std::move(ki));
  out.kushtta = dictionary.add_lemma(registry, std::move(ku));
  if (templates) {
    for (LemmaId id : {out.hoshtta, out.kishtta, out.kushtta}) generate_all(dictionary, *templates, id);
  }
  return out;
}

VepsDictionary veps_dictionary(const Registry& registry, const TemplateSet& templates, std::size_t per_template,
                               std::uint32_t seed) {
  VepsDictionary out;
  Rng rng(seed);
  out.shine = add_shine_verbs(out.dictionary, registry, &templates);
  out.lemmas = {out.shine.hoshtta, out.shine.kishtta, out.shine.kushtta};

  std::set<std::string> used = {"hoštta", "kištta", "kuštta"};
  std::vector<const Dialect*> veps_dialects = registry.dialects_of(registry.require_language("vep").id);

  auto fresh = [&](auto make) {
    for (;;) {
      std::string s = make();
      if (used.insert(s).second) return s;
    }
  };
  auto add = [&](std::string surface, const std::string& pos, std::size_t n) {
    std::vector<std::string> glosses;
    // A few lemmas have no meanings, some have two.
    if (n % 11 != 5) glosses.push_back("to " + surface + " (sense one)");
    if (n % 7 == 3) glosses.push_back("to " + surface + " (sense two)");
    if (pos == "Noun") {
      for (std::string& g : glosses) g = "the " + g.substr(3);
    }
    Lemma l = make_lemma(registry, surface, "vep", pos, glosses);
    if (!l.meanings.empty() && n % 5 == 0) l.meanings[0].interpretations["Russian"] = "слово " + std::to_string(n);
    if (n % 3 == 0 && !veps_dialects.empty()) l.dialects_of_usage.insert(rng.pick(veps_dialects)->id);
    const LemmaId id = out.dictionary.add_lemma(registry, std::move(l));
    generate_all(out.dictionary, templates, id);
    out.lemmas.push_back(id);
  };

  for (std::size_t n = 0; n < per_template; ++n) {
    add(fresh([&] { return rng.pick(kOnsets) + rng.pick(kVowels) + rng.pick(kCodas) + "tta"; }), "Verb", n);
    add(fresh([&] { return rng.pick(kOnsets) + rng.pick(kVowels) + rng.pick(kOnsets) + rng.pick(kStemVowels) + "da"; }),
        "Verb", n);
    add(fresh([&] { return rng.pick(kOnsets) + rng.pick(kVowels) + rng.pick(kCodas) + rng.pick(kOnsets) + "a"; }), "Noun",
        n);
  }
  return out;
}

TextMeta make_meta(const Registry& registry, const std::string& title, const std::string& language,
                   const std::string& corpus_type) {
  TextMeta m;
  m.title = title;
  m.language = registry.require_language(language).id;
  const CorpusType* ct = registry.find_corpus_type(corpus_type);
  if (!ct) throw Error(ErrorCode::UnknownCorpusType, "fixture corpus type missing: " + corpus_type);
  m.corpus_type = ct->id;
  return m;
}

TextId add_text(CorpusState& state, const std::string& content, const TextMeta& meta,
                const std::vector<std::string>& translations) {
  std::uint32_t next = 1;
  if (!state.corpus.empty()) next = state.corpus.texts().rbegin()->first.value + 1;
  Ingestor ingestor(next);
  TextDoc doc = ingestor.ingest(state.registry, RawDocument{content, "UTF-8"}, meta, {}, fixed_date());
  if (!translations.empty()) align_translation(doc, translations, AlignMode::Partial);
  TagResult tagged = tag_text(doc, state.dictionary);
  const TextId id = doc.id;
  state.markup.set_text(id, std::move(tagged.markup));
  state.corpus.add(std::move(doc));
  return id;
}

// ---------------------------------------------------------------- advanced search screen

MetadataFixture metadata_fixture() {
  MetadataFixture f{CorpusState::with_defaults(), {}};
  const Registry& r = f.state.registry;
  const LanguageId olo = r.require_language("olo").id;
  const CorpusType* dialectal = r.find_corpus_type("Dialectal texts");
  const Dialect* kotkozero = r.find_dialect(olo, "Kotkozero");
  const Genre* narrative = r.find_genre(dialectal->id, "Narrative");

  auto livvi = [&](const std::string& title, const std::string& translation, std::optional<int> recorded,
                   const std::string& informant) {
    TextMeta m = make_meta(r, title, "olo", "Dialectal texts");
    m.title_translation = translation;
    m.dialect = kotkozero->id;
    m.genre = narrative->id;
    m.year_recorded = recorded;
    m.informant = informant;
    m.recorder = "Recorder A";
    return m;
  };

  f.expected.push_back(add_text(f.state, "Tuahes luajitah kontiet. Kontiet ollah hyvät.",
                                livvi("\"Tuahes luajitah...\"", "«Из бересты плетут...»", 1949, "Informant One")));
  f.expected.push_back(add_text(f.state, "Minä olen rodinuh Kotkozeren rannal. Elin sie kaksikymmen vuottu.",
                                livvi("Minä olen rodinuh Čil'miel'e", "Я родилась в Чилмозере", 1957, "Informant Two")));
  {
    TextMeta m = livvi("Mittumii pruzniekkoi pruzaznuičijmmo", "Какие праздники мы праздновали", std::nullopt,
                       "Informant Three");
    m.year_published = 1961;
    f.expected.push_back(add_text(f.state, "Pruazniekat oldih suuret. Kai kyläs kerävyttih.", m));
  }

  // Near misses: each breaks exactly one filter.
  {
    TextMeta m = livvi("Myöhäine kerdomus", "Поздний рассказ", 1965, "Informant Four");
    m.year_published = 1970;
    add_text(f.state, "Tämä on myöhäine kerdomus.", m);
  }
  {
    TextMeta m = livvi("Pagin kylän ruavos", "Разговор о работе", 1955, "Informant Five");
    m.genre = r.find_genre(dialectal->id, "Dialogue")->id;
    add_text(f.state, "Mittuine ruado oli? Hyvä ruado.", m);
  }
  {
    TextMeta m = livvi("Toizen kylän kerdomus", "Рассказ из другой деревни", 1955, "Informant Six");
    m.dialect = r.find_dialect(olo, "Livvi dialect 02")->id;
    add_text(f.state, "Toizes kyläs eletäh toizin.", m);
  }
  {
    TextMeta m = livvi("Suarnu", "Сказка", 1955, "Informant Seven");
    const CorpusType* folklore = r.find_corpus_type("Folklore texts");
    m.corpus_type = folklore->id;
    m.genre = r.find_genre(folklore->id, "Fairy tales")->id;
    add_text(f.state, "Eli ennen ukko da akku.", m);
  }
  {
    TextMeta m = make_meta(r, "Vepsän kerdomuz", "vep", "Dialectal texts");
    m.dialect = r.find_dialect(r.require_language("vep").id, "Northern Veps")->id;
    m.genre = narrative->id;
    m.year_recorded = 1955;
    add_text(f.state, "Minä elin küläs.", m);
  }
  {
    TextMeta m = livvi("Vuozitoi kerdomus", "Рассказ без года", std::nullopt, "Informant Eight");
    add_text(f.state, "Vuottu ei tiijetä.", m);
  }
  return f;
}

TextQuery metadata_query(const Registry& r) {
  TextQuery q;
  q.language = r.require_language("olo").id;
  q.corpus_type = r.find_corpus_type("Dialectal texts")->id;
  q.dialect = r.find_dialect(*q.language, "Kotkozero")->id;
  q.genre = r.find_genre(*q.corpus_type, "Narrative")->id;
  q.year_from = 1949;
  q.year_to = 1961;
  q.page_size = 10;
  return q;
}

// ---------------------------------------------------------------- lexico-grammatical search screen

ParticipleFixture participle_fixture() {
  ParticipleFixture f{CorpusState::with_defaults(), {}, {}, {}};
  CorpusState& s = f.state;
  const Registry& r = s.registry;

  Lemma olla = make_lemma(r, "olla", "olo", "Verb", {"to be"});
  olla.wordforms.push_back({r.make_gramset({"Conditional", "Positive", "3rd", "Pl"}), "olluzin", std::nullopt,
                            WordformOrigin::Manual});
  olla.wordforms.push_back({r.make_gramset({"Indicative", "Presence", "Positive", "3rd", "Sg"}), "on", std::nullopt,
                            WordformOrigin::Manual});
  Lemma parandua = make_lemma(r, "parandua", "olo", "Verb", {"to improve", "to heal"});
  parandua.wordforms.push_back(
      {r.make_gramset({"Active", "2nd participle"}), "parandannuh", std::nullopt, WordformOrigin::Manual});
  parandua.wordforms.push_back(
      {r.make_gramset({"Passive", "2nd participle"}), "parandettu", std::nullopt, WordformOrigin::Manual});
  f.olla = s.dictionary.add_lemma(r, std::move(olla));
  f.parandua = s.dictionary.add_lemma(r, std::move(parandua));

  TextMeta m = make_meta(r, "Kyläs", "olo", "Journalistic texts");
  m.year_published = 2018;
  // Sentence 0: adjacent pair. Sentence 1: same pair two words apart.
  // Sentence 2: passive participle after olla. Sentence 3: the other mood.
  f.text = add_text(s,
                    "Meijän kylä olluzin parandannuh jo kezäl. "
                    "Kai olluzin hyvin parandannuh. "
                    "Ruado olluzin parandettu. "
                    "Kylä on parandannuh.",
                    m, {"Наша деревня улучшилась бы уже летом.", "Всё бы хорошо улучшилось.", "Работа была бы исправлена.",
                        "Деревня улучшилась."});

  TextMeta vm = make_meta(r, "Vepsän tekst", "vep", "Journalistic texts");
  add_text(s, "Olluzin parandannuh vepsän kelel.", vm);
  return f;
}

LexGramQuery participle_query(const Registry& r, const ParticipleFixture&) {
  LexGramQuery q;
  q.language = r.require_language("olo").id;
  q.word1.word = "olla";
  q.word1.pos = "Verb";
  q.word1.grammemes = {r.find_grammeme("Conditional")->id};
  WordConstraint w2;
  w2.pos = "Verb";
  w2.grammemes = {r.find_grammeme("Active")->id, r.find_grammeme("2nd participle")->id};
  q.word2 = w2;
  q.distance_from = 1;
  q.distance_to = 1;
  return q;
}

// ---------------------------------------------------------------- coverage

CoverageFixture coverage_fixture() {
  CoverageFixture f{CorpusState::with_defaults(), {}, "vouhk"};
  CorpusState& s = f.state;
  const Registry& r = s.registry;
  const std::vector<std::string> known = {"kala", "mec", "kodi", "jogi", "lumi", "päiv", "kuld", "hobed", "sana", "tuli"};
  for (const std::string& w : known) s.dictionary.add_lemma(r, make_lemma(r, w, "vep", "Noun", {"the " + w}));

  std::vector<std::string> words;
  for (int i = 0; i < 73; ++i) words.push_back(known[static_cast<std::size_t>(i) % known.size()]);
  for (int i = 0; i < 26; ++i) words.push_back("zzz");
  words.push_back(f.missing_surface);
  Rng rng(73);
  for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[rng.below(i)]);

  std::string content;
  for (std::size_t i = 0; i < words.size(); ++i) {
    content += words[i];
    content += (i % 10 == 9) ? ". " : " ";
  }
  f.text = add_text(s, content, make_meta(r, "Sadan sanan tekst", "vep", "Literary texts"));
  return f;
}

// ---------------------------------------------------------------- randomized corpus

namespace {

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

const std::vector<std::string> kPeople = {"Anna Petrova", "Nikolai Zaitsev", "Maria Kuznetsova", "Irina Novak",
                                          "Fedor Lukin",  "Olga Sinitsyna",  "Pekka Hämäläinen"};
const std::vector<std::string> kRussianTitles = {"Рассказ о деревне", "Как мы жили", "Сказка о лисе",
                                                 "Праздники",         "Рыбалка",     "Весенние работы"};
const std::vector<std::string> kUnknownWords = {"zzz",  "kvirk", "mörkö", "tšuhk", "loihk", "viiž",
                                                "rauk", "ptüi",  "hei",   "no",    "ka"};
const std::vector<std::string> kEnds = {".", ".", ".", "!", "?", "..."};

}  // namespace

RandomCorpus random_corpus(std::uint32_t seed, std::size_t texts) {
  RandomCorpus out{CorpusState::with_defaults(), 0};
  CorpusState& s = out.state;
  const Registry& r = s.registry;
  Rng rng(seed);

  const TemplateSet templates = load_default_ruleset(r);
  VepsDictionary vd = veps_dictionary(r, templates, 70, seed * 31 + 1);
  s.dictionary = std::move(vd.dictionary);

  // Lemmas of other languages with hand-entered forms.
  std::vector<std::string> other_forms;
  for (int n = 0; n < 24; ++n) {
    const std::string lang = n % 2 ? "olo" : "krl";
    const std::string pos = n % 3 ? "Noun" : "Adjective";
    const std::string surface = rng.pick(kOnsets) + rng.pick(kVowels) + rng.pick(kOnsets) + rng.pick(kVowels) + "i";
    Lemma l = make_lemma(r, surface, lang, pos, {"a " + surface + " thing"});
    l.wordforms.push_back({r.make_gramset({"Sg", "Nominative"}), surface, std::nullopt, WordformOrigin::Manual});
    l.wordforms.push_back({r.make_gramset({"Sg", "Genitive"}), surface + "n", std::nullopt, WordformOrigin::Manual});
    l.wordforms.push_back({r.make_gramset({"Sg", "Inessive"}), surface + "s", std::nullopt, WordformOrigin::Manual});
    const std::vector<const Dialect*> ds = r.dialects_of(l.language);
    if (n % 4 == 0 && !ds.empty()) l.dialects_of_usage.insert(rng.pick(ds)->id);
    for (const Wordform& wf : l.wordforms) other_forms.push_back(wf.surface);
    s.dictionary.add_lemma(r, std::move(l));
  }

  // Vocabulary: forms of a subset of lemmas, so words repeat across texts.
  std::vector<std::string> vocabulary;
  {
    std::vector<LemmaId> pool = vd.lemmas;
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
    pool.resize(std::min<std::size_t>(pool.size(), 45));
    pool.push_back(vd.shine.hoshtta);
    pool.push_back(vd.shine.kushtta);
    for (LemmaId id : pool) {
      const Lemma& l = s.dictionary.require(id);
      for (const Wordform& wf : l.wordforms) vocabulary.push_back(wf.surface);
    }
  }
  vocabulary.insert(vocabulary.end(), other_forms.begin(), other_forms.end());

  std::vector<std::string> languages = {"vep", "vep", "krl", "olo", "lud"};
  std::vector<const CorpusType*> corpus_types;
  for (const auto& [id, ct] : r.corpus_types()) corpus_types.push_back(&ct);

  auto word = [&] { return rng.chance(12) ? rng.pick(kUnknownWords) : rng.pick(vocabulary); };

  for (std::size_t t = 0; t < texts; ++t) {
    const std::string lang = rng.pick(languages);
    const CorpusType* ct = rng.pick(corpus_types);
    std::string title = capitalize(word()) + " " + word() + " " + std::to_string(t + 1);
    TextMeta m = make_meta(r, title, lang, ct->name);
    if (rng.chance(50)) m.title_translation = rng.pick(kRussianTitles);
    std::vector<const Genre*> genres;
    for (const auto& [gid, g] : r.genres()) {
      if (g.corpus_type == ct->id) genres.push_back(&g);
    }
    if (!genres.empty() && rng.chance(70)) m.genre = rng.pick(genres)->id;
    const std::vector<const Dialect*> dialects = r.dialects_of(m.language);
    if (!dialects.empty() && rng.chance(60)) m.dialect = rng.pick(dialects)->id;
    if (rng.chance(50)) m.informant = rng.pick(kPeople);
    if (rng.chance(40)) m.recorder = rng.pick(kPeople);
    if (rng.chance(30)) m.author = rng.pick(kPeople);
    if (rng.chance(60)) m.year_recorded = rng.between(1930, 2020);
    if (rng.chance(50)) m.year_published = rng.between(1950, 2021);

    std::string content;
    std::vector<std::string> translations;
    const int sentences = rng.between(4, 8);
    for (int k = 0; k < sentences; ++k) {
      const int words = rng.between(4, 10);
      for (int w = 0; w < words; ++w) {
        std::string token = word();
        if (w == 0 && rng.chance(70)) token = capitalize(token);
        if (w > 0) content += (rng.chance(10) ? ", " : " ");
        content += token;
      }
      content += rng.pick(kEnds);
      content += rng.chance(15) ? "\n" : " ";
      translations.push_back("Перевод предложения " + std::to_string(k + 1) + ".");
    }
    if (!rng.chance(40)) translations.clear();
    add_text(s, content, m, translations);
  }

  // Editorial work: verify some auto tokens, attach manual readings to some unknown ones.
  std::vector<LemmaId> all_lemmas;
  for (const auto& [id, l] : s.dictionary.lemmas()) all_lemmas.push_back(id);
  std::vector<TokenRef> refs;
  for (const auto& [tid, tm] : s.markup.texts()) {
    for (const auto& [ref, m] : tm) refs.push_back(ref);
  }
  for (const TokenRef& ref : refs) {
    const TokenMarkup& m = *s.markup.find(ref);
    if (m.state == MarkupState::Auto) {
      const int p = m.candidates.size() > 1 ? 40 : 20;
      if (rng.chance(p)) resolve(s.markup, ref, rng.below(m.candidates.size()), "editor", fixed_time(), &s.audit);
    } else if (m.state == MarkupState::Untagged && rng.chance(25)) {
      const Lemma& l = s.dictionary.require(rng.pick(all_lemmas));
      const int meaning = l.meanings.empty() ? 0 : rng.between(1, static_cast<int>(l.meanings.size()));
      const Gramset g = l.wordforms.empty() ? Gramset{} : rng.pick(l.wordforms).gramset;
      attach_manual(s.markup, s.dictionary, ref, l.id, meaning, g, "editor", fixed_time(), &s.audit);
    }
  }

  for (const auto& [id, doc] : s.corpus.texts()) out.word_tokens += doc.word_count();
  return out;
}

CorpusIndex build_index(const CorpusState& state) {
  return CorpusIndex::build(state.corpus, state.markup, state.dictionary);
}

// ---------------------------------------------------------------- files

TempDir::TempDir(const std::string& prefix) {
  static std::uint32_t counter = 0;
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace korpus::testkit

// Command-line front end. Each subcommand is translated into the equivalent /v1
// API request and answered by the same Service, so --json output is the API
// payload.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "korpus/bundle.hpp"
#include "korpus/service.hpp"

namespace {

using korpus::ApiRequest;
using korpus::ApiResponse;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw korpus::Error(korpus::ErrorCode::IoError, "cannot read " + path, {{"path", path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw korpus::Error(korpus::ErrorCode::ParseError, path + ": " + e.what(), {{"path", path}});
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

/// Query parameters collected from options; empty values are left out.
struct Query {
  std::map<std::string, std::string> values;
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, values[key], help);
  }
  std::map<std::string, std::string> get() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : values) {
      if (!v.empty()) out[k] = v;
    }
    return out;
  }
};

void add_scope(CLI::App* app, Query& q) {
  q.add(app, "--language", "language", "Language code or name");
  q.add(app, "--corpus-type", "corpus_type", "Corpus type name");
  q.add(app, "--dialect", "dialect", "Dialect name");
  q.add(app, "--genre", "genre", "Genre name");
  q.add(app, "--texts", "texts", "Comma-separated text ids");
}

// ---------------------------------------------------------------- plain-text output

std::string str_of(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void print_plain(const std::string& command, const json& b) {
  std::ostream& out = std::cout;
  if (command == "search texts") {
    out << b["total"] << " records found\n";
    for (const json& it : b["items"]) {
      out << it["id"] << "\t" << str_of(it["title"]);
      if (it.contains("title_translation")) out << " / " << str_of(it["title_translation"]);
      out << "\n";
      if (it.contains("snippet")) out << "\t" << str_of(it["snippet"]) << "\n";
    }
  } else if (command == "search lemmas") {
    out << b["total"] << " records found\n";
    for (const json& it : b["items"]) {
      out << it["id"] << "\t" << str_of(it["surface"]) << "\t" << str_of(it["pos"]) << "\twordforms " << it["wordform_count"]
          << "\texamples " << it["examples"]["total"] << "\n";
    }
  } else if (command == "search lexgram") {
    out << b["text_count"] << " texts, " << b["entry_count"] << " entries\n";
    for (const json& h : b["hits"]) {
      out << h["text"] << ":" << h["sentence"] << "\t" << h["positions"].dump() << "\t" << str_of(h["sentence_text"]) << "\n";
      if (h.contains("translation")) out << "\t" << str_of(h["translation"]) << "\n";
    }
  } else if (command == "freq") {
    for (const json& r : b["rows"]) out << r["count"] << "\t" << str_of(r["item"]) << "\n";
    out << "word tokens: " << b["word_tokens"] << "\n";
    if (b.contains("ambiguous")) out << "ambiguous: " << b["ambiguous"] << "\tunrecognized: " << b["unrecognized"] << "\n";
  } else if (command == "reverse") {
    for (const json& r : b["items"]) out << str_of(r["surface"]) << "\t" << str_of(r["pos"]) << "\n";
  } else if (command == "stats") {
    for (const json& r : b["rows"]) {
      if (r.contains("series")) out << str_of(r["series"]) << "\t";
      out << str_of(r["language"]) << "\t" << str_of(r["bucket"]) << "\t" << r["count"] << "\n";
    }
    out << "total\t" << b["total"] << "\n";
  } else if (command == "predict") {
    for (const json& s : b["suggestions"]) {
      out << str_of(s["pos"]) << "\t" << str_of(s["description"]) << "\t-" << str_of(s["matched_suffix"]) << "\t" << s["support"];
      if (s.contains("hypothesized_lemma")) out << "\t" << str_of(s["hypothesized_lemma"]);
      out << "\n";
    }
  } else if (command == "generate") {
    for (const json& w : b["wordforms"]) out << str_of(w["description"]) << "\t" << str_of(w["surface"]) << "\n";
  } else if (command == "queue") {
    out << b["total"] << " pending\n";
    for (const json& it : b["items"]) {
      out << str_of(it["ref"]) << "\t" << str_of(it.value("surface", json(""))) << "\t" << str_of(it["homonymy"]) << "\t"
          << it["candidates"].size() << " candidates\n";
    }
  } else if (command == "coverage") {
    out << str_of(b["display"]) << " (" << b["covered"] << "/" << b["total"] << ")\n";
  } else {
    out << b.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus manager for Veps and Karelian texts and dictionaries"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string bundle = "corpus";
  if (const char* env = std::getenv("KORPUS_BUNDLE")) bundle = env;
  bool as_json = false;
  app.add_option("--bundle", bundle, "Bundle directory")->capture_default_str();
  app.add_flag("--json", as_json, "Print the API payload as JSON");

  ApiRequest rq;
  std::string command;

  // init
  auto* init = app.add_subcommand("init", "Create an empty bundle with the default registry");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest a plain-text document");
  std::string ingest_file, meta_file, encoding = "UTF-8", translations_file, align = "strict", accession;
  ingest->add_option("file", ingest_file, "Text file")->required();
  ingest->add_option("--meta", meta_file, "Metadata template (JSON)")->required();
  ingest->add_option("--encoding", encoding, "Source encoding")->capture_default_str();
  ingest->add_option("--translations", translations_file, "Sentence translations, one per line");
  ingest->add_option("--align", align, "Alignment mode")->check(CLI::IsMember({"strict", "partial"}));
  ingest->add_option("--accession-date", accession, "YYYY-MM-DD (default today)");

  // tag
  auto* tag = app.add_subcommand("tag", "Run automatic markup (verified tokens are kept)");
  std::vector<std::uint32_t> tag_texts;
  tag->add_option("--text", tag_texts, "Text ids (default all)");

  // resolve / attach
  auto* resolve = app.add_subcommand("resolve", "Choose a candidate for a token");
  std::string token_ref, editor = "editor";
  long long choice = 0;
  resolve->add_option("token", token_ref, "text:sentence:position")->required();
  resolve->add_option("choice", choice, "Candidate index")->required();
  resolve->add_option("--editor", editor, "Editor name")->capture_default_str();

  auto* attach = app.add_subcommand("attach", "Attach a manual candidate to a token");
  std::uint32_t attach_lemma = 0;
  int attach_meaning = 1;
  std::string attach_gramset, attach_source = "manual";
  attach->add_option("token", token_ref, "text:sentence:position")->required();
  attach->add_option("--lemma", attach_lemma, "Lemma id")->required();
  attach->add_option("--meaning", attach_meaning, "Meaning ordinal")->capture_default_str();
  attach->add_option("--gramset", attach_gramset, "Comma-separated grammemes");
  attach->add_option("--source", attach_source, "Candidate source")->check(CLI::IsMember({"manual", "predictor"}));
  attach->add_option("--editor", editor, "Editor name")->capture_default_str();

  // predict
  auto* predict = app.add_subcommand("predict", "Suggest analyses for an unknown word");
  std::string predict_surface;
  int predict_k = 5;
  predict->add_option("surface", predict_surface, "Word form")->required();
  predict->add_option("-k", predict_k, "Number of suggestions")->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "Generate and store a lemma's paradigm");
  std::uint32_t generate_lemma = 0;
  generate->add_option("lemma", generate_lemma, "Lemma id")->required();

  // lemma-add
  auto* lemma_add = app.add_subcommand("lemma-add", "Add a dictionary entry");
  std::string lemma_file, lemma_surface, lemma_lang, lemma_pos, lemma_concept;
  std::vector<std::string> lemma_glosses;
  bool lemma_generate = false;
  lemma_add->add_option("--from", lemma_file, "Lemma record (JSON)");
  lemma_add->add_option("--surface", lemma_surface, "Dictionary form");
  lemma_add->add_option("--lang", lemma_lang, "Language code");
  lemma_add->add_option("--pos", lemma_pos, "Part of speech");
  lemma_add->add_option("--gloss", lemma_glosses, "LANGUAGE=text, one meaning per flag");
  lemma_add->add_option("--concept", lemma_concept, "Concept category of every meaning");
  lemma_add->add_flag("--generate", lemma_generate, "Generate the paradigm too");

  // search
  auto* search = app.add_subcommand("search", "Query texts, word pairs or lemmas");
  search->require_subcommand(1);
  Query texts_q, lexgram_q, lemmas_q;
  auto* s_texts = search->add_subcommand("texts", "Metadata and content search");
  texts_q.add(s_texts, "--language", "language", "Language code or name");
  texts_q.add(s_texts, "--dialect", "dialect", "Dialect name");
  texts_q.add(s_texts, "--corpus-type", "corpus_type", "Corpus type name");
  texts_q.add(s_texts, "--genre", "genre", "Genre name");
  texts_q.add(s_texts, "--informant", "informant", "Informant substring");
  texts_q.add(s_texts, "--recorder", "recorder", "Recorder substring");
  texts_q.add(s_texts, "--author", "author", "Author substring");
  texts_q.add(s_texts, "--title", "title", "Title substring");
  texts_q.add(s_texts, "--word", "word", "Word form in the text");
  texts_q.add(s_texts, "--fragment", "fragment", "Text fragment");
  texts_q.add(s_texts, "--year-from", "year_from", "First year");
  texts_q.add(s_texts, "--year-to", "year_to", "Last year");
  texts_q.add(s_texts, "--page", "page", "Page number");
  texts_q.add(s_texts, "--page-size", "page_size", "Records per page");

  auto* s_lexgram = search->add_subcommand("lexgram", "Two-word distance search");
  lexgram_q.add(s_lexgram, "--language", "language", "Language code or name");
  lexgram_q.add(s_lexgram, "--corpus-type", "corpus_type", "Corpus type name");
  for (const char* n : {"1", "2"}) {
    lexgram_q.add(s_lexgram, std::string("--word") + n, std::string("word") + n, "Word form or lemma");
    lexgram_q.add(s_lexgram, std::string("--pos") + n, std::string("pos") + n, "Part of speech");
    lexgram_q.add(s_lexgram, std::string("--gramset") + n, std::string("gramset") + n, "Comma-separated grammemes");
  }
  lexgram_q.add(s_lexgram, "--from", "distance_from", "Minimum distance");
  lexgram_q.add(s_lexgram, "--to", "distance_to", "Maximum distance");
  bool verified_only = false;
  s_lexgram->add_flag("--verified-only", verified_only, "Use verified markup only");

  auto* s_lemmas = search->add_subcommand("lemmas", "Dictionary search");
  lemmas_q.add(s_lemmas, "--surface", "surface", "Lemma substring");
  lemmas_q.add(s_lemmas, "--pos", "pos", "Part of speech");
  lemmas_q.add(s_lemmas, "--gramset", "gramset", "Grammemes some wordform must have");
  lemmas_q.add(s_lemmas, "--language", "language", "Language code or name");
  lemmas_q.add(s_lemmas, "--dialect", "dialect", "Dialect name");
  lemmas_q.add(s_lemmas, "--interpretation", "interpretation", "Gloss substring");
  lemmas_q.add(s_lemmas, "--concept", "concept", "Concept category");
  lemmas_q.add(s_lemmas, "--wordform", "wordform", "Find lemmas by one of their forms");
  lemmas_q.add(s_lemmas, "--page", "page", "Page number");
  lemmas_q.add(s_lemmas, "--page-size", "page_size", "Records per page");
  bool lemma_prefix = false, with_examples = false;
  s_lemmas->add_flag("--prefix", lemma_prefix, "Match the surface as a prefix");
  s_lemmas->add_flag("--with-examples", with_examples, "Only lemmas attested in texts");

  // freq / reverse / stats / queue / coverage
  auto* freq = app.add_subcommand("freq", "Frequency dictionary");
  Query freq_q;
  add_scope(freq, freq_q);
  freq_q.add(freq, "--unit", "unit", "wordform or lemma");
  freq_q.add(freq, "--limit", "limit", "Rows to print");

  auto* reverse = app.add_subcommand("reverse", "Reverse dictionary");
  Query reverse_q;
  reverse_q.add(reverse, "--language", "language", "Language code or name");

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  std::string stats_dim;
  Query stats_q;
  stats->add_option("dimension", stats_dim, "by_corpus, by_genre or by_year")
      ->required()
      ->check(CLI::IsMember({"by_corpus", "by_genre", "by_year"}));
  add_scope(stats, stats_q);

  auto* queue = app.add_subcommand("queue", "Tokens waiting for an editor");
  Query queue_q;
  add_scope(queue, queue_q);
  queue_q.add(queue, "--class", "class", "Homonymy class filter");
  queue_q.add(queue, "--limit", "limit", "Items to print");

  auto* coverage = app.add_subcommand("coverage", "Share of automatically tagged word tokens");
  Query coverage_q;
  add_scope(coverage, coverage_q);

  // UniMorph
  auto* exp = app.add_subcommand("export-unimorph", "Write the UniMorph table of a language");
  std::string um_lang, um_out, um_file, um_variety;
  exp->add_option("--lang", um_lang, "Language code")->required();
  exp->add_option("-o,--output", um_out, "Output file (default stdout)");
  auto* imp = app.add_subcommand("import-unimorph", "Read a UniMorph table into the dictionary");
  imp->add_option("file", um_file, "TSV file")->required();
  imp->add_option("--lang", um_lang, "Language code")->required();
  imp->add_option("--variety", um_variety, "Variety of the imported forms");

  // reindex / serve
  auto* reindex = app.add_subcommand("reindex", "Rebuild the search indexes");
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    korpus::CorpusState state =
        korpus::bundle_exists(bundle) ? korpus::load_bundle(bundle) : korpus::CorpusState::with_defaults();
    if (*init) {
      if (korpus::bundle_exists(bundle)) {
        std::cerr << "korpus: bundle already exists at " << bundle << "\n";
        return kExitFailure;
      }
      const auto manifest = korpus::save_bundle(state, bundle);
      if (as_json) {
        std::cout << manifest.to_json().dump(2) << "\n";
      } else {
        std::cout << "created " << bundle << "\n";
      }
      return kExitOk;
    }

    korpus::Service service(std::move(state), korpus::Service::Options{bundle, editor});
    if (*serve) {
      std::cerr << "serving on http://" << host << ":" << port << "/v1\n";
      service.serve(host, port);
      return kExitOk;
    }

    auto post = [&](std::string path, json body) {
      rq.method = "POST";
      rq.path = std::move(path);
      rq.body = std::move(body);
    };
    auto get = [&](std::string path, std::map<std::string, std::string> query) {
      rq.method = "GET";
      rq.path = std::move(path);
      rq.query = std::move(query);
    };

    if (*ingest) {
      command = "ingest";
      json body = {{"content_base64", korpus::base64_encode(read_file(ingest_file))},
                   {"encoding", encoding},
                   {"meta", read_json_file(meta_file)}};
      if (!translations_file.empty()) {
        body["translations"] = read_lines(translations_file);
        body["align"] = align;
      }
      if (!accession.empty()) body["accession_date"] = accession;
      post("/v1/texts", std::move(body));
    } else if (*tag) {
      command = "tag";
      json body = json::object();
      if (!tag_texts.empty()) body["texts"] = tag_texts;
      post("/v1/tag", std::move(body));
    } else if (*resolve || *attach) {
      const korpus::TokenRef ref = korpus::TokenRef::parse(token_ref);
      const std::string base = "/v1/markup/" + std::to_string(ref.text.value) + "/" + std::to_string(ref.sentence) + "/" +
                               std::to_string(ref.position);
      if (*resolve) {
        command = "resolve";
        post(base + "/resolve", {{"choice", choice}, {"editor", editor}});
      } else {
        command = "attach";
        json gramset = json::array();
        std::stringstream ss(attach_gramset);
        for (std::string g; std::getline(ss, g, ',');) {
          if (!g.empty()) gramset.push_back(g);
        }
        post(base + "/manual", {{"lemma", attach_lemma},
                                {"meaning", attach_meaning},
                                {"gramset", gramset},
                                {"source", attach_source},
                                {"editor", editor}});
      }
    } else if (*predict) {
      command = "predict";
      get("/v1/predict", {{"surface", predict_surface}, {"k", std::to_string(predict_k)}});
    } else if (*generate) {
      command = "generate";
      post("/v1/lemmas/" + std::to_string(generate_lemma) + "/generate", json::object());
    } else if (*lemma_add) {
      command = "lemma-add";
      json body = lemma_file.empty() ? json::object() : read_json_file(lemma_file);
      if (!lemma_surface.empty()) body["surface"] = lemma_surface;
      if (!lemma_lang.empty()) body["language"] = lemma_lang;
      if (!lemma_pos.empty()) body["pos"] = lemma_pos;
      if (!lemma_glosses.empty()) {
        json meanings = json::array();
        int ordinal = 1;
        for (const std::string& g : lemma_glosses) {
          const auto eq = g.find('=');
          if (eq == std::string::npos) {
            std::cerr << "korpus: --gloss expects LANGUAGE=text\n";
            return kExitUsage;
          }
          json m = {{"ordinal", ordinal++}, {"interpretations", {{g.substr(0, eq), g.substr(eq + 1)}}}};
          if (!lemma_concept.empty()) m["concept"] = lemma_concept;
          meanings.push_back(std::move(m));
        }
        body["meanings"] = std::move(meanings);
      }
      if (lemma_generate) body["generate"] = true;
      post("/v1/lemmas", std::move(body));
    } else if (*s_texts) {
      command = "search texts";
      get("/v1/texts", texts_q.get());
    } else if (*s_lexgram) {
      command = "search lexgram";
      auto q = lexgram_q.get();
      if (verified_only) q["verified_only"] = "true";
      get("/v1/search/lexgram", std::move(q));
    } else if (*s_lemmas) {
      command = "search lemmas";
      auto q = lemmas_q.get();
      if (lemma_prefix) q["prefix"] = "true";
      if (with_examples) q["with_examples"] = "true";
      get("/v1/lemmas", std::move(q));
    } else if (*freq) {
      command = "freq";
      get("/v1/dict/frequency", freq_q.get());
    } else if (*reverse) {
      command = "reverse";
      get("/v1/dict/reverse", reverse_q.get());
    } else if (*stats) {
      command = "stats";
      get("/v1/stats/" + stats_dim, stats_q.get());
    } else if (*queue) {
      command = "queue";
      get("/v1/queue", queue_q.get());
    } else if (*coverage) {
      command = "coverage";
      get("/v1/coverage", coverage_q.get());
    } else if (*exp) {
      command = "export-unimorph";
      get("/v1/export/unimorph", {{"lang", um_lang}});
    } else if (*imp) {
      command = "import-unimorph";
      json body = {{"lang", um_lang}, {"content", read_file(um_file)}};
      if (!um_variety.empty()) body["variety"] = um_variety;
      post("/v1/import/unimorph", std::move(body));
    } else if (*reindex) {
      command = "reindex";
      post("/v1/reindex", json::object());
    }

    const ApiResponse res = service.handle(rq);
    if (res.status != 200) {
      const json& err = res.body["error"];
      if (as_json) {
        std::cout << res.body.dump(2) << "\n";
      } else {
        std::cerr << "korpus: " << err["code"].get<std::string>() << ": " << err["message"].get<std::string>() << "\n";
      }
      return kExitFailure;
    }
    if (res.text) {
      if (!um_out.empty()) {
        std::ofstream out(um_out, std::ios::binary);
        if (!out) throw korpus::Error(korpus::ErrorCode::IoError, "cannot write " + um_out);
        out << *res.text;
      } else {
        std::cout << *res.text;
      }
    } else if (as_json) {
      std::cout << res.body.dump(2) << "\n";
    } else {
      print_plain(command, res.body);
    }
    return kExitOk;
  } catch (const korpus::Error& e) {
    if (as_json) {
      std::cout << korpus::api_error(e).dump(2) << "\n";
    } else {
      std::cerr << "korpus: " << korpus::to_string(e.code()) << ": " << e.what() << "\n";
    }
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "korpus: " << e.what() << "\n";
    return kExitFailure;
  }
}

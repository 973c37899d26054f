#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "korpus/service.hpp"
#include "korpus/unimorph.hpp"

using namespace korpus;
using korpus::testkit::TempDir;
using nlohmann::json;

namespace {

ApiResponse call(Service& svc, const std::string& method, const std::string& path,
                 std::map<std::string, std::string> query = {}, json body = json::object()) {
  return svc.handle({method, path, std::move(query), std::move(body)});
}

std::string error_code(const ApiResponse& r) { return r.body.at("error").at("code").get<std::string>(); }

json livvi_meta(const std::string& title) {
  return {{"title", title},
          {"language", "olo"},
          {"corpus_type", "Dialectal texts"},
          {"dialect", "Kotkozero"},
          {"genre", "Narrative"},
          {"year_recorded", 1957}};
}

Service shine_service() {
  CorpusState s = CorpusState::with_defaults();
  const TemplateSet templates = load_default_ruleset(s.registry);
  testkit::add_shine_verbs(s.dictionary, s.registry, &templates);
  return Service(std::move(s));
}

}  // namespace

TEST(Service, IngestSearchAndFetchText) {
  Service svc = shine_service();
  ApiResponse r = call(svc, "POST", "/v1/texts", {},
                       {{"content", "Päiväine hoštab. Kuld hoštab!"},
                        {"meta", livvi_meta("Päiväine")},
                        {"translations", {"Солнце светит.", "Золото блестит!"}},
                        {"accession_date", "2021-10-01"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const auto id = r.body.at("id").get<std::uint32_t>();
  EXPECT_EQ(r.body.at("sentences"), 2);
  EXPECT_EQ(r.body.at("word_tokens"), 4);
  EXPECT_EQ(r.body.at("alignment").at("attached"), 2);
  EXPECT_EQ(r.body.at("summary"), json({{"untagged", 2}, {"auto", 2}, {"verified", 0}}));

  // Search answers from the published snapshot until a reindex.
  EXPECT_EQ(call(svc, "GET", "/v1/texts").body.at("total"), 0);
  ASSERT_EQ(call(svc, "POST", "/v1/reindex").status, 200);
  r = call(svc, "GET", "/v1/texts", {{"language", "olo"}, {"dialect", "Kotkozero"}, {"year_from", "1950"}});
  EXPECT_EQ(r.body.at("total"), 1);
  EXPECT_EQ(r.body.at("items").at(0).at("title"), "Päiväine");
  EXPECT_EQ(call(svc, "GET", "/v1/texts", {{"year_from", "1960"}}).body.at("total"), 0);

  r = call(svc, "GET", "/v1/texts/" + std::to_string(id));
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("accession_date"), "2021-10-01");
  EXPECT_EQ(r.body.at("sentences").at(1).at("translation"), "Золото блестит!");
  const json& markup = r.body.at("markup");
  ASSERT_EQ(markup.size(), 4u);
  EXPECT_EQ(markup.at(1).at("surface"), "hoštab");
  EXPECT_EQ(markup.at(1).at("state"), "auto");
  EXPECT_EQ(markup.at(1).at("candidates").at(0).at("lemma_surface"), "hoštta");

  EXPECT_EQ(call(svc, "GET", "/v1/texts/999").status, 404);
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/texts/999")), "UnknownText");
}

TEST(Service, IngestErrors) {
  Service svc = shine_service();
  ApiResponse r = call(svc, "POST", "/v1/texts", {}, {{"meta", livvi_meta("x")}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_code(r), "InvalidRequest");
  json meta = livvi_meta("x");
  meta["language"] = "xx";
  EXPECT_EQ(error_code(call(svc, "POST", "/v1/texts", {}, {{"content", "a"}, {"meta", meta}})), "UnknownLanguage");
  meta = livvi_meta("x");
  meta["genre"] = "Fairy tales";
  EXPECT_EQ(error_code(call(svc, "POST", "/v1/texts", {}, {{"content", "a"}, {"meta", meta}})), "InvalidMeta");
  r = call(svc, "POST", "/v1/texts", {}, {{"content", "Üks. Kaks."}, {"meta", livvi_meta("x")}, {"translations", {"one"}}});
  EXPECT_EQ(error_code(r), "CountMismatch");
  r = call(svc, "POST", "/v1/texts", {}, {{"content_base64", "yOcg4eXw5fHy+yDv6+Xy8/I="}, {"encoding", "windows-1251"},
                                          {"meta", livvi_meta("x")}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(call(svc, "GET", "/v1/texts/" + std::to_string(r.body.at("id").get<int>())).body.at("normalized_text"),
            "Из бересты плетут");
  EXPECT_EQ(error_code(call(svc, "POST", "/v1/texts", {}, {{"content", "a"}, {"encoding", "KOI8-R"}, {"meta", livvi_meta("x")}})),
            "UnsupportedEncoding");
  // Failed requests leave nothing behind.
  EXPECT_EQ(svc.state().corpus.size(), 1u);
}

TEST(Service, RoutingErrors) {
  Service svc = shine_service();
  EXPECT_EQ(call(svc, "GET", "/v1/nothing").status, 404);
  EXPECT_EQ(call(svc, "GET", "/v2/texts").status, 404);
  ApiResponse r = call(svc, "DELETE", "/v1/texts");
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(error_code(r), "MethodNotAllowed");
  EXPECT_EQ(call(svc, "GET", "/v1/reindex").status, 405);
  EXPECT_EQ(call(svc, "GET", "/v1/stats/by_color").status, 404);
  EXPECT_EQ(call(svc, "GET", "/v1/texts", {{"page_size", "0"}}).status, 400);
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/texts", {{"page", "x"}})), "InvalidRequest");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/texts/abc")), "InvalidRequest");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/lemmas", {{"pos", "Gerund"}})), "UnknownPos");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/lemmas", {{"gramset", "Sg,Dual"}})), "UnknownGrammeme");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/lemmas", {{"concept", "Z999"}})), "UnknownConcept");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/dict/frequency")), "EmptyScope");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/dict/frequency", {{"unit", "syllable"}})), "InvalidQuery");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/predict", {{"surface", "muštab"}, {"k", "0"}})), "InvalidQuery");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/export/unimorph")), "InvalidRequest");
  EXPECT_EQ(error_code(call(svc, "GET", "/v1/queue", {{"class", "lexical"}})), "InvalidQuery");
}

TEST(Service, Lemmas) {
  Service svc(CorpusState::with_defaults());
  ApiResponse r = call(svc, "POST", "/v1/lemmas", {},
                       {{"surface", "hoštta"},
                        {"language", "vep"},
                        {"pos", "Verb"},
                        {"meanings", json::array({{{"interpretations", {{"English", "to shine"}}}, {"concept", "B373"}}})},
                        {"generate", true}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const auto id = r.body.at("id").get<int>();
  EXPECT_EQ(r.body.at("template"), "vep-verb-tta");
  EXPECT_EQ(r.body.at("wordforms").size(), 9u);
  EXPECT_FALSE(r.body.contains("generate"));

  r = call(svc, "GET", "/v1/lemmas/" + std::to_string(id));
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("paradigm").at(3).at("surface"), "hoštab");
  EXPECT_EQ(r.body.at("paradigm").at(3).at("gramset"), json({"Indicative", "Presence", "Positive", "3rd", "Sg"}));
  EXPECT_EQ(r.body.at("examples").at("total"), 0);
  EXPECT_EQ(call(svc, "GET", "/v1/lemmas/77").status, 404);

  r = call(svc, "POST", "/v1/lemmas/" + std::to_string(id) + "/generate");
  EXPECT_EQ(r.body.at("wordforms").size(), 9u);

  call(svc, "POST", "/v1/reindex");
  r = call(svc, "GET", "/v1/lemmas", {{"wordform", "HOŠTAB"}});
  ASSERT_EQ(r.body.at("total"), 1);
  EXPECT_EQ(r.body.at("items").at(0).at("surface"), "hoštta");
  EXPECT_EQ(call(svc, "GET", "/v1/lemmas", {{"concept", "B373"}, {"gramset", "3rd,Sg"}}).body.at("total"), 1);
  EXPECT_EQ(call(svc, "GET", "/v1/lemmas", {{"pos", "Noun"}}).body.at("total"), 0);

  r = call(svc, "POST", "/v1/lemmas", {}, {{"surface", "kala"}, {"language", "vep"}, {"pos", "Noun"}, {"generate", true}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("wordforms").size(), 30u);
  r = call(svc, "POST", "/v1/lemmas", {}, {{"surface", "xyz"}, {"language", "vep"}, {"pos", "Verb"}, {"generate", true}});
  EXPECT_EQ(error_code(r), "NoTemplateMatch");
  EXPECT_EQ(svc.state().dictionary.size(), 2u);

  call(svc, "POST", "/v1/reindex");
  r = call(svc, "GET", "/v1/dict/reverse", {{"language", "vep"}});
  ASSERT_EQ(r.body.at("items").size(), 2u);
  EXPECT_EQ(r.body.at("items").at(0).at("surface"), "kala");
  EXPECT_EQ(r.body.at("items").at(1).at("surface"), "hoštta");
}

TEST(Service, MarkupWorkflow) {
  CorpusState s = CorpusState::with_defaults();
  const Registry& reg = s.registry;
  const LemmaId kala = s.dictionary.add_lemma(reg, testkit::make_lemma(reg, "kala", "vep", "Noun", {"fish", "catch"}));
  s.dictionary.add_wordform(kala, {reg.make_gramset({"Sg", "Genitive"}), "kalan", std::nullopt, WordformOrigin::Manual});
  const TextId t = testkit::add_text(s, "Kalan zzz.", testkit::make_meta(reg, "T", "vep", "Literary texts"));
  TempDir dir;
  Service svc(std::move(s), {dir.path() / "bundle", "olga"});

  ApiResponse r = call(svc, "GET", "/v1/queue");
  ASSERT_EQ(r.body.at("total"), 2);
  EXPECT_EQ(r.body.at("items").at(0).at("homonymy"), "semantic");
  EXPECT_EQ(call(svc, "GET", "/v1/queue", {{"class", "unknown"}}).body.at("total"), 1);
  EXPECT_EQ(call(svc, "GET", "/v1/coverage").body.at("display"), "50.0%");

  const std::string base = "/v1/markup/" + std::to_string(t.value) + "/0/";
  EXPECT_EQ(error_code(call(svc, "POST", base + "0/resolve", {}, {{"choice", 2}})), "InvalidChoice");
  EXPECT_EQ(error_code(call(svc, "POST", base + "0/resolve", {}, {{"choice", -1}})), "InvalidChoice");
  EXPECT_EQ(error_code(call(svc, "POST", base + "1/resolve", {}, {{"choice", 0}})), "TokenUntagged");
  EXPECT_EQ(call(svc, "POST", base + "9/resolve", {}, {{"choice", 0}}).status, 404);
  EXPECT_EQ(error_code(call(svc, "POST", base + "0/resolve", {})), "InvalidRequest");

  r = call(svc, "POST", base + "0/resolve", {}, {{"choice", 1}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("state"), "verified");
  EXPECT_EQ(r.body.at("editor"), "olga");
  EXPECT_EQ(r.body.at("candidates").at(1).at("gloss").at("English"), "catch");

  r = call(svc, "POST", base + "1/manual", {}, {{"lemma", kala.value}, {"meaning", 1}, {"gramset", {"Sg", "Nominative"}}, {"editor", "anna"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("editor"), "anna");
  EXPECT_EQ(error_code(call(svc, "POST", base + "1/manual", {}, {{"lemma", kala.value}, {"meaning", 0}})), "InvalidMeaning");
  EXPECT_EQ(call(svc, "POST", base + "1/manual", {}, {{"lemma", 99}}).status, 404);

  EXPECT_EQ(call(svc, "GET", "/v1/queue").body.at("total"), 0);
  EXPECT_EQ(call(svc, "GET", "/v1/coverage").body.at("display"), "100.0%");

  // Every mutation was written through to the bundle.
  const CorpusState saved = load_bundle(dir.path() / "bundle");
  EXPECT_EQ(saved, svc.state());
  EXPECT_EQ(saved.audit.entries().size(), 2u);

  r = call(svc, "POST", "/v1/tag");
  EXPECT_EQ(r.body.at("summary"), json({{"untagged", 0}, {"auto", 0}, {"verified", 2}}));
  EXPECT_EQ(error_code(call(svc, "POST", "/v1/tag", {}, {{"texts", {99}}})), "UnknownText");
}

TEST(Service, SearchEndpointsMatchLibrary) {
  const auto f = testkit::participle_fixture();
  Service svc(f.state);
  ApiResponse r = call(svc, "GET", "/v1/search/lexgram",
                       {{"language", "olo"},
                        {"word1", "olla"},
                        {"pos1", "Verb"},
                        {"gramset1", "Conditional"},
                        {"pos2", "Verb"},
                        {"gramset2", "Active,2nd participle"},
                        {"distance_from", "1"},
                        {"distance_to", "1"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("text_count"), 1);
  EXPECT_EQ(r.body.at("entry_count"), 1);
  EXPECT_EQ(r.body.at("hits").at(0).at("positions"), json({2, 3}));
  EXPECT_EQ(r.body.at("hits").at(0).at("translation"), "Наша деревня улучшилась бы уже летом.");

  r = call(svc, "GET", "/v1/dict/frequency", {{"language", "olo"}, {"limit", "1"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("rows").size(), 1u);
  EXPECT_EQ(r.body.at("rows").at(0), json({{"item", "olluzin"}, {"count", 3}}));
  r = call(svc, "GET", "/v1/dict/frequency", {{"unit", "lemma"}});
  EXPECT_EQ(r.body.at("word_tokens"), 20);
  EXPECT_TRUE(r.body.contains("unrecognized"));

  r = call(svc, "GET", "/v1/stats/by_corpus");
  EXPECT_EQ(r.body.at("total"), 2);
  EXPECT_EQ(r.body.at("rows").size(), 2u);
  r = call(svc, "GET", "/v1/stats/by_year");
  EXPECT_EQ(r.body.at("rows").at(0).count("series"), 1u);

  r = call(svc, "GET", "/v1/predict", {{"surface", "olluzimme"}, {"k", "2"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_LE(r.body.at("suggestions").size(), 2u);
  EXPECT_EQ(call(svc, "GET", "/v1/registry").body.at("languages").size(), 5u);
}

TEST(Service, UnimorphEndpoints) {
  Service svc = shine_service();
  ApiResponse r = call(svc, "GET", "/v1/export/unimorph", {{"lang", "vep"}});
  ASSERT_EQ(r.status, 200);
  ASSERT_TRUE(r.text);
  EXPECT_EQ(r.payload(), *r.text);
  EXPECT_NE(r.text->find("hoštta\thoštab\tV;IND;PRS;3;SG\n"), std::string::npos);
  const CorpusState s = svc.state();
  EXPECT_EQ(*r.text, format_unimorph(export_unimorph(s.dictionary, s.registry, s.registry.require_language("vep").id,
                                                     FeatureMap::load_default(s.registry))));

  Service fresh(CorpusState::with_defaults());
  r = call(fresh, "POST", "/v1/import/unimorph", {}, {{"lang", "vep"}, {"content", *call(svc, "GET", "/v1/export/unimorph", {{"lang", "vep"}}).text}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("rows"), 27);
  EXPECT_EQ(r.body.at("lemmas_created"), 3);
  EXPECT_EQ(*call(fresh, "GET", "/v1/export/unimorph", {{"lang", "vep"}}).text,
            *call(svc, "GET", "/v1/export/unimorph", {{"lang", "vep"}}).text);
  r = call(fresh, "POST", "/v1/import/unimorph", {}, {{"lang", "vep"}, {"content", "a\tb\n"}});
  EXPECT_EQ(error_code(r), "MalformedRow");
}

TEST(Service, Http) {
  Service svc = shine_service();
  const int port = svc.bind_any_port("127.0.0.1");
  std::thread server([&] { svc.serve_bound(); });
  httplib::Client client("127.0.0.1", port);
  for (int i = 0; i < 100 && !svc.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  auto res = client.Get("/v1/lemmas?wordform=ho%C5%A1tab");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("items").at(0).at("surface"), "hoštta");

  res = client.Post("/v1/texts", json{{"content", "Kuld hoštab."}, {"meta", livvi_meta("HTTP")}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Post("/v1/texts", "{oops", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body).at("error").at("code"), "InvalidRequest");

  res = client.Get("/v1/export/unimorph?lang=vep");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/tab-separated-values; charset=utf-8");
  EXPECT_EQ(res->body, *call(svc, "GET", "/v1/export/unimorph", {{"lang", "vep"}}).text);

  res = client.Delete("/v1/texts");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 405);

  svc.stop();
  server.join();
}

TEST(Service, ConcurrentReadsAndWrites) {
  Service svc = shine_service();
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (int i = 0; i < 25; ++i) {
        const auto r = call(svc, "POST", "/v1/texts", {},
                            {{"content", "Kuld hoštab " + std::to_string(w * 100 + i) + "."}, {"meta", livvi_meta("C")}});
        if (r.status != 200) ++failures;
        if (i % 10 == 0) call(svc, "POST", "/v1/reindex");
      }
    });
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        const auto r = call(svc, "GET", "/v1/texts", {{"word", "hoštab"}});
        if (r.status != 200 || r.body.at("total").get<std::size_t>() > 100) ++failures;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  const CorpusState s = svc.state();
  EXPECT_EQ(s.corpus.size(), 100u);
  call(svc, "POST", "/v1/reindex");
  EXPECT_EQ(call(svc, "GET", "/v1/texts", {{"word", "hoštab"}}).body.at("total"), 100);
}

TEST(Service, QueryStrings) {
  EXPECT_EQ(parse_query_string("a=1&b=x%20y&c=ho%C5%A1tab&d=p+q"),
            (std::map<std::string, std::string>{{"a", "1"}, {"b", "x y"}, {"c", "hoštab"}, {"d", "p q"}}));
  const std::map<std::string, std::string> q{{"gramset", "Active,2nd participle"}, {"word", "hoštab"}};
  EXPECT_EQ(parse_query_string(encode_query_string(q)), q);
}

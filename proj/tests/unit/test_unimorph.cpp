#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "korpus/paradigm.hpp"
#include "korpus/unimorph.hpp"

using namespace korpus;
using korpus::testkit::make_lemma;
using korpus::testkit::thrown_code;

namespace {

struct Env {
  Registry registry = Registry::load_default();
  TemplateSet templates = load_default_ruleset(registry);
  FeatureMap map = FeatureMap::load_default(registry);
  LanguageId vep = registry.require_language("vep").id;
};

// Line grammar: lemma TAB form TAB POS(;FEATURE)*, LF-terminated.
bool valid_tsv(const std::string& text) {
  static const std::regex line(R"([^\t\n\r]+\t[^\t\n\r]+\t[A-Z0-9]+(;[A-Z0-9+]+)*)");
  if (text.empty()) return true;
  if (text.back() != '\n') return false;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!std::regex_match(l, line)) return false;
  }
  return true;
}

std::set<UnimorphRow> triples(const std::vector<UnimorphRow>& rows) { return {rows.begin(), rows.end()}; }

}  // namespace

TEST(Unimorph, HoshtabRowIsExact) {
  Env e;
  Dictionary d;
  testkit::add_shine_verbs(d, e.registry, &e.templates);
  const std::string tsv = format_unimorph(export_unimorph(d, e.registry, e.vep, e.map));
  EXPECT_NE(tsv.find("hoštta\thoštab\tV;IND;PRS;3;SG\n"), std::string::npos);
  EXPECT_NE(tsv.find("hoštta\thoštta\tV;NFIN\n"), std::string::npos);
  EXPECT_NE(tsv.find("hoštta\thošttoi\tV;IND;PRS;PL;LGSPEC1\n"), std::string::npos);
  EXPECT_TRUE(valid_tsv(tsv));
  EXPECT_EQ(tsv.find('\r'), std::string::npos);
}

TEST(Unimorph, FeatureStringsFollowCanonicalOrder) {
  Env e;
  const Registry& r = e.registry;
  EXPECT_EQ(unimorph_features(r, e.map, "Verb", r.make_gramset({"Sg", "3rd", "Positive", "Presence", "Indicative"})),
            "V;IND;PRS;3;SG");
  EXPECT_EQ(unimorph_features(r, e.map, "Verb", r.make_gramset({"Indicative", "Presence", "Negative", "1st", "Pl"})),
            "V;IND;PRS;NEG;1;PL");
  EXPECT_EQ(unimorph_features(r, e.map, "Noun", r.make_gramset({"Pl", "Inessive"})), "N;PL;IN+ESS");
  EXPECT_EQ(thrown_code([&] { unimorph_features(r, e.map, "Verb", r.make_gramset({"2nd participle"})); }),
            ErrorCode::UnmappedGrammeme);
  EXPECT_EQ(thrown_code([&] { unimorph_features(r, e.map, "Gerund", Gramset{}); }), ErrorCode::UnknownPos);
}

TEST(Unimorph, ExportOrderIsDeterministic) {
  Env e;
  const auto v = testkit::veps_dictionary(e.registry, e.templates, 20);
  const auto rows = export_unimorph(v.dictionary, e.registry, e.vep, e.map);
  std::size_t forms = 0;
  for (const auto& [id, l] : v.dictionary.lemmas()) forms += l.wordforms.size();
  EXPECT_EQ(rows.size(), forms);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].lemma, rows[i].lemma);
  EXPECT_EQ(rows, export_unimorph(v.dictionary, e.registry, e.vep, e.map));
  EXPECT_TRUE(export_unimorph(v.dictionary, e.registry, e.registry.require_language("olo").id, e.map).empty());
}

TEST(Unimorph, RoundTripReproducesTriples) {
  Env e;
  const auto v = testkit::veps_dictionary(e.registry, e.templates);
  const auto rows = export_unimorph(v.dictionary, e.registry, e.vep, e.map);
  const std::string tsv = format_unimorph(rows);
  ASSERT_TRUE(valid_tsv(tsv));
  EXPECT_EQ(parse_unimorph(tsv), rows);

  Dictionary fresh;
  const DialectId nwv = e.registry.find_dialect(e.vep, "New written Veps")->id;
  const ImportReport rep = import_unimorph(fresh, e.registry, tsv, e.vep, e.map, nwv);
  EXPECT_EQ(rep.rows, rows.size());
  EXPECT_EQ(rep.wordforms_added, rows.size());
  EXPECT_EQ(rep.lemmas_created, v.dictionary.size());
  const auto again = export_unimorph(fresh, e.registry, e.vep, e.map);
  EXPECT_EQ(triples(again), triples(rows));
  EXPECT_EQ(format_unimorph(again), tsv);

  // Importing into the source dictionary adds nothing.
  Dictionary same = v.dictionary;
  const ImportReport dup = import_unimorph(same, e.registry, tsv, e.vep, e.map, nwv);
  EXPECT_EQ(dup.wordforms_added, 0u);
  EXPECT_EQ(dup.wordforms_skipped, rows.size());
  EXPECT_EQ(same, v.dictionary);
}

TEST(Unimorph, ImportNineRows) {
  Env e;
  Dictionary d;
  testkit::add_shine_verbs(d, e.registry, &e.templates);
  std::string nine;
  for (const UnimorphRow& row : export_unimorph(d, e.registry, e.vep, e.map)) {
    if (row.lemma == "hoštta") nine += row.lemma + "\t" + row.form + "\t" + row.features + "\n";
  }
  Dictionary fresh;
  const ImportReport rep = import_unimorph(fresh, e.registry, nine, e.vep, e.map);
  EXPECT_EQ(rep.rows, 9u);
  EXPECT_EQ(rep.lemmas_created, 1u);
  EXPECT_EQ(rep.wordforms_added, 9u);
  ASSERT_EQ(fresh.size(), 1u);
  const Lemma& l = fresh.lemmas().begin()->second;
  EXPECT_EQ(l.surface, "hoštta");
  EXPECT_EQ(l.pos, "Verb");
  const auto hits = fresh.analyze("hoštab");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].gramset, e.registry.make_gramset({"Indicative", "Presence", "Positive", "3rd", "Sg"}));
  for (const Wordform& wf : l.wordforms) EXPECT_EQ(wf.origin, WordformOrigin::Imported);
}

TEST(Unimorph, MalformedInputIsRejectedWhole) {
  Env e;
  Dictionary d;
  EXPECT_EQ(thrown_code([&] { parse_unimorph("hoštta\thoštab\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(thrown_code([&] { parse_unimorph("a\tb\tc\td\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(thrown_code([&] { parse_unimorph("a\t\tV\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(parse_unimorph("\nhoštta\thoštab\tV;IND;PRS;3;SG\n\n").size(), 1u);

  const std::string bad_feature = "hoštta\thoštan\tV;IND;PRS;1;SG\nhoštta\thoštab\tV;IND;PRS;3;XYZ\n";
  const auto err = thrown_code([&] { import_unimorph(d, e.registry, bad_feature, e.vep, e.map); });
  EXPECT_EQ(err, ErrorCode::UnknownFeature);
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(thrown_code([&] { import_unimorph(d, e.registry, "kala\tkalan\tN;SG;GEN;GEN\n", e.vep, e.map); }),
            ErrorCode::DuplicateCategory);
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(thrown_code([&] { import_unimorph(d, e.registry, "kala\tkalan\tN;GEN\n", LanguageId{77}, e.map); }),
            ErrorCode::UnknownLanguage);
}

TEST(Unimorph, UnmappedGrammemeFailsExport) {
  Env e;
  Dictionary d;
  const LanguageId olo = e.registry.require_language("olo").id;
  const LemmaId id = d.add_lemma(e.registry, make_lemma(e.registry, "parandua", "olo", "Verb"));
  d.add_wordform(id, {e.registry.make_gramset({"Active", "2nd participle"}), "parandannuh", std::nullopt,
                      WordformOrigin::Manual});
  EXPECT_EQ(thrown_code([&] { export_unimorph(d, e.registry, olo, e.map); }), ErrorCode::UnmappedGrammeme);
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "korpus/bundle.hpp"
#include "korpus/dictionary.hpp"
#include "korpus/error.hpp"
#include "korpus/ingest.hpp"
#include "korpus/markup.hpp"
#include "korpus/paradigm.hpp"
#include "korpus/registry.hpp"
#include "korpus/search.hpp"

namespace korpus::testkit {

/// Error code thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Fixed clock values so fixtures are reproducible.
Date fixed_date();
Timestamp fixed_time();

/// Deterministic across standard libraries (no std::*_distribution).
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }
  template <class C>
  const auto& pick(const C& c) {
    auto it = c.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(below(c.size())));
    return *it;
  }

 private:
  std::mt19937 engine_;
};

Lemma make_lemma(const Registry& registry, const std::string& surface, const std::string& language,
                 const std::string& pos, const std::vector<std::string>& english = {},
                 const std::optional<std::string>& concept_id = std::nullopt);

/// The three shine verbs of the lemma search screen, with their meaning lists.
struct ShineVerbs {
  LemmaId hoshtta;
  LemmaId kishtta;
  LemmaId kushtta;
};
ShineVerbs add_shine_verbs(Dictionary& dictionary, const Registry& registry, const TemplateSet* templates = nullptr);

/// Veps lemmas spread over the three shipped templates (per_template each, plus
/// the shine verbs), every paradigm generated.
struct VepsDictionary {
  Dictionary dictionary;
  ShineVerbs shine;
  std::vector<LemmaId> lemmas;
};
VepsDictionary veps_dictionary(const Registry& registry, const TemplateSet& templates, std::size_t per_template = 70,
                               std::uint32_t seed = 7);

TextMeta make_meta(const Registry& registry, const std::string& title, const std::string& language,
                   const std::string& corpus_type);

/// Ingests, tags and stores one text; returns its id.
TextId add_text(CorpusState& state, const std::string& content, const TextMeta& meta,
                const std::vector<std::string>& translations = {});

/// Three Livvi narratives recorded in Kotkozero plus near misses that each fail
/// exactly one of the advanced-search filters.
struct MetadataFixture {
  CorpusState state;
  std::vector<TextId> expected;
};
MetadataFixture metadata_fixture();
TextQuery metadata_query(const Registry& registry);

/// A Livvi sentence with a conditional form of olla right before an active
/// second participle.
struct ParticipleFixture {
  CorpusState state;
  LemmaId olla;
  LemmaId parandua;
  TextId text;
};
ParticipleFixture participle_fixture();
LexGramQuery participle_query(const Registry& registry, const ParticipleFixture& f);

/// A text of exactly 100 word tokens, 73 of them known to the dictionary, and a
/// surface (occurring once) that is not.
struct CoverageFixture {
  CorpusState state;
  TextId text;
  std::string missing_surface;
};
CoverageFixture coverage_fixture();

/// Randomized tagged corpus over the Veps dictionary plus a few lemmas of other
/// languages; some tokens verified, some manually attached.
struct RandomCorpus {
  CorpusState state;
  std::size_t word_tokens = 0;
};
RandomCorpus random_corpus(std::uint32_t seed, std::size_t texts = 60);

CorpusIndex build_index(const CorpusState& state);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "korpus-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace korpus::testkit

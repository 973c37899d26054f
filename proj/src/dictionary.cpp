#include "korpus/dictionary.hpp"

#include <algorithm>

#include "korpus/error.hpp"
#include "korpus/unicode.hpp"

namespace korpus {

std::string_view to_string(WordformOrigin origin) {
  switch (origin) {
    case WordformOrigin::Generated: return "generated";
    case WordformOrigin::Manual: return "manual";
    case WordformOrigin::Imported: return "imported";
  }
  return "manual";
}

WordformOrigin wordform_origin_from_string(std::string_view text) {
  if (text == "generated") return WordformOrigin::Generated;
  if (text == "manual") return WordformOrigin::Manual;
  if (text == "imported") return WordformOrigin::Imported;
  throw Error(ErrorCode::ParseError, "unknown wordform origin: " + std::string(text));
}

namespace {

void check_dense(const std::vector<Meaning>& meanings) {
  for (std::size_t i = 0; i < meanings.size(); ++i) {
    if (meanings[i].ordinal != static_cast<int>(i + 1)) {
      throw Error(ErrorCode::NonDenseOrdinal, "meaning ordinals must run 1.." + std::to_string(meanings.size()),
                  {{"expected", i + 1}, {"got", meanings[i].ordinal}});
    }
  }
}

void check_unique_cells(const std::vector<Wordform>& forms) {
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      if (forms[i].gramset == forms[j].gramset && forms[i].variety == forms[j].variety) {
        throw Error(ErrorCode::DuplicateWordform, "two wordforms share gramset and variety: " + forms[i].surface +
                                                      ", " + forms[j].surface);
      }
    }
  }
}

}  // namespace

LemmaId Dictionary::add_lemma(const Registry& registry, Lemma record) {
  if (record.surface.empty()) throw Error(ErrorCode::InvalidValue, "lemma surface must not be empty");
  if (!registry.language(record.language)) {
    throw Error(ErrorCode::UnknownLanguage, "lemma language is not registered");
  }
  if (!registry.has_pos(record.pos)) throw Error(ErrorCode::UnknownPos, "unknown part of speech: " + record.pos);
  for (DialectId d : record.dialects_of_usage) {
    if (!registry.dialect(d)) throw Error(ErrorCode::UnknownDialect, "unknown dialect id " + std::to_string(d.value));
  }
  check_dense(record.meanings);
  for (const Meaning& m : record.meanings) {
    if (m.concept_id && !registry.find_concept(*m.concept_id)) {
      throw Error(ErrorCode::UnknownConcept, "unknown concept: " + *m.concept_id);
    }
    check_links(m);
  }
  check_unique_cells(record.wordforms);
  record.surface = unicode::nfc(record.surface);
  for (Wordform& wf : record.wordforms) {
    if (wf.surface.empty()) throw Error(ErrorCode::InvalidValue, "wordform surface must not be empty");
    wf.surface = unicode::nfc(wf.surface);
  }
  record.id = LemmaId{next_id_++};
  const LemmaId id = record.id;
  auto& stored = lemmas_.emplace(id, std::move(record)).first->second;
  index_lemma(stored);
  add_reverse_links(stored);
  return id;
}

void Dictionary::restore_lemma(Lemma lemma) {
  if (auto it = lemmas_.find(lemma.id); it != lemmas_.end()) {
    unindex_lemma(it->second);
    drop_reverse_links(it->second);
    lemmas_.erase(it);
  }
  next_id_ = std::max(next_id_, lemma.id.value + 1);
  const LemmaId id = lemma.id;
  auto& stored = lemmas_.emplace(id, std::move(lemma)).first->second;
  index_lemma(stored);
  add_reverse_links(stored);
}

bool Dictionary::remove_lemma(LemmaId id) {
  auto it = lemmas_.find(id);
  if (it == lemmas_.end()) return false;
  unindex_lemma(it->second);
  drop_reverse_links(it->second);
  lemmas_.erase(it);
  if (auto rev = reverse_links_.find(id); rev != reverse_links_.end()) {
    for (const TranslationSource& src : rev->second) {
      auto owner = lemmas_.find(src.lemma);
      if (owner == lemmas_.end()) continue;
      for (Meaning& m : owner->second.meanings) {
        for (auto& [lang, targets] : m.translation_links) std::erase(targets, id);
        std::erase_if(m.translation_links, [](const auto& kv) { return kv.second.empty(); });
      }
    }
    reverse_links_.erase(rev);
  }
  return true;
}

const Lemma* Dictionary::find(LemmaId id) const {
  auto it = lemmas_.find(id);
  return it == lemmas_.end() ? nullptr : &it->second;
}

const Lemma& Dictionary::require(LemmaId id) const {
  if (const Lemma* l = find(id)) return *l;
  throw Error(ErrorCode::UnknownLemma, "no lemma with id " + std::to_string(id.value), {{"lemma", id.value}});
}

Lemma& Dictionary::mutable_lemma(LemmaId id) {
  auto it = lemmas_.find(id);
  if (it == lemmas_.end()) {
    throw Error(ErrorCode::UnknownLemma, "no lemma with id " + std::to_string(id.value), {{"lemma", id.value}});
  }
  return it->second;
}

std::size_t Dictionary::wordform_count() const {
  std::size_t n = 0;
  for (const auto& [id, l] : lemmas_) n += l.wordforms.size();
  return n;
}

std::vector<LemmaId> Dictionary::find_by_surface(std::string_view surface) const {
  std::vector<LemmaId> out;
  auto it = index_.find(unicode::fold_key(surface));
  if (it == index_.end()) return out;
  for (const IndexEntry& e : it->second) {
    if (e.wordform < 0) out.push_back(e.lemma);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Dictionary::check_links(const Meaning& meaning) const {
  for (const auto& [lang, targets] : meaning.translation_links) {
    for (LemmaId t : targets) {
      const Lemma* target = find(t);
      if (!target) throw Error(ErrorCode::UnknownTarget, "translation target lemma " + std::to_string(t.value) + " does not exist");
      if (target->language != lang) {
        throw Error(ErrorCode::UnknownTarget, "translation target " + target->surface + " is filed under the wrong language");
      }
    }
  }
}

void Dictionary::add_reverse_links(const Lemma& lemma) {
  for (const Meaning& m : lemma.meanings) {
    for (const auto& [lang, targets] : m.translation_links) {
      for (LemmaId t : targets) reverse_links_[t].insert({lemma.id, m.ordinal});
    }
  }
}

void Dictionary::drop_reverse_links(const Lemma& lemma) {
  for (const Meaning& m : lemma.meanings) {
    for (const auto& [lang, targets] : m.translation_links) {
      for (LemmaId t : targets) {
        auto it = reverse_links_.find(t);
        if (it == reverse_links_.end()) continue;
        it->second.erase({lemma.id, m.ordinal});
        if (it->second.empty()) reverse_links_.erase(it);
      }
    }
  }
}

void Dictionary::upsert_meaning(const Registry& registry, LemmaId id, Meaning meaning) {
  Lemma& lemma = mutable_lemma(id);
  const int count = static_cast<int>(lemma.meanings.size());
  if (meaning.ordinal < 1 || meaning.ordinal > count + 1) {
    throw Error(ErrorCode::NonDenseOrdinal,
                "meaning ordinal " + std::to_string(meaning.ordinal) + " would leave a gap after " +
                    std::to_string(count),
                {{"ordinal", meaning.ordinal}, {"count", count}});
  }
  if (meaning.concept_id && !registry.find_concept(*meaning.concept_id)) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept: " + *meaning.concept_id);
  }
  check_links(meaning);
  drop_reverse_links(lemma);
  if (meaning.ordinal == count + 1) {
    lemma.meanings.push_back(std::move(meaning));
  } else {
    Meaning& slot = lemma.meanings[static_cast<std::size_t>(meaning.ordinal - 1)];
    if (meaning.translation_links.empty()) meaning.translation_links = std::move(slot.translation_links);
    slot = std::move(meaning);
  }
  add_reverse_links(lemma);
}

void Dictionary::link_translation(LemmaId id, int ordinal, LemmaId target_id) {
  Lemma& lemma = mutable_lemma(id);
  if (ordinal < 1 || ordinal > static_cast<int>(lemma.meanings.size())) {
    throw Error(ErrorCode::InvalidMeaning, "lemma " + lemma.surface + " has no meaning " + std::to_string(ordinal));
  }
  const Lemma* target = find(target_id);
  if (!target) {
    throw Error(ErrorCode::UnknownTarget, "translation target lemma " + std::to_string(target_id.value) + " does not exist");
  }
  auto& targets = lemma.meanings[static_cast<std::size_t>(ordinal - 1)].translation_links[target->language];
  if (std::find(targets.begin(), targets.end(), target_id) == targets.end()) targets.push_back(target_id);
  reverse_links_[target_id].insert({id, ordinal});
}

std::vector<TranslationSource> Dictionary::translations_into(LemmaId target) const {
  auto it = reverse_links_.find(target);
  if (it == reverse_links_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void Dictionary::add_wordform(LemmaId id, Wordform wordform) {
  Lemma& lemma = mutable_lemma(id);
  if (wordform.surface.empty()) throw Error(ErrorCode::InvalidValue, "wordform surface must not be empty");
  for (const Wordform& wf : lemma.wordforms) {
    if (wf.gramset == wordform.gramset && wf.variety == wordform.variety) {
      throw Error(ErrorCode::DuplicateWordform, lemma.surface + " already has a form for this gramset and variety: " + wf.surface);
    }
  }
  unindex_lemma(lemma);
  wordform.surface = unicode::nfc(wordform.surface);
  lemma.wordforms.push_back(std::move(wordform));
  index_lemma(lemma);
}

std::size_t Dictionary::replace_generated(LemmaId id, std::vector<Wordform> forms, std::string template_id) {
  Lemma& lemma = mutable_lemma(id);
  unindex_lemma(lemma);
  std::erase_if(lemma.wordforms, [](const Wordform& wf) { return wf.origin == WordformOrigin::Generated; });
  std::size_t stored = 0;
  for (Wordform& wf : forms) {
    const bool taken = std::any_of(lemma.wordforms.begin(), lemma.wordforms.end(), [&](const Wordform& other) {
      return other.gramset == wf.gramset && other.variety == wf.variety;
    });
    if (taken) continue;
    wf.origin = WordformOrigin::Generated;
    wf.surface = unicode::nfc(wf.surface);
    lemma.wordforms.push_back(std::move(wf));
    ++stored;
  }
  lemma.template_id = std::move(template_id);
  index_lemma(lemma);
  return stored;
}

void Dictionary::index_lemma(const Lemma& lemma) {
  index_[unicode::fold_key(lemma.surface)].push_back({lemma.id, -1});
  for (std::size_t i = 0; i < lemma.wordforms.size(); ++i) {
    index_[unicode::fold_key(lemma.wordforms[i].surface)].push_back({lemma.id, static_cast<int>(i)});
  }
}

void Dictionary::unindex_lemma(const Lemma& lemma) {
  auto drop = [&](const std::string& surface) {
    auto it = index_.find(unicode::fold_key(surface));
    if (it == index_.end()) return;
    std::erase_if(it->second, [&](const IndexEntry& e) { return e.lemma == lemma.id; });
    if (it->second.empty()) index_.erase(it);
  };
  drop(lemma.surface);
  for (const Wordform& wf : lemma.wordforms) drop(wf.surface);
}

std::vector<AnalysisHit> Dictionary::analyze(std::string_view surface) const {
  std::vector<AnalysisHit> hits;
  auto it = index_.find(unicode::fold_key(surface));
  if (it == index_.end()) return hits;
  std::vector<IndexEntry> entries = it->second;
  std::sort(entries.begin(), entries.end(), [](const IndexEntry& a, const IndexEntry& b) {
    if (a.lemma != b.lemma) return a.lemma < b.lemma;
    // dictionary-form entries (-1) sort after wordform entries of the same lemma
    return static_cast<unsigned>(a.wordform) < static_cast<unsigned>(b.wordform);
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const IndexEntry& e = entries[i];
    const Lemma& lemma = lemmas_.at(e.lemma);
    if (e.wordform >= 0) {
      const Wordform& wf = lemma.wordforms[static_cast<std::size_t>(e.wordform)];
      hits.push_back({lemma.id, wf.gramset, wf.variety});
    } else {
      const bool has_form_hit = i > 0 && entries[i - 1].lemma == e.lemma && entries[i - 1].wordform >= 0;
      if (!has_form_hit) hits.push_back({lemma.id, Gramset{}, std::nullopt});
    }
  }
  return hits;
}

}  // namespace korpus

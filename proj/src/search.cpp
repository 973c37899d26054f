#include "korpus/search.hpp"

#include <algorithm>
#include <set>

#include "korpus/error.hpp"
#include "korpus/unicode.hpp"

namespace korpus {

// ---------------------------------------------------------------- index

namespace {

const std::vector<Occurrence> kNoOccurrences;
const std::vector<std::pair<Occurrence, bool>> kNoLemmaOccurrences;

template <class T>
void insert_sorted(std::vector<T>& v, T item) {
  v.insert(std::upper_bound(v.begin(), v.end(), item), std::move(item));
}

std::vector<Reading> readings_of(const TokenMarkup* m, const Dictionary& dictionary) {
  std::vector<Reading> out;
  if (!m || m->state == MarkupState::Untagged) return out;
  auto add = [&](const MarkupCandidate& c, bool verified) {
    const Lemma* lemma = dictionary.find(c.lemma);
    if (!lemma) return;
    Reading r{c.lemma, unicode::fold_key(lemma->surface), lemma->pos, c.gramset, verified};
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  };
  if (m->state == MarkupState::Verified) {
    add(m->candidates[*m->chosen], true);
  } else {
    for (const MarkupCandidate& c : m->candidates) add(c, false);
  }
  return out;
}

}  // namespace

CorpusIndex CorpusIndex::build(const Corpus& corpus, const MarkupStore& markup, const Dictionary& dictionary) {
  CorpusIndex index;
  for (const auto& [id, doc] : corpus.texts()) index.add_text(doc, markup.text(id), dictionary);
  return index;
}

void CorpusIndex::add_text(const TextDoc& doc, const TextMarkup* markup, const Dictionary& dictionary) {
  remove_text(doc.id);
  for (const Sentence& s : doc.sentences) {
    std::vector<Slot> slots;
    for (const Token& t : s.tokens) {
      if (t.kind != TokenKind::Word) continue;
      Slot slot;
      slot.at = {doc.id, s.index, *t.word_index, t.position};
      slot.key = unicode::fold_key(t.surface);
      const TokenMarkup* m = nullptr;
      if (markup) {
        auto it = markup->find(TokenRef{doc.id, s.index, t.position});
        if (it != markup->end()) m = &it->second;
      }
      slot.readings = readings_of(m, dictionary);
      insert_sorted(postings_[slot.key], slot.at);
      std::set<LemmaId> lemmas;
      for (const Reading& r : slot.readings) {
        if (!lemmas.insert(r.lemma).second) continue;
        insert_sorted(lemma_postings_[r.lemma], std::pair(slot.at, r.verified));
      }
      slots.push_back(std::move(slot));
    }
    sentences_.emplace(std::pair(doc.id, s.index), std::move(slots));
  }
}

void CorpusIndex::remove_text(TextId id) {
  auto first = sentences_.lower_bound({id, 0});
  auto last = first;
  while (last != sentences_.end() && last->first.first == id) ++last;
  if (first == last) return;
  sentences_.erase(first, last);
  for (auto it = postings_.begin(); it != postings_.end();) {
    std::erase_if(it->second, [&](const Occurrence& o) { return o.text == id; });
    it = it->second.empty() ? postings_.erase(it) : std::next(it);
  }
  for (auto it = lemma_postings_.begin(); it != lemma_postings_.end();) {
    std::erase_if(it->second, [&](const auto& o) { return o.first.text == id; });
    it = it->second.empty() ? lemma_postings_.erase(it) : std::next(it);
  }
}

const std::vector<Occurrence>& CorpusIndex::posting(std::string_view surface) const {
  auto it = postings_.find(unicode::fold_key(surface));
  return it == postings_.end() ? kNoOccurrences : it->second;
}

const std::vector<std::pair<Occurrence, bool>>& CorpusIndex::lemma_occurrences(LemmaId lemma) const {
  auto it = lemma_postings_.find(lemma);
  return it == lemma_postings_.end() ? kNoLemmaOccurrences : it->second;
}

const std::vector<Slot>* CorpusIndex::slots(TextId text, std::uint32_t sentence) const {
  auto it = sentences_.find({text, sentence});
  return it == sentences_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------- helpers

namespace {

void check_page(std::size_t page, std::size_t page_size) {
  if (page < 1) throw Error(ErrorCode::InvalidQuery, "page must be at least 1");
  if (page_size < 1) throw Error(ErrorCode::InvalidQuery, "page_size must be at least 1");
}

template <class T>
Page<T> paginate(std::vector<T> all, std::size_t page, std::size_t page_size) {
  Page<T> out;
  out.total = all.size();
  out.page = page;
  out.page_size = page_size;
  const std::size_t first = (page - 1) * page_size;
  if (first < all.size()) {
    const std::size_t last = std::min(all.size(), first + page_size);
    out.items.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first)),
                     std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(last)));
  }
  return out;
}

bool opt_contains(const std::optional<std::string>& field, const std::optional<std::string>& needle) {
  if (!needle) return true;
  return field && unicode::contains_folded(*field, *needle);
}

const Sentence* find_sentence(const TextDoc& doc, std::uint32_t index) {
  if (index < doc.sentences.size() && doc.sentences[index].index == index) return &doc.sentences[index];
  for (const Sentence& s : doc.sentences) {
    if (s.index == index) return &s;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------- texts

bool text_matches(const SearchContext& ctx, const TextDoc& doc, const TextQuery& q) {
  const TextMeta& m = doc.meta;
  if (q.language && m.language != *q.language) return false;
  if (q.dialect && m.dialect != q.dialect) return false;
  if (q.corpus_type && m.corpus_type != *q.corpus_type) return false;
  if (q.genre && m.genre != q.genre) return false;
  if (!opt_contains(m.informant, q.informant)) return false;
  if (!opt_contains(m.recorder, q.recorder)) return false;
  if (!opt_contains(m.author, q.author)) return false;
  if (q.title && !unicode::contains_folded(m.title, *q.title) && !opt_contains(m.title_translation, q.title)) return false;
  if (q.fragment && !unicode::contains_folded(doc.normalized_text, *q.fragment)) return false;
  if (q.year_from || q.year_to) {
    auto in_range = [&](const std::optional<int>& y) {
      return y && (!q.year_from || *y >= *q.year_from) && (!q.year_to || *y <= *q.year_to);
    };
    if (!in_range(m.year_recorded) && !in_range(m.year_published)) return false;
  }
  if (q.word) {
    const auto& occ = ctx.index.posting(*q.word);
    auto it = std::lower_bound(occ.begin(), occ.end(), Occurrence{doc.id, 0, 0, 0});
    if (it == occ.end() || it->text != doc.id) return false;
  }
  return true;
}

Page<TextHit> search_texts(const SearchContext& ctx, const TextQuery& q) {
  check_page(q.page, q.page_size);
  if (q.year_from && q.year_to && *q.year_from > *q.year_to) {
    throw Error(ErrorCode::InvalidQuery, "year_from is after year_to", {{"year_from", *q.year_from}, {"year_to", *q.year_to}});
  }
  std::vector<TextHit> hits;
  for (const auto& [id, doc] : ctx.corpus.texts()) {
    if (!text_matches(ctx, doc, q)) continue;
    TextHit hit{id, doc.meta.title, doc.meta.title_translation, std::nullopt};
    if (q.word) {
      const auto& occ = ctx.index.posting(*q.word);
      auto it = std::lower_bound(occ.begin(), occ.end(), Occurrence{id, 0, 0, 0});
      if (const Sentence* s = find_sentence(doc, it->sentence)) hit.snippet = doc.slice(s->span);
    } else if (q.fragment) {
      for (const Sentence& s : doc.sentences) {
        std::string text = doc.slice(s.span);
        if (unicode::contains_folded(text, *q.fragment)) {
          hit.snippet = std::move(text);
          break;
        }
      }
    }
    hits.push_back(std::move(hit));
  }
  std::sort(hits.begin(), hits.end(), [](const TextHit& a, const TextHit& b) {
    return a.title != b.title ? a.title < b.title : a.id < b.id;
  });
  return paginate(std::move(hits), q.page, q.page_size);
}

// ---------------------------------------------------------------- lexgram

bool slot_satisfies(const Slot& slot, const WordConstraint& c, bool verified_only) {
  const std::string word = c.word ? unicode::fold_key(*c.word) : std::string();
  if (c.word && !c.pos && c.grammemes.empty() && slot.key == word) return true;
  for (const Reading& r : slot.readings) {
    if (verified_only && !r.verified) continue;
    if (c.word && slot.key != word && r.lemma_key != word) continue;
    if (c.pos && r.pos != *c.pos) continue;
    if (!r.gramset.includes(std::span<const GrammemeId>(c.grammemes))) continue;
    return true;
  }
  return false;
}

LexGramResult lexgram_search(const SearchContext& ctx, const LexGramQuery& q) {
  if (q.word1.empty()) throw Error(ErrorCode::InvalidQuery, "word1 needs at least one constraint");
  if (q.word2 && (q.distance_from < 1 || q.distance_to < q.distance_from)) {
    throw Error(ErrorCode::InvalidQuery, "distance must satisfy 1 <= from <= to",
                {{"distance_from", q.distance_from}, {"distance_to", q.distance_to}});
  }
  LexGramResult result;
  std::set<TextId> texts;
  for (const auto& [key, slots] : ctx.index.sentences()) {
    const TextDoc* doc = ctx.corpus.find(key.first);
    if (!doc) continue;
    if (q.language && doc->meta.language != *q.language) continue;
    if (q.corpus_type && doc->meta.corpus_type != *q.corpus_type) continue;
    const Sentence* sentence = nullptr;
    auto emit = [&](const Slot& a, const Slot* b) {
      if (!sentence) sentence = find_sentence(*doc, key.second);
      LexGramHit hit{doc->id, key.second, a.at.position, std::nullopt, {}, std::nullopt};
      if (b) hit.position2 = b->at.position;
      if (sentence) {
        hit.sentence_text = doc->slice(sentence->span);
        hit.translation = sentence->translation;
      }
      result.hits.push_back(std::move(hit));
      texts.insert(doc->id);
    };
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slot_satisfies(slots[i], q.word1, q.verified_only)) continue;
      if (!q.word2) {
        emit(slots[i], nullptr);
        continue;
      }
      for (int d = q.distance_from; d <= q.distance_to; ++d) {
        const std::size_t j = i + static_cast<std::size_t>(d);
        if (j >= slots.size()) break;
        if (slot_satisfies(slots[j], *q.word2, q.verified_only)) emit(slots[i], &slots[j]);
      }
    }
  }
  result.entry_count = result.hits.size();
  result.text_count = texts.size();
  return result;
}

// ---------------------------------------------------------------- lemmas

ExampleCounts example_counts(const CorpusIndex& index, LemmaId lemma) {
  ExampleCounts c;
  for (const auto& [occ, verified] : index.lemma_occurrences(lemma)) ++(verified ? c.verified : c.unverified);
  return c;
}

bool lemma_matches(const SearchContext& ctx, const Lemma& lemma, const LemmaQuery& q) {
  if (q.language && lemma.language != *q.language) return false;
  if (q.pos && lemma.pos != *q.pos) return false;
  if (q.surface) {
    const std::string hay = unicode::fold_key(lemma.surface);
    const std::string needle = unicode::fold_key(*q.surface);
    if (q.prefix ? hay.rfind(needle, 0) != 0 : hay.find(needle) == std::string::npos) return false;
  }
  if (!q.grammemes.empty()) {
    const bool any = std::any_of(lemma.wordforms.begin(), lemma.wordforms.end(), [&](const Wordform& wf) {
      return wf.gramset.includes(std::span<const GrammemeId>(q.grammemes));
    });
    if (!any) return false;
  }
  if (q.dialect) {
    const bool used = lemma.dialects_of_usage.count(*q.dialect) > 0 ||
                      std::any_of(lemma.wordforms.begin(), lemma.wordforms.end(),
                                  [&](const Wordform& wf) { return wf.variety == q.dialect; });
    if (!used) return false;
  }
  if (q.interpretation) {
    const bool any = std::any_of(lemma.meanings.begin(), lemma.meanings.end(), [&](const Meaning& m) {
      return std::any_of(m.interpretations.begin(), m.interpretations.end(),
                         [&](const auto& kv) { return unicode::contains_folded(kv.second, *q.interpretation); });
    });
    if (!any) return false;
  }
  if (q.concept_id) {
    const bool any = std::any_of(lemma.meanings.begin(), lemma.meanings.end(),
                                 [&](const Meaning& m) { return m.concept_id == q.concept_id; });
    if (!any) return false;
  }
  if (q.with_examples && ctx.index.lemma_occurrences(lemma.id).empty()) return false;
  return true;
}

Page<LemmaHit> search_lemmas(const SearchContext& ctx, const LemmaQuery& q) {
  check_page(q.page, q.page_size);
  std::vector<const Lemma*> found;
  for (const auto& [id, lemma] : ctx.dictionary.lemmas()) {
    if (lemma_matches(ctx, lemma, q)) found.push_back(&lemma);
  }
  std::sort(found.begin(), found.end(), [](const Lemma* a, const Lemma* b) {
    return a->surface != b->surface ? a->surface < b->surface : a->id < b->id;
  });
  std::vector<LemmaHit> hits;
  hits.reserve(found.size());
  for (const Lemma* l : found) {
    LemmaHit h{l->id, l->surface, l->pos, l->language, {}, l->wordforms.size(), example_counts(ctx.index, l->id)};
    for (const Meaning& m : l->meanings) h.interpretations.push_back(m.interpretations);
    hits.push_back(std::move(h));
  }
  return paginate(std::move(hits), q.page, q.page_size);
}

std::vector<LemmaId> search_lemma_by_wordform(const Dictionary& dictionary, std::string_view surface) {
  std::vector<LemmaId> out;
  for (const AnalysisHit& h : dictionary.analyze(surface)) {
    if (std::find(out.begin(), out.end(), h.lemma) == out.end()) out.push_back(h.lemma);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- frequency / reverse

FrequencyTable frequency(const SearchContext& ctx, const Scope& scope, FrequencyUnit unit) {
  FrequencyTable table;
  table.unit = unit;
  std::map<std::string, std::size_t> by_form;
  std::map<LemmaId, std::size_t> by_lemma;
  for (const auto& [id, doc] : ctx.corpus.texts()) {
    if (!scope.matches(doc)) continue;
    for (const Sentence& s : doc.sentences) {
      for (const Token& t : s.tokens) {
        if (t.kind != TokenKind::Word) continue;
        ++table.word_tokens;
        if (unit == FrequencyUnit::Wordform) {
          ++by_form[unicode::lower(t.surface)];
          continue;
        }
        const TokenMarkup* m = ctx.markup.find({id, s.index, t.position});
        std::set<LemmaId> lemmas;
        if (m && m->state == MarkupState::Verified) {
          lemmas.insert(m->candidates[*m->chosen].lemma);
        } else if (m && m->state == MarkupState::Auto) {
          for (const MarkupCandidate& c : m->candidates) lemmas.insert(c.lemma);
        }
        std::erase_if(lemmas, [&](LemmaId l) { return !ctx.dictionary.find(l); });
        if (lemmas.empty()) {
          ++table.unrecognized;
        } else if (lemmas.size() > 1) {
          ++table.ambiguous;
        } else {
          ++by_lemma[*lemmas.begin()];
        }
      }
    }
  }
  if (table.word_tokens == 0) throw Error(ErrorCode::EmptyScope, "no word tokens in scope");
  for (const auto& [form, n] : by_form) table.rows.push_back({form, std::nullopt, n});
  for (const auto& [lemma, n] : by_lemma) table.rows.push_back({ctx.dictionary.require(lemma).surface, lemma, n});
  std::sort(table.rows.begin(), table.rows.end(), [](const FrequencyRow& a, const FrequencyRow& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.item != b.item) return a.item < b.item;
    return a.lemma < b.lemma;
  });
  return table;
}

std::vector<LemmaId> reverse_dictionary(const Dictionary& dictionary, std::optional<LanguageId> language) {
  struct Key {
    std::u32string reversed;
    const Lemma* lemma;
  };
  std::vector<Key> keys;
  for (const auto& [id, lemma] : dictionary.lemmas()) {
    if (language && lemma.language != *language) continue;
    std::u32string r = unicode::to_u32(lemma.surface);
    std::reverse(r.begin(), r.end());
    keys.push_back({std::move(r), &lemma});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.reversed != b.reversed) return a.reversed < b.reversed;
    if (a.lemma->surface != b.lemma->surface) return a.lemma->surface < b.lemma->surface;
    return a.lemma->id < b.lemma->id;
  });
  std::vector<LemmaId> out;
  out.reserve(keys.size());
  for (const Key& k : keys) out.push_back(k.lemma->id);
  return out;
}

// ---------------------------------------------------------------- stats

std::string_view to_string(StatsDimension d) {
  switch (d) {
    case StatsDimension::ByCorpus: return "by_corpus";
    case StatsDimension::ByGenre: return "by_genre";
    case StatsDimension::ByYear: return "by_year";
  }
  return "?";
}

StatsDimension stats_dimension_from_string(std::string_view text) {
  if (text == "by_corpus") return StatsDimension::ByCorpus;
  if (text == "by_genre") return StatsDimension::ByGenre;
  if (text == "by_year") return StatsDimension::ByYear;
  throw Error(ErrorCode::InvalidQuery, "unknown stats dimension: " + std::string(text));
}

StatsTable stats(const Registry& registry, const Corpus& corpus, StatsDimension dimension, const Scope& scope) {
  StatsTable table;
  table.dimension = dimension;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> counts;
  auto year_bucket = [](const std::optional<int>& y) { return y ? std::to_string(*y) : std::string("unknown"); };
  for (const auto& [id, doc] : corpus.texts()) {
    if (!scope.matches(doc)) continue;
    ++table.total;
    const TextMeta& m = doc.meta;
    const LanguageTag* lang = registry.language(m.language);
    const std::string language = lang ? lang->name : "unknown";
    switch (dimension) {
      case StatsDimension::ByCorpus: {
        const CorpusType* ct = registry.corpus_type(m.corpus_type);
        ++counts[{"", language, ct ? ct->name : "unknown"}];
        break;
      }
      case StatsDimension::ByGenre: {
        const Genre* g = m.genre ? registry.genre(*m.genre) : nullptr;
        ++counts[{"", language, g ? g->name : "(none)"}];
        break;
      }
      case StatsDimension::ByYear: {
        ++counts[{"recorded", language, year_bucket(m.year_recorded)}];
        ++counts[{"published", language, year_bucket(m.year_published)}];
        ++counts[{"accession", language, year_bucket(static_cast<int>(doc.accession_date.year()))}];
        break;
      }
    }
  }
  for (const auto& [key, n] : counts) {
    table.rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
  }
  return table;
}

}  // namespace korpus

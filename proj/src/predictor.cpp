#include "korpus/predictor.hpp"

#include <algorithm>
#include <set>

#include "korpus/error.hpp"
#include "korpus/unicode.hpp"

namespace korpus {

Predictor Predictor::build(const Dictionary& dictionary, std::size_t max_suffix) {
  if (max_suffix == 0) throw Error(ErrorCode::InvalidValue, "suffix length cap must be at least 1");
  Predictor p;
  p.max_suffix_ = max_suffix;
  std::size_t forms = 0;
  for (const auto& [id, lemma] : dictionary.lemmas()) {
    const std::u32string lemma_key = unicode::to_u32(unicode::fold_key(lemma.surface));
    for (const Wordform& wf : lemma.wordforms) {
      ++forms;
      const std::u32string key = unicode::to_u32(unicode::fold_key(wf.surface));
      std::optional<std::pair<std::u32string, std::u32string>> rewrite;
      if (wf.origin == WordformOrigin::Generated && lemma.template_id) {
        const auto mismatch = std::mismatch(key.begin(), key.end(), lemma_key.begin(), lemma_key.end());
        const auto common = static_cast<std::size_t>(mismatch.first - key.begin());
        rewrite.emplace(key.substr(common), lemma_key.substr(common));
      }
      const Analysis analysis{lemma.pos, wf.gramset};
      for (std::size_t len = 1; len <= std::min(max_suffix, key.size()); ++len) {
        Support& s = p.index_[key.substr(key.size() - len)][analysis];
        ++s.count;
        if (rewrite) ++s.rewrites[*rewrite];
      }
    }
  }
  if (forms == 0) throw Error(ErrorCode::EmptyDictionary, "the dictionary has no wordforms to learn suffixes from");
  return p;
}

std::vector<PredictorSuggestion> Predictor::predict(std::string_view surface, std::size_t k) const {
  if (k < 1) throw Error(ErrorCode::InvalidQuery, "k must be at least 1");
  const std::u32string original = unicode::to_u32(unicode::nfc(surface));
  const std::u32string key = unicode::to_u32(unicode::fold_key(surface));
  // Report suffixes in the caller's spelling when folding kept the length.
  const std::u32string& shown = original.size() == key.size() ? original : key;

  std::vector<PredictorSuggestion> out;
  std::set<Analysis> seen;
  for (std::size_t len = std::min(max_suffix_, key.size()); len >= 1 && out.size() < k; --len) {
    auto it = index_.find(key.substr(key.size() - len));
    if (it == index_.end()) continue;
    std::vector<std::pair<const Analysis*, const Support*>> ranked;
    for (const auto& [analysis, support] : it->second) {
      if (!seen.count(analysis)) ranked.emplace_back(&analysis, &support);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second->count != b.second->count) return a.second->count > b.second->count;
      if (a.first->gramset != b.first->gramset) return a.first->gramset < b.first->gramset;
      return a.first->pos < b.first->pos;
    });
    for (const auto& [analysis, support] : ranked) {
      if (out.size() >= k) break;
      seen.insert(*analysis);
      PredictorSuggestion s;
      s.pos = analysis->pos;
      s.gramset = analysis->gramset;
      s.matched_suffix = unicode::to_utf8(shown.substr(shown.size() - len));
      s.support = support->count;
      // Most frequent rewrite whose form ending fits the query.
      const std::pair<std::u32string, std::u32string>* best = nullptr;
      std::size_t best_count = 0;
      for (const auto& [rw, n] : support->rewrites) {
        if (rw.first.size() > key.size() || key.compare(key.size() - rw.first.size(), rw.first.size(), rw.first) != 0) {
          continue;
        }
        if (n > best_count || (n == best_count && best && rw.first.size() > best->first.size())) {
          best = &rw;
          best_count = n;
        }
      }
      if (best) {
        s.hypothesized_lemma = unicode::to_utf8(key.substr(0, key.size() - best->first.size()) + best->second);
      }
      out.push_back(std::move(s));
    }
    if (len == 1) break;
  }
  return out;
}

std::vector<PredictorSuggestion> predict_unknown(std::string_view surface, const Dictionary& dictionary, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidQuery, "k must be at least 1");
  return Predictor::build(dictionary).predict(surface, k);
}

}  // namespace korpus

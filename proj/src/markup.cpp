#include "korpus/markup.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "korpus/error.hpp"

namespace korpus {

std::string_view to_string(CandidateSource source) {
  switch (source) {
    case CandidateSource::Dictionary: return "dictionary";
    case CandidateSource::Predictor: return "predictor";
    case CandidateSource::Manual: return "manual";
  }
  return "?";
}

CandidateSource candidate_source_from_string(std::string_view text) {
  if (text == "dictionary") return CandidateSource::Dictionary;
  if (text == "predictor") return CandidateSource::Predictor;
  if (text == "manual") return CandidateSource::Manual;
  throw Error(ErrorCode::InvalidValue, "unknown candidate source: " + std::string(text));
}

std::string_view to_string(MarkupState state) {
  switch (state) {
    case MarkupState::Untagged: return "untagged";
    case MarkupState::Auto: return "auto";
    case MarkupState::Verified: return "verified";
  }
  return "?";
}

MarkupState markup_state_from_string(std::string_view text) {
  if (text == "untagged") return MarkupState::Untagged;
  if (text == "auto") return MarkupState::Auto;
  if (text == "verified") return MarkupState::Verified;
  throw Error(ErrorCode::InvalidValue, "unknown markup state: " + std::string(text));
}

std::string_view to_string(Homonymy h) {
  switch (h) {
    case Homonymy::Unambiguous: return "unambiguous";
    case Homonymy::Semantic: return "semantic";
    case Homonymy::Morphological: return "morphological";
    case Homonymy::Both: return "both";
    case Homonymy::Unknown: return "unknown";
  }
  return "?";
}

Homonymy homonymy_from_string(std::string_view text) {
  for (Homonymy h : {Homonymy::Unambiguous, Homonymy::Semantic, Homonymy::Morphological, Homonymy::Both,
                     Homonymy::Unknown}) {
    if (to_string(h) == text) return h;
  }
  throw Error(ErrorCode::InvalidValue, "unknown homonymy class: " + std::string(text));
}

namespace {

std::uint32_t parse_u32(std::string_view s, std::string_view whole) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidValue, "malformed token reference: " + std::string(whole));
  }
  return v;
}

}  // namespace

std::string TokenRef::str() const {
  return std::to_string(text.value) + ":" + std::to_string(sentence) + ":" + std::to_string(position);
}

TokenRef TokenRef::parse(std::string_view s) {
  const auto a = s.find(':');
  const auto b = a == std::string_view::npos ? a : s.find(':', a + 1);
  if (b == std::string_view::npos) throw Error(ErrorCode::InvalidValue, "malformed token reference: " + std::string(s));
  return {TextId{parse_u32(s.substr(0, a), s)}, parse_u32(s.substr(a + 1, b - a - 1), s), parse_u32(s.substr(b + 1), s)};
}

bool TokenMarkup::well_formed() const {
  switch (state) {
    case MarkupState::Untagged: return candidates.empty() && !chosen;
    case MarkupState::Auto: return !candidates.empty() && !chosen;
    case MarkupState::Verified: return !candidates.empty() && chosen && *chosen < candidates.size();
  }
  return false;
}

const TextMarkup* MarkupStore::text(TextId id) const {
  auto it = texts_.find(id);
  return it == texts_.end() ? nullptr : &it->second;
}

void MarkupStore::set_text(TextId id, TextMarkup markup) { texts_[id] = std::move(markup); }

void MarkupStore::remove_text(TextId id) { texts_.erase(id); }

const TokenMarkup* MarkupStore::find(const TokenRef& ref) const {
  const TextMarkup* t = text(ref.text);
  if (!t) return nullptr;
  auto it = t->find(ref);
  return it == t->end() ? nullptr : &it->second;
}

const TokenMarkup& MarkupStore::require(const TokenRef& ref) const {
  if (const TokenMarkup* m = find(ref)) return *m;
  throw Error(ErrorCode::UnknownToken, "no word token at " + ref.str(), {{"token", ref.str()}});
}

TokenMarkup& MarkupStore::require(const TokenRef& ref) {
  return const_cast<TokenMarkup&>(std::as_const(*this).require(ref));
}

std::vector<MarkupCandidate> dictionary_candidates(const Dictionary& dictionary, std::string_view surface) {
  std::vector<MarkupCandidate> out;
  for (const AnalysisHit& hit : dictionary.analyze(surface)) {
    const Lemma& lemma = dictionary.require(hit.lemma);
    auto push = [&](int ordinal) {
      MarkupCandidate c{hit.lemma, ordinal, hit.gramset, CandidateSource::Dictionary, 0};
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    };
    if (lemma.meanings.empty()) {
      push(0);
    } else {
      for (const Meaning& m : lemma.meanings) push(m.ordinal);
    }
  }
  return out;
}

TagResult tag_text(const TextDoc& doc, const Dictionary& dictionary, const TextMarkup* previous) {
  TagResult result;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) {
      if (t.kind != TokenKind::Word) continue;
      const TokenRef ref{doc.id, s.index, t.position};
      if (previous) {
        auto it = previous->find(ref);
        if (it != previous->end() && it->second.state == MarkupState::Verified) {
          result.markup.emplace(ref, it->second);
          ++result.summary.verified;
          continue;
        }
      }
      TokenMarkup m;
      m.ref = ref;
      m.candidates = dictionary_candidates(dictionary, t.surface);
      if (m.candidates.empty()) {
        m.state = MarkupState::Untagged;
        ++result.summary.untagged;
      } else {
        m.state = MarkupState::Auto;
        ++result.summary.automatic;
      }
      result.markup.emplace(ref, std::move(m));
    }
  }
  return result;
}

Homonymy classify_homonymy(const TokenMarkup& markup) {
  if (markup.candidates.empty()) return Homonymy::Unknown;
  std::set<std::pair<LemmaId, Gramset>> analyses;
  std::map<LemmaId, std::set<int>> meanings;
  for (const MarkupCandidate& c : markup.candidates) {
    analyses.emplace(c.lemma, c.gramset);
    meanings[c.lemma].insert(c.meaning_ordinal);
  }
  const bool morphological = analyses.size() > 1;
  const bool semantic = std::any_of(meanings.begin(), meanings.end(), [](const auto& kv) { return kv.second.size() > 1; });
  if (morphological && semantic) return Homonymy::Both;
  if (morphological) return Homonymy::Morphological;
  if (semantic) return Homonymy::Semantic;
  return Homonymy::Unambiguous;
}

std::string AuditEntry::line() const {
  return format_timestamp(at) + '\t' + editor + '\t' + ref.str() + '\t' + old_value + '\t' + new_value;
}

AuditEntry AuditEntry::parse(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    f.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (f.size() != 5) throw Error(ErrorCode::ParseError, "audit line needs 5 fields: " + std::string(line));
  return {parse_timestamp(f[0]), std::string(f[1]), TokenRef::parse(f[2]), std::string(f[3]), std::string(f[4])};
}

std::string AuditLog::text() const {
  std::string out;
  for (const AuditEntry& e : entries_) {
    out += e.line();
    out += '\n';
  }
  return out;
}

AuditLog AuditLog::parse(std::string_view text) {
  AuditLog log;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    if (!line.empty()) log.append(AuditEntry::parse(line));
    pos = nl + 1;
  }
  return log;
}

namespace {

// "index:lemma:meaning" of the chosen candidate, "-" when nothing was chosen.
std::string choice_label(const TokenMarkup& m) {
  if (!m.chosen) return "-";
  const MarkupCandidate& c = m.candidates[*m.chosen];
  return std::to_string(*m.chosen) + ":" + std::to_string(c.lemma.value) + ":" + std::to_string(c.meaning_ordinal);
}

}  // namespace

const TokenMarkup& resolve(MarkupStore& store, const TokenRef& ref, std::size_t choice, const std::string& editor,
                           Timestamp at, AuditLog* log) {
  TokenMarkup& m = store.require(ref);
  if (m.state == MarkupState::Untagged) {
    throw Error(ErrorCode::TokenUntagged, "token " + ref.str() + " has no candidates to choose from", {{"token", ref.str()}});
  }
  if (choice >= m.candidates.size()) {
    throw Error(ErrorCode::InvalidChoice,
                "choice " + std::to_string(choice) + " out of range for " + std::to_string(m.candidates.size()) + " candidates",
                {{"token", ref.str()}, {"choice", choice}, {"candidates", m.candidates.size()}});
  }
  const std::string old = choice_label(m);
  m.state = MarkupState::Verified;
  m.chosen = choice;
  m.editor = editor;
  m.verified_at = at;
  if (log) log->append({at, editor, ref, old, choice_label(m)});
  return m;
}

const TokenMarkup& attach_manual(MarkupStore& store, const Dictionary& dictionary, const TokenRef& ref, LemmaId lemma_id,
                                 int meaning, Gramset gramset, const std::string& editor, Timestamp at, AuditLog* log,
                                 CandidateSource source) {
  TokenMarkup& m = store.require(ref);
  const Lemma& lemma = dictionary.require(lemma_id);
  const bool valid_meaning = lemma.meanings.empty() ? meaning == 0
                                                    : meaning >= 1 && meaning <= static_cast<int>(lemma.meanings.size());
  if (!valid_meaning) {
    throw Error(ErrorCode::InvalidMeaning,
                lemma.surface + " has no meaning " + std::to_string(meaning),
                {{"lemma", lemma_id.value}, {"meaning", meaning}, {"meanings", lemma.meanings.size()}});
  }
  const std::string old = choice_label(m);
  m.candidates.push_back({lemma_id, meaning, std::move(gramset), source, 0});
  m.state = MarkupState::Verified;
  m.chosen = m.candidates.size() - 1;
  m.editor = editor;
  m.verified_at = at;
  if (log) log->append({at, editor, ref, old, choice_label(m)});
  return m;
}

std::int64_t Coverage::tenths() const {
  if (total == 0) return 0;
  const auto num = static_cast<std::int64_t>(covered) * 1000;
  const auto den = static_cast<std::int64_t>(total);
  return (2 * num + den) / (2 * den);
}

std::string Coverage::str() const {
  const auto t = tenths();
  return std::to_string(t / 10) + "." + std::to_string(t % 10) + "%";
}

namespace {

template <class F>
void for_each_word(const Corpus& corpus, const Scope& scope, F&& f) {
  for (const auto& [id, doc] : corpus.texts()) {
    if (!scope.matches(doc)) continue;
    for (const Sentence& s : doc.sentences) {
      for (const Token& t : s.tokens) {
        if (t.kind == TokenKind::Word) f(TokenRef{doc.id, s.index, t.position});
      }
    }
  }
}

}  // namespace

Coverage markup_coverage(const Corpus& corpus, const MarkupStore& store, const Scope& scope) {
  Coverage c;
  for_each_word(corpus, scope, [&](const TokenRef& ref) {
    ++c.total;
    const TokenMarkup* m = store.find(ref);
    if (m && m->state != MarkupState::Untagged) ++c.covered;
  });
  if (c.total == 0) throw Error(ErrorCode::EmptyScope, "no word tokens in scope");
  return c;
}

std::vector<TokenRef> pending_queue(const Corpus& corpus, const MarkupStore& store, const Scope& scope,
                                    std::optional<Homonymy> filter) {
  std::vector<TokenRef> out;
  for_each_word(corpus, scope, [&](const TokenRef& ref) {
    const TokenMarkup* m = store.find(ref);
    const TokenMarkup untagged{ref, MarkupState::Untagged, {}, std::nullopt, std::nullopt, std::nullopt};
    const TokenMarkup& mk = m ? *m : untagged;
    const bool pending = mk.state == MarkupState::Untagged || (mk.state == MarkupState::Auto && mk.candidates.size() > 1);
    if (!pending) return;
    if (filter && classify_homonymy(mk) != *filter) return;
    out.push_back(ref);
  });
  return out;
}

std::vector<ConsistencyIssue> consistency_report(const MarkupStore& store, const Dictionary& dictionary) {
  std::vector<ConsistencyIssue> out;
  for (const auto& [text, markup] : store.texts()) {
    for (const auto& [ref, m] : markup) {
      for (std::size_t i = 0; i < m.candidates.size(); ++i) {
        const MarkupCandidate& c = m.candidates[i];
        const Lemma* lemma = dictionary.find(c.lemma);
        if (!lemma) {
          out.push_back({ref, i, "lemma " + std::to_string(c.lemma.value) + " no longer exists"});
        } else if (c.meaning_ordinal > static_cast<int>(lemma->meanings.size()) ||
                   (c.meaning_ordinal == 0 && !lemma->meanings.empty())) {
          out.push_back({ref, i, lemma->surface + " has no meaning " + std::to_string(c.meaning_ordinal)});
        }
      }
    }
  }
  return out;
}

}  // namespace korpus

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "korpus/dictionary.hpp"
#include "korpus/text.hpp"
#include "korpus/timeutil.hpp"

namespace korpus {

enum class CandidateSource { Dictionary, Predictor, Manual };

std::string_view to_string(CandidateSource source);
CandidateSource candidate_source_from_string(std::string_view text);

struct MarkupCandidate {
  LemmaId lemma;
  /// 0 only for lemmas that have no meanings at all.
  int meaning_ordinal = 1;
  Gramset gramset;
  CandidateSource source = CandidateSource::Dictionary;
  int rank = 0;
  friend bool operator==(const MarkupCandidate&, const MarkupCandidate&) = default;
};

/// Address of a token: text, sentence index, token position within the sentence.
struct TokenRef {
  TextId text;
  std::uint32_t sentence = 0;
  std::uint32_t position = 0;

  /// "text:sentence:position"
  std::string str() const;
  static TokenRef parse(std::string_view text);
  friend auto operator<=>(const TokenRef&, const TokenRef&) = default;
};

enum class MarkupState { Untagged, Auto, Verified };

std::string_view to_string(MarkupState state);
MarkupState markup_state_from_string(std::string_view text);

struct TokenMarkup {
  TokenRef ref;
  MarkupState state = MarkupState::Untagged;
  std::vector<MarkupCandidate> candidates;
  std::optional<std::size_t> chosen;
  std::optional<std::string> editor;
  std::optional<Timestamp> verified_at;

  /// Checks the state/candidates/chosen invariants.
  bool well_formed() const;
  friend bool operator==(const TokenMarkup&, const TokenMarkup&) = default;
};

/// Markup for the word tokens of one text, keyed by token address.
using TextMarkup = std::map<TokenRef, TokenMarkup>;

class MarkupStore {
 public:
  const TextMarkup* text(TextId id) const;
  void set_text(TextId id, TextMarkup markup);
  void remove_text(TextId id);

  const TokenMarkup* find(const TokenRef& ref) const;
  /// Throws UnknownToken if no word token lives at `ref`.
  TokenMarkup& require(const TokenRef& ref);
  const TokenMarkup& require(const TokenRef& ref) const;

  const std::map<TextId, TextMarkup>& texts() const noexcept { return texts_; }
  friend bool operator==(const MarkupStore&, const MarkupStore&) = default;

 private:
  std::map<TextId, TextMarkup> texts_;
};

struct TagSummary {
  std::size_t untagged = 0;
  std::size_t automatic = 0;
  std::size_t verified = 0;
  std::size_t total() const noexcept { return untagged + automatic + verified; }
  friend bool operator==(const TagSummary&, const TagSummary&) = default;
};

struct TagResult {
  TextMarkup markup;
  TagSummary summary;
};

/// Dictionary candidates for one surface: every analysis hit expanded over the
/// lemma's meanings, in analysis order, without duplicates.
std::vector<MarkupCandidate> dictionary_candidates(const Dictionary& dictionary, std::string_view surface);

/// Automatic markup of every word token. Verified entries of `previous` are kept
/// as they are; everything else is recomputed from the dictionary.
TagResult tag_text(const TextDoc& doc, const Dictionary& dictionary, const TextMarkup* previous = nullptr);

enum class Homonymy { Unambiguous, Semantic, Morphological, Both, Unknown };

std::string_view to_string(Homonymy h);
Homonymy homonymy_from_string(std::string_view text);

Homonymy classify_homonymy(const TokenMarkup& markup);

struct AuditEntry {
  Timestamp at;
  std::string editor;
  TokenRef ref;
  std::string old_value;
  std::string new_value;

  /// "timestamp TAB editor TAB text:sent:pos TAB old TAB new"
  std::string line() const;
  static AuditEntry parse(std::string_view line);
  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

/// Append-only record of editorial decisions.
class AuditLog {
 public:
  void append(AuditEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<AuditEntry>& entries() const noexcept { return entries_; }
  std::string text() const;
  static AuditLog parse(std::string_view text);
  friend bool operator==(const AuditLog&, const AuditLog&) = default;

 private:
  std::vector<AuditEntry> entries_;
};

/// Marks candidate `choice` as the verified reading. Re-resolving overwrites.
const TokenMarkup& resolve(MarkupStore& store, const TokenRef& ref, std::size_t choice, const std::string& editor,
                           Timestamp at, AuditLog* log = nullptr);

/// Appends an editor-supplied candidate and verifies the token with it.
const TokenMarkup& attach_manual(MarkupStore& store, const Dictionary& dictionary, const TokenRef& ref, LemmaId lemma,
                                 int meaning, Gramset gramset, const std::string& editor, Timestamp at,
                                 AuditLog* log = nullptr, CandidateSource source = CandidateSource::Manual);

struct Coverage {
  std::size_t covered = 0;
  std::size_t total = 0;
  /// Percentage in tenths, rounded half up: 730 means 73.0%.
  std::int64_t tenths() const;
  double percent() const { return static_cast<double>(tenths()) / 10.0; }
  std::string str() const;
};

/// Share of word tokens in scope with auto or verified markup. Throws EmptyScope.
Coverage markup_coverage(const Corpus& corpus, const MarkupStore& store, const Scope& scope = {});

/// Tokens still needing an editor: untagged, or auto with more than one
/// candidate. Ordered by address.
std::vector<TokenRef> pending_queue(const Corpus& corpus, const MarkupStore& store, const Scope& scope = {},
                                    std::optional<Homonymy> filter = std::nullopt);

struct ConsistencyIssue {
  TokenRef ref;
  std::size_t candidate = 0;
  std::string problem;
  friend bool operator==(const ConsistencyIssue&, const ConsistencyIssue&) = default;
};

/// Candidates that point at lemmas or meanings no longer in the dictionary.
std::vector<ConsistencyIssue> consistency_report(const MarkupStore& store, const Dictionary& dictionary);

}  // namespace korpus

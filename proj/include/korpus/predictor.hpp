#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "korpus/dictionary.hpp"

namespace korpus {

struct PredictorSuggestion {
  std::string pos;
  Gramset gramset;
  std::optional<std::string> hypothesized_lemma;
  std::string matched_suffix;
  std::size_t support = 0;
  friend bool operator==(const PredictorSuggestion&, const PredictorSuggestion&) = default;
};

/// Suffix-frequency guesser for words the dictionary does not know.
///
/// Every wordform suffix of length 1..max_suffix maps to the (part of speech,
/// gramset) pairs it ends and how often. A query takes its longest supported
/// suffix first and falls back to shorter ones to fill up k suggestions.
class Predictor {
 public:
  static constexpr std::size_t kDefaultMaxSuffix = 5;

  /// Throws EmptyDictionary when there is no wordform to learn from.
  static Predictor build(const Dictionary& dictionary, std::size_t max_suffix = kDefaultMaxSuffix);

  /// Up to k suggestions ordered by (suffix length desc, support desc, gramset,
  /// part of speech). Throws InvalidQuery when k < 1.
  std::vector<PredictorSuggestion> predict(std::string_view surface, std::size_t k) const;

  std::size_t max_suffix() const noexcept { return max_suffix_; }

 private:
  struct Analysis {
    std::string pos;
    Gramset gramset;
    friend auto operator<=>(const Analysis&, const Analysis&) = default;
  };
  struct Support {
    std::size_t count = 0;
    // (form ending, lemma ending) -> count, from generated forms only
    std::map<std::pair<std::u32string, std::u32string>, std::size_t> rewrites;
  };
  using Bucket = std::map<Analysis, Support>;

  std::size_t max_suffix_ = kDefaultMaxSuffix;
  std::unordered_map<std::u32string, Bucket> index_;
};

/// One-shot build + predict.
std::vector<PredictorSuggestion> predict_unknown(std::string_view surface, const Dictionary& dictionary, std::size_t k);

}  // namespace korpus

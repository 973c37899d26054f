#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "korpus/dictionary.hpp"
#include "korpus/markup.hpp"
#include "korpus/registry.hpp"
#include "korpus/text.hpp"
#include "korpus/timeutil.hpp"

namespace korpus {

/// Everything a corpus manager instance owns.
struct CorpusState {
  Registry registry;
  Corpus corpus;
  Dictionary dictionary;
  MarkupStore markup;
  AuditLog audit;
  /// Paradigm rules and UniMorph feature map as stored; defaults apply when unset.
  std::optional<nlohmann::json> templates;
  std::optional<nlohmann::json> feature_map;

  /// Fresh state on the shipped default registry.
  static CorpusState with_defaults();
  friend bool operator==(const CorpusState&, const CorpusState&) = default;
};

struct BundleManifest {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  Timestamp created;
  std::size_t texts = 0;
  std::size_t lemmas = 0;
  std::size_t wordforms = 0;
  /// Hex SHA-256 of registry.json as written.
  std::string registry_checksum;

  nlohmann::json to_json() const;
  static BundleManifest from_json(const nlohmann::json& j);
  friend bool operator==(const BundleManifest&, const BundleManifest&) = default;
};

std::string sha256_hex(std::string_view bytes);
std::string base64_encode(std::string_view bytes);
/// Throws InvalidValue on malformed input.
std::string base64_decode(std::string_view text);

/// Directory layout:
///   manifest.json, registry.json, dictionary.jsonl (one lemma per line),
///   texts/<id>.json (document plus its markup), audit.log,
///   templates.json and unimorph_features.json when set.
BundleManifest save_bundle(const CorpusState& state, const std::filesystem::path& directory);

/// Throws IoError, FormatVersionUnsupported, ChecksumMismatch (also for manifest
/// counts that disagree with the contents), ParseError.
CorpusState load_bundle(const std::filesystem::path& directory);

bool bundle_exists(const std::filesystem::path& directory);

}  // namespace korpus

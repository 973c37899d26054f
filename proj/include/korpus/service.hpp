#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "korpus/bundle.hpp"
#include "korpus/error.hpp"
#include "korpus/search.hpp"

namespace korpus {

struct ApiRequest {
  std::string method = "GET";
  /// Path without query string, e.g. "/v1/texts/3".
  std::string path;
  std::map<std::string, std::string> query;
  nlohmann::json body = nlohmann::json::object();
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
  /// Set for non-JSON payloads (UniMorph TSV); `body` is then unused.
  std::optional<std::string> text;
  std::string content_type = "application/json";

  /// The bytes sent over the wire and printed by the CLI.
  std::string payload() const;
};

int http_status(ErrorCode code);
/// {"error": {"code", "message", "detail"?}}
nlohmann::json api_error(const Error& e);

/// Searchable copy of the state plus its indexes. Immutable once published.
struct Snapshot {
  CorpusState state;
  CorpusIndex index;

  SearchContext context() const { return {state.registry, state.corpus, state.dictionary, state.markup, index}; }
};

/// The corpus manager behind the /v1 API and the CLI.
///
/// Reads hold a shared lock, mutations an exclusive one. Search endpoints
/// (texts, lemmas, lexgram, frequency, reverse, stats) answer from the last
/// published snapshot, which POST /v1/reindex replaces; in-flight queries keep
/// the snapshot they started with.
class Service {
 public:
  struct Options {
    /// When set, every successful mutation is written back to this bundle.
    std::optional<std::filesystem::path> bundle;
    std::string default_editor = "editor";
  };

  explicit Service(CorpusState state);
  Service(CorpusState state, Options options);

  /// Never throws: every failure becomes an ApiError payload.
  ApiResponse handle(const ApiRequest& request);

  /// Rebuilds and publishes the search snapshot.
  void reindex();
  std::shared_ptr<const Snapshot> snapshot() const;

  /// Copy of the live state under a shared lock.
  CorpusState state() const;
  void save(const std::filesystem::path& directory) const;

  /// Blocks serving HTTP until stop() is called. Throws IoError when the socket
  /// cannot be bound.
  void serve(const std::string& host, int port);
  /// Binds to a free port and returns it; pair with serve_bound().
  int bind_any_port(const std::string& host);
  void serve_bound();
  void stop();
  bool running() const;

  ~Service();

 private:
  struct Impl;

  ApiResponse dispatch(const ApiRequest& request);

  Options options_;
  mutable std::shared_mutex state_mutex_;
  CorpusState state_;
  std::uint32_t next_text_id_ = 1;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::unique_ptr<Impl> impl_;
};

/// "a=1&b=x%20y" -> {a: 1, b: "x y"}
std::map<std::string, std::string> parse_query_string(std::string_view query);
std::string encode_query_string(const std::map<std::string, std::string>& query);

}  // namespace korpus

#include "korpus/bundle.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "korpus/codec.hpp"
#include "korpus/error.hpp"

namespace korpus {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string(), {{"path", path.string()}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so a crash never leaves a half-written file behind.
void write_file(const fs::path& path, std::string_view bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string(), {{"path", path.string()}});
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string(), {{"path", path.string()}});
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

json parse_json(const fs::path& path, std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what(), {{"path", path.string()}});
  }
}

}  // namespace

CorpusState CorpusState::with_defaults() {
  CorpusState s;
  s.registry = Registry::load_default();
  return s;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Internal, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(ErrorCode::InvalidValue, "base64 length must be a multiple of 4");
  std::string out(3 * (text.size() / 4) + 1, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw Error(ErrorCode::InvalidValue, "malformed base64 payload");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

json BundleManifest::to_json() const {
  return {{"format_version", format_version},
          {"created", format_timestamp(created)},
          {"counts", {{"texts", texts}, {"lemmas", lemmas}, {"wordforms", wordforms}}},
          {"registry_checksum", registry_checksum}};
}

BundleManifest BundleManifest::from_json(const json& j) {
  try {
    BundleManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kFormatVersion) return m;
    m.created = parse_timestamp(j.at("created").get<std::string>());
    const json& c = j.at("counts");
    m.texts = c.at("texts").get<std::size_t>();
    m.lemmas = c.at("lemmas").get<std::size_t>();
    m.wordforms = c.at("wordforms").get<std::size_t>();
    m.registry_checksum = j.at("registry_checksum").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

bool bundle_exists(const fs::path& directory) { return fs::exists(directory / "manifest.json"); }

BundleManifest save_bundle(const CorpusState& state, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory / "texts", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());

  const std::string registry_text = state.registry.to_json().dump(2) + "\n";
  write_file(directory / "registry.json", registry_text);

  std::string jsonl;
  for (const auto& [id, lemma] : state.dictionary.lemmas()) {
    jsonl += codec::lemma_to_json(state.registry, lemma).dump();
    jsonl += '\n';
  }
  write_file(directory / "dictionary.jsonl", jsonl);

  std::set<std::string> keep;
  for (const auto& [id, doc] : state.corpus.texts()) {
    json j = codec::text_to_json(state.registry, doc);
    json markup = json::array();
    if (const TextMarkup* m = state.markup.text(id)) {
      for (const auto& [ref, tm] : *m) markup.push_back(codec::markup_to_json(state.registry, tm));
    }
    j["markup"] = std::move(markup);
    const std::string name = std::to_string(id.value) + ".json";
    keep.insert(name);
    write_file(directory / "texts" / name, j.dump(1) + "\n");
  }
  for (const auto& entry : fs::directory_iterator(directory / "texts")) {
    if (!keep.count(entry.path().filename().string())) fs::remove(entry.path(), ec);
  }

  write_file(directory / "audit.log", state.audit.text());
  auto optional_doc = [&](const char* name, const std::optional<json>& doc) {
    if (doc) {
      write_file(directory / name, doc->dump(2) + "\n");
    } else {
      fs::remove(directory / name, ec);
    }
  };
  optional_doc("templates.json", state.templates);
  optional_doc("unimorph_features.json", state.feature_map);

  BundleManifest manifest;
  manifest.created = now_seconds();
  manifest.texts = state.corpus.size();
  manifest.lemmas = state.dictionary.size();
  manifest.wordforms = state.dictionary.wordform_count();
  manifest.registry_checksum = sha256_hex(registry_text);
  write_file(directory / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

CorpusState load_bundle(const fs::path& directory) {
  if (!fs::is_directory(directory)) {
    throw Error(ErrorCode::IoError, "bundle directory not found: " + directory.string(), {{"path", directory.string()}});
  }
  const fs::path manifest_path = directory / "manifest.json";
  const BundleManifest manifest = BundleManifest::from_json(parse_json(manifest_path, read_file(manifest_path)));
  if (manifest.format_version != BundleManifest::kFormatVersion) {
    throw Error(ErrorCode::FormatVersionUnsupported,
                "bundle format version " + std::to_string(manifest.format_version) + " is not supported",
                {{"format_version", manifest.format_version}, {"supported", BundleManifest::kFormatVersion}});
  }

  const fs::path registry_path = directory / "registry.json";
  const std::string registry_text = read_file(registry_path);
  const std::string checksum = sha256_hex(registry_text);
  if (checksum != manifest.registry_checksum) {
    throw Error(ErrorCode::ChecksumMismatch, "registry.json does not match the manifest checksum",
                {{"expected", manifest.registry_checksum}, {"actual", checksum}});
  }

  CorpusState state;
  state.registry = Registry::from_json(parse_json(registry_path, registry_text));

  const fs::path dict_path = directory / "dictionary.jsonl";
  const std::string dict_text = read_file(dict_path);
  std::istringstream lines(dict_text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "dictionary.jsonl line " + std::to_string(line_no) + ": " + e.what(),
                  {{"line", line_no}});
    }
    state.dictionary.restore_lemma(codec::lemma_from_json(state.registry, j));
  }

  const fs::path texts_dir = directory / "texts";
  if (fs::is_directory(texts_dir)) {
    for (const auto& entry : fs::directory_iterator(texts_dir)) {
      if (entry.path().extension() != ".json") continue;
      const json j = parse_json(entry.path(), read_file(entry.path()));
      TextDoc doc = codec::text_from_json(state.registry, j);
      TextMarkup markup;
      if (j.contains("markup")) {
        for (const json& jm : j.at("markup")) {
          TokenMarkup tm = codec::markup_from_json(state.registry, jm);
          markup.emplace(tm.ref, std::move(tm));
        }
      }
      if (!markup.empty()) state.markup.set_text(doc.id, std::move(markup));
      state.corpus.add(std::move(doc));
    }
  }

  const fs::path audit_path = directory / "audit.log";
  if (fs::exists(audit_path)) state.audit = AuditLog::parse(read_file(audit_path));
  for (const char* name : {"templates.json", "unimorph_features.json"}) {
    const fs::path p = directory / name;
    if (!fs::exists(p)) continue;
    json doc = parse_json(p, read_file(p));
    (std::string_view(name) == "templates.json" ? state.templates : state.feature_map) = std::move(doc);
  }

  const bool counts_ok = manifest.texts == state.corpus.size() && manifest.lemmas == state.dictionary.size() &&
                         manifest.wordforms == state.dictionary.wordform_count();
  if (!counts_ok) {
    throw Error(ErrorCode::ChecksumMismatch, "manifest counts do not match bundle contents",
                {{"manifest", {{"texts", manifest.texts}, {"lemmas", manifest.lemmas}, {"wordforms", manifest.wordforms}}},
                 {"actual",
                  {{"texts", state.corpus.size()},
                   {"lemmas", state.dictionary.size()},
                   {"wordforms", state.dictionary.wordform_count()}}}});
  }
  return state;
}

}  // namespace korpus

#pragma once

#include <json.hpp>

#include "korpus/dictionary.hpp"
#include "korpus/markup.hpp"
#include "korpus/registry.hpp"
#include "korpus/text.hpp"

// JSON forms of the domain records, shared by the bundle files and the HTTP API.
// Gramsets are written as grammeme reference names, languages as codes; other
// taxonomy references are numeric ids. Unknown keys of texts and lemmas go to
// `extra` and are written back unchanged.
namespace korpus::codec {

nlohmann::json gramset_to_json(const Registry& registry, const Gramset& gramset);
Gramset gramset_from_json(const Registry& registry, const nlohmann::json& j);

nlohmann::json lemma_to_json(const Registry& registry, const Lemma& lemma);
Lemma lemma_from_json(const Registry& registry, const nlohmann::json& j);

nlohmann::json text_to_json(const Registry& registry, const TextDoc& doc);
TextDoc text_from_json(const Registry& registry, const nlohmann::json& j);

nlohmann::json markup_to_json(const Registry& registry, const TokenMarkup& markup);
TokenMarkup markup_from_json(const Registry& registry, const nlohmann::json& j);

}  // namespace korpus::codec

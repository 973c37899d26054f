#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

#include <json.hpp>

namespace korpus {

/// Opaque numeric identifier, tagged so ids of different entities don't mix.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

template <class Tag>
void to_json(nlohmann::json& j, const Id<Tag>& id) {
  j = id.value;
}

template <class Tag>
void from_json(const nlohmann::json& j, Id<Tag>& id) {
  id.value = j.get<std::uint32_t>();
}

using LanguageId = Id<struct LanguageTagTag>;
using DialectId = Id<struct DialectTag>;
using CorpusTypeId = Id<struct CorpusTypeTag>;
using GenreId = Id<struct GenreTag>;
using GrammemeId = Id<struct GrammemeTag>;
using LemmaId = Id<struct LemmaTag>;
using TextId = Id<struct TextTag>;

}  // namespace korpus

template <class Tag>
struct std::hash<korpus::Id<Tag>> {
  std::size_t operator()(const korpus::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

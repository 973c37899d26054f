#pragma once

#include <string>
#include <string_view>

namespace korpus::unicode {

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

/// Canonical composition (NFC).
std::string nfc(std::string_view utf8);

/// Full Unicode lowercase mapping, locale-independent.
std::string lower(std::string_view utf8);

/// Lookup key for a surface: NFC, lowercase, apostrophe variants folded to U+2019.
std::string fold_key(std::string_view surface);

bool is_letter(char32_t c);
bool is_mark(char32_t c);
bool is_digit(char32_t c);
bool is_space(char32_t c);
bool is_apostrophe(char32_t c);
bool is_hyphen(char32_t c);

/// Number of code points in a UTF-8 string.
std::size_t length(std::string_view utf8);

/// Case-insensitive substring test (both sides folded with fold_key).
bool contains_folded(std::string_view haystack, std::string_view needle);

}  // namespace korpus::unicode

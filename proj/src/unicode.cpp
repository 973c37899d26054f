#include "korpus/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "korpus/error.hpp"

namespace korpus::unicode {

std::u32string to_u32(std::string_view utf8) {
  auto us = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  out.reserve(static_cast<std::size_t>(us.length()));
  for (int32_t i = 0; i < us.length();) {
    UChar32 c = us.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::string to_utf8(std::u32string_view text) {
  icu::UnicodeString us;
  for (char32_t c : text) us.append(static_cast<UChar32>(c));
  std::string out;
  us.toUTF8String(out);
  return out;
}

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::Internal, "NFC normalizer unavailable");
  auto us = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString result = norm->normalize(us, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::Internal, "NFC normalization failed");
  std::string out;
  result.toUTF8String(out);
  return out;
}

std::string lower(std::string_view utf8) {
  auto us = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  us.toLower(icu::Locale::getRoot());
  std::string out;
  us.toUTF8String(out);
  return out;
}

std::string fold_key(std::string_view surface) {
  std::u32string text = to_u32(lower(nfc(surface)));
  for (char32_t& c : text) {
    if (c == U'\'') c = U'’';
  }
  return to_utf8(text);
}

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)) != 0; }

bool is_mark(char32_t c) { return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0; }

bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)) != 0; }

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

bool is_hyphen(char32_t c) { return c == U'-' || c == U'‐'; }

std::size_t length(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool contains_folded(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  return fold_key(haystack).find(fold_key(needle)) != std::string::npos;
}

}  // namespace korpus::unicode

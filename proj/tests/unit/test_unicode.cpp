#include <gtest/gtest.h>

#include "korpus/timeutil.hpp"
#include "korpus/unicode.hpp"

namespace u = korpus::unicode;

TEST(Unicode, NfcComposesCombiningCaron) {
  EXPECT_EQ(u::nfc("ho\x73\xcc\x8ctab"), "hoštab");
  EXPECT_EQ(u::nfc("hoštab"), "hoštab");
}

TEST(Unicode, LowerHandlesCyrillicAndDiacritics) {
  EXPECT_EQ(u::lower("ČIL'MIEL'E"), "čil'miel'e");
  EXPECT_EQ(u::lower("ИЗ БЕРЕСТЫ"), "из бересты");
  EXPECT_EQ(u::lower("ÄIJÄN"), "äijän");
}

TEST(Unicode, FoldKeyUnifiesApostrophes) {
  EXPECT_EQ(u::fold_key("Čil'miel'e"), u::fold_key("čil’miel’e"));
  EXPECT_EQ(u::fold_key("Čil'miel'e"), "čil’miel’e");
  EXPECT_NE(u::fold_key("hoštab"), u::fold_key("hostab"));
}

TEST(Unicode, CodePointHelpers) {
  EXPECT_EQ(u::length("hoštta"), 6u);
  EXPECT_EQ(u::to_utf8(u::to_u32("äö’")), "äö’");
  EXPECT_TRUE(u::is_letter(U'š'));
  EXPECT_TRUE(u::is_letter(U'Ж'));
  EXPECT_FALSE(u::is_letter(U'7'));
  EXPECT_TRUE(u::is_digit(U'7'));
  EXPECT_TRUE(u::is_apostrophe(U'\''));
  EXPECT_TRUE(u::is_apostrophe(U'’'));
  EXPECT_TRUE(u::is_hyphen(U'-'));
  EXPECT_TRUE(u::is_space(U'\n'));
  EXPECT_TRUE(u::is_mark(U'̌'));
}

TEST(Unicode, ContainsFoldedIgnoresCase) {
  EXPECT_TRUE(u::contains_folded("Mittumii pruzniekkoi", "PRUZ"));
  EXPECT_TRUE(u::contains_folded("«Из бересты плетут...»", "бересты"));
  EXPECT_FALSE(u::contains_folded("hoštab", "hostab"));
}

TEST(TimeUtil, RoundTrips) {
  const auto t = korpus::parse_timestamp("2021-10-01T12:34:56Z");
  EXPECT_EQ(korpus::format_timestamp(t), "2021-10-01T12:34:56Z");
  const auto d = korpus::parse_date("1949-06-30");
  EXPECT_EQ(korpus::format_date(d), "1949-06-30");
}

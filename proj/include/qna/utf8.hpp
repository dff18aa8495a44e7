#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qna::utf8 {

// Decodes the code point starting at byte offset i and advances i past it.
// Malformed bytes decode as U+FFFD and advance by one byte, so scanning is
// total on arbitrary input.
char32_t decode(std::string_view s, std::size_t& i);

void encode(char32_t cp, std::string& out);

std::size_t length(std::string_view s);  // code point count

// Approximate Unicode classes sufficient for social-media text in Latin,
// Cyrillic, Greek and CJK scripts. Not a full UCD table.
bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_cjk(char32_t cp);     // Han, kana, Hangul
bool is_letter(char32_t cp);  // includes is_cjk
bool is_word_char(char32_t cp);  // letter, digit or '_'

// True when every token consists of CJK code points only; such spans are
// joined without separators.
bool all_cjk(std::string_view s);

}  // namespace qna::utf8

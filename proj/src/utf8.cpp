#include "qna/utf8.hpp"

namespace qna::utf8 {

char32_t decode(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t length(std::string_view s) {
  std::size_t i = 0, n = 0;
  while (i < s.size()) {
    decode(s, i);
    ++n;
  }
  return n;
}

bool is_space(char32_t cp) {
  return cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0xA0 || cp == 0x3000;
}

bool is_digit(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 0xFF10 && cp <= 0xFF19);
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF)    // CJK unified
         || (cp >= 0x3400 && cp <= 0x4DBF) // extension A
         || (cp >= 0xF900 && cp <= 0xFAFF) // compatibility ideographs
         || (cp >= 0x3040 && cp <= 0x309F) // hiragana
         || (cp >= 0x30A0 && cp <= 0x30FF) // katakana
         || (cp >= 0xAC00 && cp <= 0xD7AF) // hangul syllables
         || (cp >= 0x1100 && cp <= 0x11FF);
}

bool is_letter(char32_t cp) {
  if (is_cjk(cp)) return true;
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1
  if (cp >= 0x100 && cp <= 0x24F) return true;   // Latin extended
  if (cp >= 0x370 && cp <= 0x3FF) return true;   // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;   // Cyrillic
  if (cp >= 0xFF21 && cp <= 0xFF3A) return true; // fullwidth A-Z
  if (cp >= 0xFF41 && cp <= 0xFF5A) return true; // fullwidth a-z
  return false;
}

bool is_word_char(char32_t cp) { return cp == '_' || is_letter(cp) || is_digit(cp); }

bool all_cjk(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_cjk(decode(s, i))) return false;
  }
  return true;
}

}  // namespace qna::utf8

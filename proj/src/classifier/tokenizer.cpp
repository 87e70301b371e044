#include "inspectkit/classifier/tokenizer.hpp"

#include <vector>

#include "inspectkit/core/comment.hpp"
#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

enum class Kind { kSeparator, kWord, kCjk };

// Returns the folded codepoint and its class.
std::pair<char32_t, Kind> classify(char32_t cp) {
  if (cp < 0x80) {
    if (cp >= 'A' && cp <= 'Z') return {cp + 0x20, Kind::kWord};
    if ((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9')) return {cp, Kind::kWord};
    return {cp, Kind::kSeparator};
  }
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) {
    if (cp <= 0xDE) return {cp + 0x20, Kind::kWord};
    return {cp, Kind::kWord};
  }
  if (cp >= 0x100 && cp <= 0x24F) return {cp, Kind::kWord};
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return {cp + 0x20, Kind::kWord};
  if (cp >= 0x3AA && cp <= 0x3FF) return {cp, Kind::kWord};
  if (cp >= 0x410 && cp <= 0x42F) return {cp + 0x20, Kind::kWord};
  if (cp >= 0x400 && cp <= 0x4FF) return {cp, Kind::kWord};
  if (cp >= 0xFF10 && cp <= 0xFF19) return {cp - 0xFF10 + '0', Kind::kWord};
  if (cp >= 0xFF21 && cp <= 0xFF3A) return {cp - 0xFF21 + 'a', Kind::kWord};
  if (cp >= 0xFF41 && cp <= 0xFF5A) return {cp - 0xFF41 + 'a', Kind::kWord};
  if (is_cjk(cp)) return {cp, Kind::kCjk};
  return {cp, Kind::kSeparator};
}

}  // namespace

bool is_cjk(char32_t cp) {
  return (cp >= 0x3041 && cp <= 0x309F) ||  // hiragana
         (cp >= 0x30A0 && cp <= 0x30FF) ||  // katakana
         (cp >= 0x3400 && cp <= 0x4DBF) ||  // CJK extension A
         (cp >= 0x4E00 && cp <= 0x9FFF) ||  // CJK unified ideographs
         (cp >= 0xF900 && cp <= 0xFAFF) ||  // compatibility ideographs
         (cp >= 0xFF66 && cp <= 0xFF9F) ||  // halfwidth katakana
         (cp >= 0xAC00 && cp <= 0xD7AF);    // hangul syllables
}

char32_t next_codepoint(std::string_view text, std::size_t& pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + extra >= text.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i <= extra; ++i) {
    unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

TokenVector tokenize(std::string_view text) {
  if (!has_visible_text(text)) throw InvalidArgument("empty text");

  TokenVector tokens;
  std::string word;
  std::vector<char32_t> cjk;

  auto flush_word = [&] {
    if (!word.empty()) ++tokens[word];
    word.clear();
  };
  auto flush_cjk = [&] {
    if (cjk.size() == 1) {
      std::string t;
      append_utf8(t, cjk[0]);
      ++tokens[t];
    }
    for (std::size_t i = 0; i + 1 < cjk.size(); ++i) {
      std::string t;
      append_utf8(t, cjk[i]);
      append_utf8(t, cjk[i + 1]);
      ++tokens[t];
    }
    cjk.clear();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto [cp, kind] = classify(next_codepoint(text, pos));
    switch (kind) {
      case Kind::kWord:
        flush_cjk();
        append_utf8(word, cp);
        break;
      case Kind::kCjk:
        flush_word();
        cjk.push_back(cp);
        break;
      case Kind::kSeparator:
        flush_word();
        flush_cjk();
        break;
    }
  }
  flush_word();
  flush_cjk();
  return tokens;
}

}  // namespace inspectkit

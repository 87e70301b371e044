#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace inspectkit {

/// Token → occurrence count. Ordered so iteration is deterministic.
using TokenVector = std::map<std::string, std::uint32_t, std::less<>>;

/// Lowercased word tokens (maximal letter/digit runs) plus character bigrams
/// for runs of CJK characters. A CJK run of length one yields the single
/// character. Fullwidth ASCII letters and digits fold to ASCII.
///
/// Throws InvalidArgument("empty text") when `text` has no visible content.
TokenVector tokenize(std::string_view text);

/// Decodes one UTF-8 sequence at `pos`, advancing it. Invalid bytes decode
/// to U+FFFD and consume one byte.
char32_t next_codepoint(std::string_view text, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

bool is_cjk(char32_t cp);

}  // namespace inspectkit

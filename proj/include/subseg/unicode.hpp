#pragma once

#include <string>
#include <string_view>

#include "subseg/error.hpp"

namespace subseg {

// Word-boundary sentinels used in accessor sets. Both sit just past the
// Unicode scalar range, so neither can ever appear in decoded text.
inline constexpr char32_t kBeginOfWord = 0x110000;
inline constexpr char32_t kEndOfWord = 0x110001;

// True for the code points with the Unicode White_Space property.
bool is_whitespace(char32_t cp) noexcept;

// Strict UTF-8 decoding. Rejects overlong forms, surrogates, values past
// U+10FFFF, and truncated sequences with a DecodeError carrying the byte
// offset of the start of the bad sequence.
std::u32string decode_utf8(std::string_view bytes);

// Decodes one scalar starting at `offset`, advancing it past the sequence.
char32_t decode_one_utf8(std::string_view bytes, std::size_t& offset);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t cp);

}  // namespace subseg

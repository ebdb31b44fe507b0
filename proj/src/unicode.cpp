#include "subseg/unicode.hpp"

#include <cstdint>

namespace subseg {

bool is_whitespace(char32_t cp) noexcept {
  switch (cp) {
    case 0x0009:
    case 0x000A:
    case 0x000B:
    case 0x000C:
    case 0x000D:
    case 0x0020:
    case 0x0085:
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace {

[[noreturn]] void bad_sequence(std::size_t offset) {
  throw DecodeError("invalid UTF-8 sequence at byte offset " + std::to_string(offset), offset);
}

[[noreturn]] void truncated_sequence(std::size_t offset) {
  throw DecodeError("truncated UTF-8 sequence at byte offset " + std::to_string(offset), offset);
}

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

char32_t decode_one_utf8(std::string_view bytes, std::size_t& offset) {
  const std::size_t start = offset;
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  const unsigned char b0 = p[offset];

  if (b0 < 0x80) {
    offset += 1;
    return b0;
  }

  std::size_t len;
  char32_t cp;
  unsigned char lo = 0x80, hi = 0xBF;  // valid range for the first continuation byte
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
    cp = b0 & 0x1F;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    cp = b0 & 0x0F;
    if (b0 == 0xE0) lo = 0xA0;        // excludes overlong encodings
    if (b0 == 0xED) hi = 0x9F;        // excludes surrogates
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    cp = b0 & 0x07;
    if (b0 == 0xF0) lo = 0x90;        // excludes overlong encodings
    if (b0 == 0xF4) hi = 0x8F;        // excludes values past U+10FFFF
  } else {
    bad_sequence(start);
  }

  if (start + len > n) truncated_sequence(start);
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = p[start + i];
    if (i == 1 ? (b < lo || b > hi) : !is_continuation(b)) bad_sequence(start);
    cp = (cp << 6) | (b & 0x3F);
  }
  offset = start + len;
  return cp;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t offset = 0;
  while (offset < bytes.size()) out.push_back(decode_one_utf8(bytes, offset));
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  const std::uint32_t v = cp;
  if (v < 0x80) {
    out.push_back(static_cast<char>(v));
  } else if (v < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (v >> 6)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
  } else if (v < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (v >> 12)));
    out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (v >> 18)));
    out.push_back(static_cast<char>(0x80 | ((v >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

}  // namespace subseg

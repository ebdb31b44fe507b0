#include <doctest.h>

#include "subseg/unicode.hpp"

using namespace subseg;

TEST_CASE("ascii round trip") {
  const std::string text = "hello world";
  const std::u32string decoded = decode_utf8(text);
  CHECK(decoded.size() == 11);
  CHECK(encode_utf8(decoded) == text);
}

TEST_CASE("multi-byte round trip") {
  // 2-, 3-, and 4-byte sequences.
  const std::string text = "\xC3\xA9\xE4\xB8\xAD\xF0\x9F\x98\x80";
  const std::u32string decoded = decode_utf8(text);
  REQUIRE(decoded.size() == 3);
  CHECK(decoded[0] == 0xE9);
  CHECK(decoded[1] == 0x4E2D);
  CHECK(decoded[2] == 0x1F600);
  CHECK(encode_utf8(decoded) == text);
}

TEST_CASE("boundary scalars") {
  CHECK(decode_utf8("\x7F") == U"\x7F");
  CHECK(decode_utf8("\xC2\x80")[0] == 0x80);
  CHECK(decode_utf8("\xEF\xBF\xBF")[0] == 0xFFFF);
  CHECK(decode_utf8("\xF4\x8F\xBF\xBF")[0] == 0x10FFFF);
  CHECK(encode_utf8(char32_t{0x10FFFF}) == "\xF4\x8F\xBF\xBF");
}

TEST_CASE("rejects malformed sequences with byte offsets") {
  const auto offset_of = [](std::string_view bytes) {
    try {
      decode_utf8(bytes);
    } catch (const DecodeError& e) {
      return static_cast<long>(e.byte_offset());
    }
    return -1L;
  };
  CHECK(offset_of("\xC0\xAF") == 0);              // overlong 2-byte
  CHECK(offset_of("\xE0\x80\x80") == 0);          // overlong 3-byte
  CHECK(offset_of("\xF0\x80\x80\x80") == 0);      // overlong 4-byte
  CHECK(offset_of("ab\x80") == 2);                // bare continuation
  CHECK(offset_of("\xED\xA0\x80") == 0);          // surrogate
  CHECK(offset_of("\xF4\x90\x80\x80") == 0);      // past U+10FFFF
  CHECK(offset_of("\xF5\x80\x80\x80") == 0);
  CHECK(offset_of("ab\xE2\x82") == 2);            // truncated
  CHECK(offset_of("\xC3") == 0);
  CHECK(offset_of("a\xC3(") == 1);                // bad continuation byte
}

TEST_CASE("whitespace classification") {
  for (char32_t cp : {U'\t', U'\n', U'\v', U'\f', U'\r', U' ', char32_t{0x85},
                      char32_t{0xA0}, char32_t{0x1680}, char32_t{0x2000}, char32_t{0x200A},
                      char32_t{0x2028}, char32_t{0x2029}, char32_t{0x202F}, char32_t{0x205F},
                      char32_t{0x3000}})
    CHECK(is_whitespace(cp));
  for (char32_t cp : {U'a', U'0', char32_t{0x200B}, char32_t{0x4E2D}, char32_t{0x1F600},
                      char32_t{0x180E}})
    CHECK_FALSE(is_whitespace(cp));
}

TEST_CASE("sentinels sit outside the scalar range") {
  CHECK(kBeginOfWord > 0x10FFFF);
  CHECK(kEndOfWord > 0x10FFFF);
  CHECK(kBeginOfWord != kEndOfWord);
}

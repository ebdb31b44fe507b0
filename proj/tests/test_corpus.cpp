#include <doctest.h>

#include <random>
#include <sstream>

#include "subseg/corpus.hpp"
#include "subseg/error.hpp"

using namespace subseg;

TEST_CASE("ingest splits on whitespace and counts") {
  const Corpus c = ingest("a a b", 2);
  CHECK(c.word_counts.size() == 2);
  CHECK(c.word_counts.at("a") == 2);
  CHECK(c.word_counts.at("b") == 1);
  CHECK(c.total_words == 3);
  CHECK(c.total_chars == 3);
  CHECK(c.char_counts.at(U'a') == 2);
  CHECK(c.char_counts.at(U'b') == 1);
  CHECK(c.max_ngram == 2);
}

TEST_CASE("ingest handles empty and all-whitespace input") {
  CHECK(ingest("", 8).empty());
  CHECK(ingest(" \t\r\n  \n", 8).empty());
  CHECK(ingest("", 8).total_chars == 0);
}

TEST_CASE("ingest treats every separator alike") {
  // space, tab, CRLF, NEL, ideographic space
  const Corpus c = ingest("a\tb\r\nc\xC2\x85ицу\xE3\x80\x80好", 3);
  CHECK(c.word_counts.size() == 5);
  CHECK(c.word_counts.count("ицу") == 1);
  CHECK(c.word_counts.count("好") == 1);
  CHECK(c.total_words == 5);
  CHECK(c.total_chars == 7);  // a, b, c, three cyrillic letters, one han character
  CHECK(c.char_counts.at(0x597D) == 1);
  CHECK(c.char_counts.count(U' ') == 0);
}

TEST_CASE("single repeated word") {
  const Corpus c = ingest("ababab", 2);
  CHECK(c.word_counts.size() == 1);
  CHECK(c.word_counts.at("ababab") == 1);
  CHECK(c.total_chars == 6);
  CHECK(c.total_words == 1);
}

TEST_CASE("ingest from a stream matches ingest from a string") {
  std::istringstream in("the cat\nthe hat\n");
  const Corpus a = ingest(in, 4);
  const Corpus b = ingest("the cat\nthe hat\n", 4);
  CHECK(a.word_counts == b.word_counts);
  CHECK(a.char_counts == b.char_counts);
  CHECK(a.total_chars == b.total_chars);
  CHECK(a.total_words == b.total_words);
}

TEST_CASE("ingest rejects malformed utf-8 with the stream offset") {
  try {
    ingest("ab ab abc\xFFzz", 8);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.byte_offset() == 9);
  }
}

TEST_CASE("ngram_stats on the three-word fixture") {
  const Corpus c = ingest("abc abd ebc", 3);
  const auto stats = ngram_stats(c);
  const NGramStats& b = stats.at("b");
  CHECK(b.count == 3);
  CHECK(b.left_accessors == std::set<char32_t>{U'a', U'e'});
  CHECK(b.right_accessors == std::set<char32_t>{U'c', U'd'});
  const NGramStats& bc = stats.at("bc");
  CHECK(bc.count == 2);
  CHECK(bc.left_accessors == std::set<char32_t>{U'a', U'e'});
  CHECK(bc.right_accessors == std::set<char32_t>{kEndOfWord});
  CHECK(stats.at("abc").count == 1);
  CHECK(stats.count("abcd") == 0);
}

TEST_CASE("ngram_stats emits boundary sentinels for a lone word") {
  const Corpus c = ingest("a", 1);
  const auto stats = ngram_stats(c);
  REQUIRE(stats.size() == 1);
  CHECK(stats.at("a").count == 1);
  CHECK(stats.at("a").left_accessors == std::set<char32_t>{kBeginOfWord});
  CHECK(stats.at("a").right_accessors == std::set<char32_t>{kEndOfWord});
}

TEST_CASE("ngram_stats counts overlapping positions") {
  const Corpus c = ingest("ababab", 2);
  const auto stats = ngram_stats(c);
  CHECK(stats.at("ab").count == 3);
  CHECK(stats.at("ab").left_accessors == std::set<char32_t>{kBeginOfWord, U'b'});
  CHECK(stats.at("ab").right_accessors == std::set<char32_t>{U'a', kEndOfWord});
  CHECK(stats.at("ba").count == 2);
  CHECK(stats.at("ba").left_accessors == std::set<char32_t>{U'a'});
  CHECK(stats.at("ba").right_accessors == std::set<char32_t>{U'b'});
  CHECK(stats.count("aba") == 0);  // beyond max_ngram
}

TEST_CASE("ngram_stats respects word frequency weights") {
  const Corpus c = ingest("ab ab ab cd", 2);
  const auto stats = ngram_stats(c);
  CHECK(stats.at("ab").count == 3);
  CHECK(stats.at("a").count == 3);
  CHECK(stats.at("cd").count == 1);
}

TEST_CASE("position counting") {
  const Corpus c = ingest("ababab", 2);
  CHECK(ngram_positions(c, 1) == 6);
  CHECK(ngram_positions(c, 2) == 5);
  const Corpus d = ingest("ab ac", 2);
  CHECK(ngram_positions(d, 1) == 4);
  CHECK(ngram_positions(d, 2) == 2);
  CHECK(ngram_positions(d, 3) == 0);
}

TEST_CASE("positional and greedy candidate counts differ on self-overlap") {
  const Corpus c = ingest("aaaa aaa", 4);
  CHECK(positional_count(c, U"aa") == 3 + 2);
  CHECK(greedy_count(c, U"aa") == 2 + 1);
  CHECK(positional_count(c, U"ab") == 0);
  const Corpus d = ingest("ababab", 2);
  CHECK(positional_count(d, U"ab") == 3);
  CHECK(greedy_count(d, U"ab") == 3);
  CHECK(greedy_count(d, U"ba") == 2);
}

TEST_CASE("greedy matches never cross word boundaries") {
  const Corpus c = ingest("ab ab", 2);
  // "ba" would only occur across the token gap
  CHECK(greedy_count(c, U"ba") == 0);
  CHECK(positional_count(c, U"ba") == 0);
}

TEST_CASE("serialized corpus re-ingests identically") {
  std::mt19937_64 gen(7);
  for (int round = 0; round < 20; ++round) {
    std::string text;
    const int words = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < words; ++i) {
      const int len = 1 + static_cast<int>(gen() % 6);
      for (int k = 0; k < len; ++k) text.push_back(static_cast<char>('a' + gen() % 4));
      text.push_back(' ');
    }
    const Corpus a = ingest(text, 3);
    const Corpus b = ingest(to_text(a), 3);
    CHECK(a.word_counts == b.word_counts);
    CHECK(a.char_counts == b.char_counts);
    CHECK(a.total_chars == b.total_chars);
    CHECK(a.total_words == b.total_words);
  }
}

TEST_CASE("ngram stats invariants on random corpora") {
  std::mt19937_64 gen(11);
  for (int round = 0; round < 10; ++round) {
    std::string text;
    for (int i = 0; i < 30; ++i) {
      const int len = 1 + static_cast<int>(gen() % 5);
      for (int k = 0; k < len; ++k) text.push_back(static_cast<char>('a' + gen() % 3));
      text.push_back(' ');
    }
    const Corpus c = ingest(text, 4);
    const auto stats = ngram_stats(c);

    // Unigram counts reproduce the character counts.
    std::uint64_t unigram_total = 0;
    for (const auto& [gram, st] : stats) {
      const std::u32string chars = decode_utf8(gram);
      if (chars.size() == 1) {
        unigram_total += st.count;
        CHECK(st.count == c.char_counts.at(chars[0]));
      }
      CHECK(st.count >= 1);
      CHECK(st.left_accessors.size() >= 1);
      CHECK(st.right_accessors.size() >= 1);
      // A substring occurs at least as often as the n-gram containing it.
      if (chars.size() >= 2) {
        const std::string prefix = encode_utf8(std::u32string_view(chars).substr(0, chars.size() - 1));
        const std::string suffix = encode_utf8(std::u32string_view(chars).substr(1));
        CHECK(stats.at(prefix).count >= st.count);
        CHECK(stats.at(suffix).count >= st.count);
      }
      CHECK(st.count == positional_count(c, decode_utf8(gram)));
      CHECK(greedy_count(c, decode_utf8(gram)) <= st.count);
    }
    CHECK(unigram_total == c.total_chars);
  }
}

TEST_CASE("ingest validates max_ngram") {
  CHECK_THROWS_AS(ingest("a", 0), UsageError);
  CHECK_THROWS_AS(ngram_positions(ingest("a", 1), 0), UsageError);
}

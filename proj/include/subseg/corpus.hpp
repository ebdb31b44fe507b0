#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "subseg/unicode.hpp"

namespace subseg {

// Frozen corpus statistics. Words are whitespace-delimited tokens kept as
// UTF-8; character counts and lengths are in Unicode scalar values.
struct Corpus {
  std::map<std::string, std::uint64_t> word_counts;
  std::map<char32_t, std::uint64_t> char_counts;
  std::uint64_t total_chars = 0;
  std::uint64_t total_words = 0;
  int max_ngram = 1;

  bool empty() const noexcept { return total_words == 0; }
};

Corpus ingest(std::string_view text, int max_ngram = 8);
Corpus ingest(std::istream& in, int max_ngram = 8);
Corpus ingest_file(const std::filesystem::path& path, int max_ngram = 8);

// One occurrence per token, space separated. Re-ingesting the result
// reproduces the corpus exactly.
std::string to_text(const Corpus& corpus);

// Statistics of one within-word n-gram. count is positional: every
// occurrence counts, overlapping ones included, weighted by word frequency.
// Accessor sets hold distinct neighbour characters; occurrences touching a
// word edge contribute kBeginOfWord / kEndOfWord.
struct NGramStats {
  std::string ngram;
  std::uint64_t count = 0;
  std::set<char32_t> left_accessors;
  std::set<char32_t> right_accessors;
};

// All within-word n-grams of length 1..corpus.max_ngram.
std::map<std::string, NGramStats> ngram_stats(const Corpus& corpus);

// Number of n-gram positions of the given length:
// sum over word types of count * max(0, len - length + 1).
std::uint64_t ngram_positions(const Corpus& corpus, int length);

// Positional occurrence count of one candidate (overlaps included).
std::uint64_t positional_count(const Corpus& corpus, std::u32string_view w);

// Greedy non-overlapping occurrence count: scan each word left to right,
// skipping past every match. Word boundaries are never crossed.
std::uint64_t greedy_count(const Corpus& corpus, std::u32string_view w);

struct DecodedWord {
  std::u32string chars;
  std::uint64_t count;
};

// Word types decoded once for scoring loops; deterministic order.
std::vector<DecodedWord> decode_words(const Corpus& corpus);

}  // namespace subseg

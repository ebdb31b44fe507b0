#include "subseg/corpus.hpp"

#include <fstream>
#include <sstream>

#include "subseg/error.hpp"

namespace subseg {

namespace {

void check_max_ngram(int max_ngram) {
  if (max_ngram < 1) throw UsageError("max_ngram must be at least 1");
}

}  // namespace

Corpus ingest(std::string_view text, int max_ngram) {
  check_max_ngram(max_ngram);
  Corpus corpus;
  corpus.max_ngram = max_ngram;

  std::size_t offset = 0;
  std::size_t word_start = 0;   // byte offset of the current word
  std::uint64_t word_len = 0;   // scalars in the current word
  while (offset < text.size()) {
    const std::size_t cp_start = offset;
    const char32_t cp = decode_one_utf8(text, offset);
    if (is_whitespace(cp)) {
      if (word_len > 0) {
        corpus.word_counts[std::string(text.substr(word_start, cp_start - word_start))] += 1;
        corpus.total_words += 1;
        corpus.total_chars += word_len;
      }
      word_start = offset;
      word_len = 0;
    } else {
      if (word_len == 0) word_start = cp_start;
      corpus.char_counts[cp] += 1;
      word_len += 1;
    }
  }
  if (word_len > 0) {
    corpus.word_counts[std::string(text.substr(word_start))] += 1;
    corpus.total_words += 1;
    corpus.total_chars += word_len;
  }
  return corpus;
}

Corpus ingest(std::istream& in, int max_ngram) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest(std::string_view(buffer.view()), max_ngram);
}

Corpus ingest_file(const std::filesystem::path& path, int max_ngram) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path.string());
  return ingest(in, max_ngram);
}

std::string to_text(const Corpus& corpus) {
  std::string out;
  for (const auto& [word, count] : corpus.word_counts) {
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!out.empty()) out.push_back(' ');
      out += word;
    }
  }
  return out;
}

std::vector<DecodedWord> decode_words(const Corpus& corpus) {
  std::vector<DecodedWord> words;
  words.reserve(corpus.word_counts.size());
  for (const auto& [word, count] : corpus.word_counts)
    words.push_back({decode_utf8(word), count});
  return words;
}

std::map<std::string, NGramStats> ngram_stats(const Corpus& corpus) {
  std::map<std::string, NGramStats> stats;
  for (const auto& [word, count] : corpus.word_counts) {
    const std::u32string chars = decode_utf8(word);
    const std::size_t len = chars.size();
    const std::size_t max_n = std::min<std::size_t>(corpus.max_ngram, len);
    for (std::size_t n = 1; n <= max_n; ++n) {
      for (std::size_t i = 0; i + n <= len; ++i) {
        auto& entry = stats[encode_utf8(std::u32string_view(chars).substr(i, n))];
        entry.count += count;
        entry.left_accessors.insert(i == 0 ? kBeginOfWord : chars[i - 1]);
        entry.right_accessors.insert(i + n == len ? kEndOfWord : chars[i + n]);
      }
    }
  }
  for (auto& [key, entry] : stats) entry.ngram = key;
  return stats;
}

std::uint64_t ngram_positions(const Corpus& corpus, int length) {
  if (length < 1) throw UsageError("n-gram length must be at least 1");
  std::uint64_t positions = 0;
  for (const auto& [word, count] : corpus.word_counts) {
    const std::size_t len = decode_utf8(word).size();
    if (len >= static_cast<std::size_t>(length))
      positions += count * (len - length + 1);
  }
  return positions;
}

std::uint64_t positional_count(const Corpus& corpus, std::u32string_view w) {
  if (w.empty()) throw InvalidCandidateError("candidate must be non-empty");
  std::uint64_t total = 0;
  for (const auto& [word, count] : corpus.word_counts) {
    const std::u32string chars = decode_utf8(word);
    std::size_t pos = 0;
    while ((pos = chars.find(w.data(), pos, w.size())) != std::u32string::npos) {
      total += count;
      pos += 1;
    }
  }
  return total;
}

std::uint64_t greedy_count(const Corpus& corpus, std::u32string_view w) {
  if (w.empty()) throw InvalidCandidateError("candidate must be non-empty");
  std::uint64_t total = 0;
  for (const auto& [word, count] : corpus.word_counts) {
    const std::u32string chars = decode_utf8(word);
    std::size_t pos = 0;
    while ((pos = chars.find(w.data(), pos, w.size())) != std::u32string::npos) {
      total += count;
      pos += w.size();
    }
  }
  return total;
}

}  // namespace subseg

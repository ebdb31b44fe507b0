#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subseg/goodness.hpp"

namespace subseg {

struct Segmentation {
  std::string word;
  std::vector<std::string> subwords;
  double score = 0.0;
};

// Lookup structure compiled once from a GoodnessTable and shared across
// words. Single characters missing from the table fall back to floor().
class SegmenterDict {
 public:
  explicit SegmenterDict(const GoodnessTable& table);

  // Returns the entry score, or nullptr when absent.
  const double* find(std::u32string_view piece) const;

  double floor() const noexcept { return floor_; }
  int max_len() const noexcept { return max_len_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::u32string_view s) const noexcept;
    std::size_t operator()(const std::u32string& s) const noexcept {
      return operator()(std::u32string_view(s));
    }
  };
  std::unordered_map<std::u32string, double, Hash, std::equal_to<>> entries_;
  double floor_ = 0.0;
  int max_len_ = 1;
};

// Highest-scoring segmentation by dynamic programming over subword ends.
// Ties break toward fewer subwords, then the lexicographically smallest
// subword sequence. Totals are compared as exact sums so that summation
// order never decides a winner; the reported score is the plain float
// total over the chosen pieces.
Segmentation viterbi_segment(std::string_view word, const SegmenterDict& dict);
Segmentation viterbi_segment(std::string_view word, const GoodnessTable& table);

// Greedy maximal matching: repeatedly take the best-scoring dictionary
// prefix of the remaining suffix (ties toward the longer prefix), emitting
// a floor-scored single character when no prefix matches.
Segmentation mm_segment(std::string_view word, const SegmenterDict& dict);
Segmentation mm_segment(std::string_view word, const GoodnessTable& table);

// Exhaustive search over all 2^(n-1) segmentations with the same scoring
// and tie rules as viterbi_segment. Words longer than 20 characters are
// rejected with OracleBoundError.
Segmentation brute_force_segment(std::string_view word, const SegmenterDict& dict);
Segmentation brute_force_segment(std::string_view word, const GoodnessTable& table);

}  // namespace subseg

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subseg/corpus.hpp"
#include "subseg/goodness.hpp"
#include "subseg/segmenter.hpp"

namespace subseg {

// Ordered merge operations. Pair components are UTF-8 subword strings.
struct MergeList {
  Measure measure = Measure::frq;
  std::vector<std::pair<std::string, std::string>> merges;
  std::optional<int> max_subword_len;
};

// Iterative pair merging driven by the chosen measure. Starting from
// single-character symbols, each step merges the adjacent pair with the
// highest score under the current segmentation:
//   frq  - the pair's token frequency (log-transformed, so the argmax is
//          the most frequent pair),
//   av   - accessor variety of the concatenated string, measured against
//          the original character stream,
//   dlg  - description length gain of the concatenated string, measured
//          against the original character stream.
// Ties break on the lexicographically smallest (left, right) pair. Pairs
// whose concatenation exceeds max_subword_len are never merged. Returns
// fewer than num_merges merges when no eligible pair remains.
MergeList train_bpe(const Corpus& corpus, Measure measure, int num_merges,
                    std::optional<int> max_subword_len = std::nullopt);

// Merge table compiled for repeated application. Merges replay in stored
// training order; each one rewrites every adjacency left to right.
class MergeIndex {
 public:
  explicit MergeIndex(const MergeList& merges);

  // Splits the word into characters and replays the merges. The resulting
  // Segmentation carries no goodness score (score is 0).
  Segmentation apply(std::string_view word) const;

 private:
  struct Hash {
    std::size_t operator()(const std::pair<std::u32string, std::u32string>& p) const noexcept;
  };
  std::vector<std::pair<std::u32string, std::u32string>> ops_;
  // Pair -> ascending merge indices (a pair can be re-merged later if a
  // product recreates it).
  std::unordered_map<std::pair<std::u32string, std::u32string>, std::vector<int>, Hash> index_;
};

Segmentation apply_bpe(std::string_view word, const MergeList& merges);

// Dense subword vocabulary: PAD and UNK first, then every single-character
// type and every merge product in byte order.
struct SubwordVocab {
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;
  static constexpr std::string_view kPadSymbol = "<pad>";
  static constexpr std::string_view kUnkSymbol = "<unk>";

  std::map<std::string, int> id_of;

  int size() const noexcept { return static_cast<int>(id_of.size()); }

  // kUnkId for subwords outside the vocabulary.
  int id(std::string_view subword) const;
};

SubwordVocab vocab_of(const MergeList& merges, const Corpus& corpus);

}  // namespace subseg

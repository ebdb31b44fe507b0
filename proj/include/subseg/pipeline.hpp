#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "subseg/model.hpp"
#include "subseg/segmenter.hpp"

namespace subseg {

// A model plus the lookup structures its decoder needs, built once.
class CompiledModel {
 public:
  explicit CompiledModel(Model model);

  const Model& model() const noexcept { return model_; }
  Segmentation segment(std::string_view word) const;

 private:
  Model model_;
  std::optional<SegmenterDict> dict_;
  std::optional<MergeIndex> merge_index_;
};

enum class OutputFormat { tabbed, marked };

// Segments every whitespace-delimited token of the input.
//   tabbed: one "word <tab> subwords-joined-by-spaces" line per token.
//   marked: the input line with every non-final subword suffixed "@@",
//           tokens joined by single spaces.
// Lines end with LF; other whitespace runs are not preserved.
void segment_stream(const CompiledModel& model, std::istream& in, std::ostream& out,
                    OutputFormat format);

std::string segment_text(const CompiledModel& model, std::string_view text,
                         OutputFormat format);

struct StatsReport {
  std::size_t entry_count = 0;        // table entries or merges
  int max_subword_len = 0;            // scalars, longest entry or product
  std::optional<int> vocab_size;      // bpe with corpus only
  std::optional<double> avg_subwords_per_token;  // with corpus only
};

StatsReport stats_report(const CompiledModel& model, const std::optional<Corpus>& corpus);

struct OovReport {
  std::uint64_t test_types = 0;
  std::uint64_t oov_types = 0;            // test word types absent from training
  std::uint64_t covered_oov_types = 0;    // oov types segmentable into known units
  double avg_subwords_per_oov = 0.0;
  double oov_fraction() const;
  double covered_fraction() const;
};

// Known units are table entries for dictionary models and the training
// vocabulary (single characters plus merge products) for bpe models.
OovReport oov_report(const CompiledModel& model, const Corpus& train, const Corpus& test);

}  // namespace subseg

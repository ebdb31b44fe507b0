#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "subseg/bpe.hpp"
#include "subseg/goodness.hpp"

namespace subseg {

enum class Algo { viterbi, mm, bpe };

std::string_view to_string(Algo a) noexcept;
std::optional<Algo> algo_from_string(std::string_view name) noexcept;

// A trained segmentation model: a goodness table for the dictionary
// decoders, a merge list for bpe.
struct Model {
  Algo algo = Algo::viterbi;
  Measure measure = Measure::frq;
  GoodnessTable table;  // viterbi / mm
  MergeList merges;     // bpe
};

// Text format, LF line endings throughout:
//   line 1:  SSM1 <tab> measure <tab> algo <tab> N <tab> count
// where N is max_ngram for dictionary models and max_subword_len (0 when
// unlimited) for bpe models, and count is the number of body lines.
// Dictionary body lines are "subword <tab> score" ordered by descending
// score then byte order, scores printed with the shortest decimal that
// parses back to the same double. Bpe body lines are "left <tab> right"
// in merge order. Serialization is a fixpoint: save, load, save again
// yields byte-identical files.
std::string serialize_model(const Model& model);

// Strict parse; rejects unknown tags, bad counts, malformed scores, and
// trailing content with ModelFormatError naming the offending line.
Model parse_model(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace subseg

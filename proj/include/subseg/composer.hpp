#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subseg/bpe.hpp"
#include "subseg/segmenter.hpp"

namespace subseg {

// Minimal row-major matrix. Enough for the composition network; no linear
// algebra library is warranted for a handful of small dense ops.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

enum class Integration { concat, sum, mul };

std::string_view to_string(Integration i) noexcept;
std::optional<Integration> integration_from_string(std::string_view name) noexcept;

// Parameters of the subword composition network. A word's subword ids
// select embedding columns; h narrow convolution filters of width w slide
// over them; the max-pooled feature vector passes through one highway
// layer (ReLU transform) to become the subword-side embedding, which is
// integrated with the word-side embedding by concatenation, addition, or
// elementwise multiplication.
struct ComposerParams {
  Matrix subword_embeddings;            // vocab_size x d, one row per id
  std::vector<Matrix> filters;          // h filters, each d x w
  std::vector<double> filter_bias;      // h
  Matrix highway_linear;                // h x h, transform path
  Matrix highway_gate;                  // h x h, gate path
  std::vector<double> highway_linear_bias;  // h
  std::vector<double> highway_gate_bias;    // h
  Integration integration = Integration::concat;

  int embedding_dim() const noexcept { return subword_embeddings.cols; }
  int filter_width() const noexcept { return filters.empty() ? 0 : filters.front().cols; }
  int feature_dim() const noexcept { return static_cast<int>(filters.size()); }

  // Dimension consistency plus finiteness of every entry.
  void validate() const;

  // All entries drawn uniformly from [-0.05, 0.05] with a deterministic,
  // platform-independent generator.
  static ComposerParams random(int vocab_size, int d, int w, int h,
                               Integration integration, std::uint64_t seed);
};

// d x l' matrix of embedding columns for the segmentation's subwords, in
// order; l' = max(subword count, filter width), short words padded on the
// right with PAD columns. Unknown subwords map to UNK.
Matrix subword_matrix(const Segmentation& seg, const SubwordVocab& vocab,
                      const ComposerParams& params);

// Narrow convolution with tanh nonlinearity followed by max pooling over
// positions. Returns the h-dimensional feature vector.
std::vector<double> conv_maxpool(const Matrix& columns, const ComposerParams& params);

// One highway layer: t * relu(W_l y + b_l) + (1 - t) * y with gate
// t = sigmoid(W_g y + b_g).
std::vector<double> highway(std::span<const double> y, const ComposerParams& params);

// Combines word-side and subword-side embeddings. sum and mul require
// equal lengths; concat appends.
std::vector<double> integrate(std::span<const double> word_embedding,
                              std::span<const double> subword_embedding,
                              Integration integration);

struct ComposedEmbedding {
  std::vector<double> subword_side;  // highway output
  std::vector<double> combined;      // after integration
};

ComposedEmbedding compose(const Segmentation& seg, const SubwordVocab& vocab,
                          std::span<const double> word_embedding,
                          const ComposerParams& params);

struct GradCheckEntry {
  std::string param;    // e.g. "filters[2][1][0]", "highway_gate_bias[3]"
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  bool excluded = false;
};

struct GradCheckResult {
  double max_rel_error = 0.0;  // over non-excluded entries
  std::string worst_param;
  bool pool_tie = false;    // distinct windows tied at a pooling max
  bool relu_kink = false;   // a highway transform pre-activation at zero
  std::vector<GradCheckEntry> entries;
};

// Central-difference verification of the analytic gradient of
// loss = sum(combined) with respect to every parameter. Relative error is
// |a - n| / max(|a|, |n|, 1e-8). Entries whose derivative is genuinely
// one-sided are excluded from max_rel_error: the filter weights of a
// filter whose pooling max is tied between windows with different subword
// ids (and the embeddings feeding it), and the transform row of a highway
// unit sitting on the ReLU kink. Ties between identical windows are
// harmless and not flagged.
GradCheckResult grad_check(const ComposerParams& params, const Segmentation& seg,
                           const SubwordVocab& vocab,
                           std::span<const double> word_embedding, double epsilon);

}  // namespace subseg

#include "subseg/composer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "subseg/error.hpp"

namespace subseg {

std::string_view to_string(Integration i) noexcept {
  switch (i) {
    case Integration::concat: return "concat";
    case Integration::sum: return "sum";
    case Integration::mul: return "mul";
  }
  return "concat";
}

std::optional<Integration> integration_from_string(std::string_view name) noexcept {
  if (name == "concat") return Integration::concat;
  if (name == "sum") return Integration::sum;
  if (name == "mul") return Integration::mul;
  return std::nullopt;
}

namespace {

void check_finite(const std::vector<double>& values, const char* name) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + name, name);
}

void check_finite(const Matrix& m, const char* name) {
  check_finite(m.data, name);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void ComposerParams::validate() const {
  const int d = embedding_dim();
  const int h = feature_dim();
  const int w = filter_width();
  if (subword_embeddings.rows < 2)
    throw ShapeError("embedding matrix needs at least the PAD and UNK rows");
  if (d < 1) throw ShapeError("embedding dimension must be positive");
  for (const auto& f : filters)
    if (f.rows != d || f.cols != w || w < 1)
      throw ShapeError("every filter must be d x w with w >= 1");
  if (static_cast<int>(filter_bias.size()) != h)
    throw ShapeError("filter bias count must match the filter count");
  if (highway_linear.rows != h || highway_linear.cols != h ||
      highway_gate.rows != h || highway_gate.cols != h)
    throw ShapeError("highway matrices must be h x h");
  if (static_cast<int>(highway_linear_bias.size()) != h ||
      static_cast<int>(highway_gate_bias.size()) != h)
    throw ShapeError("highway bias length must be h");
  check_finite(subword_embeddings, "subword_embeddings");
  for (const auto& f : filters) check_finite(f, "filters");
  check_finite(filter_bias, "filter_bias");
  check_finite(highway_linear, "highway_linear");
  check_finite(highway_gate, "highway_gate");
  check_finite(highway_linear_bias, "highway_linear_bias");
  check_finite(highway_gate_bias, "highway_gate_bias");
}

ComposerParams ComposerParams::random(int vocab_size, int d, int w, int h,
                                      Integration integration, std::uint64_t seed) {
  if (vocab_size < 2 || d < 1 || w < 1 || h < 0)
    throw ShapeError("invalid composer dimensions");
  std::mt19937_64 gen(seed);
  // Top 53 bits to a double in [0, 1); identical on every platform, which
  // std::uniform_real_distribution does not guarantee.
  const auto uniform = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  const auto draw = [&uniform]() { return -0.05 + uniform() * 0.1; };

  ComposerParams p;
  p.integration = integration;
  p.subword_embeddings = Matrix(vocab_size, d);
  for (auto& v : p.subword_embeddings.data) v = draw();
  p.filters.assign(h, Matrix(d, w));
  for (auto& f : p.filters)
    for (auto& v : f.data) v = draw();
  p.filter_bias.resize(h);
  for (auto& v : p.filter_bias) v = draw();
  p.highway_linear = Matrix(h, h);
  for (auto& v : p.highway_linear.data) v = draw();
  p.highway_gate = Matrix(h, h);
  for (auto& v : p.highway_gate.data) v = draw();
  p.highway_linear_bias.resize(h);
  for (auto& v : p.highway_linear_bias) v = draw();
  p.highway_gate_bias.resize(h);
  for (auto& v : p.highway_gate_bias) v = draw();
  return p;
}

Matrix subword_matrix(const Segmentation& seg, const SubwordVocab& vocab,
                      const ComposerParams& params) {
  if (seg.subwords.empty()) throw EmptyInputError("segmentation has no subwords");
  const int d = params.embedding_dim();
  const int l = static_cast<int>(seg.subwords.size());
  const int lp = std::max(l, params.filter_width());

  Matrix columns(d, lp);
  for (int i = 0; i < lp; ++i) {
    const int id = i < l ? vocab.id(seg.subwords[i]) : SubwordVocab::kPadId;
    if (id >= params.subword_embeddings.rows)
      throw ShapeError("vocabulary id exceeds the embedding matrix");
    for (int r = 0; r < d; ++r) columns.at(r, i) = params.subword_embeddings.at(id, r);
  }
  return columns;
}

namespace {

// Everything the backward pass needs from one forward evaluation.
struct Trace {
  std::vector<int> ids;                // l' entries, PAD-padded
  Matrix columns;                      // d x l'
  std::vector<std::vector<double>> f;  // per filter, per window
  std::vector<int> argmax;             // per filter, smallest on ties
  std::vector<double> y, u, relu_u, v, t, se, ae;
  double loss = 0.0;
};

std::vector<int> padded_ids(const Segmentation& seg, const SubwordVocab& vocab, int width) {
  std::vector<int> ids;
  const int l = static_cast<int>(seg.subwords.size());
  const int lp = std::max(l, width);
  ids.reserve(lp);
  for (int i = 0; i < lp; ++i)
    ids.push_back(i < l ? vocab.id(seg.subwords[i]) : SubwordVocab::kPadId);
  return ids;
}

Trace forward(const ComposerParams& params, const Segmentation& seg,
              const SubwordVocab& vocab, std::span<const double> word_embedding) {
  Trace tr;
  tr.ids = padded_ids(seg, vocab, params.filter_width());
  tr.columns = subword_matrix(seg, vocab, params);

  const int h = params.feature_dim();
  const int d = params.embedding_dim();
  const int w = params.filter_width();
  const int positions = h == 0 ? 0 : tr.columns.cols - w + 1;

  tr.f.resize(h);
  tr.argmax.resize(h, 0);
  tr.y.resize(h, 0.0);
  for (int j = 0; j < h; ++j) {
    auto& fj = tr.f[j];
    fj.resize(positions);
    for (int i = 0; i < positions; ++i) {
      double z = params.filter_bias[j];
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < w; ++c) z += tr.columns.at(r, i + c) * params.filters[j].at(r, c);
      fj[i] = std::tanh(z);
    }
    int best = 0;
    for (int i = 1; i < positions; ++i)
      if (fj[i] > fj[best]) best = i;
    tr.argmax[j] = best;
    tr.y[j] = fj[best];
  }

  tr.u.resize(h, 0.0);
  tr.v.resize(h, 0.0);
  tr.relu_u.resize(h, 0.0);
  tr.t.resize(h, 0.0);
  tr.se.resize(h, 0.0);
  for (int k = 0; k < h; ++k) {
    double uk = params.highway_linear_bias[k];
    double vk = params.highway_gate_bias[k];
    for (int m = 0; m < h; ++m) {
      uk += params.highway_linear.at(k, m) * tr.y[m];
      vk += params.highway_gate.at(k, m) * tr.y[m];
    }
    tr.u[k] = uk;
    tr.v[k] = vk;
    tr.relu_u[k] = uk > 0 ? uk : 0.0;
    tr.t[k] = sigmoid(vk);
    tr.se[k] = tr.t[k] * tr.relu_u[k] + (1.0 - tr.t[k]) * tr.y[k];
  }

  tr.ae = integrate(word_embedding, tr.se, params.integration);
  tr.loss = 0.0;
  for (double a : tr.ae) tr.loss += a;
  return tr;
}

}  // namespace

std::vector<double> conv_maxpool(const Matrix& columns, const ComposerParams& params) {
  const int h = params.feature_dim();
  const int d = params.embedding_dim();
  const int w = params.filter_width();
  if (columns.rows != d) throw ShapeError("column matrix row count must equal d");
  if (h > 0 && columns.cols < w)
    throw ShapeError("column matrix is narrower than the filter width");

  std::vector<double> y(h, 0.0);
  const int positions = h == 0 ? 0 : columns.cols - w + 1;
  for (int j = 0; j < h; ++j) {
    double best = 0.0;
    for (int i = 0; i < positions; ++i) {
      double z = params.filter_bias[j];
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < w; ++c) z += columns.at(r, i + c) * params.filters[j].at(r, c);
      const double f = std::tanh(z);
      if (i == 0 || f > best) best = f;
    }
    y[j] = best;
  }
  return y;
}

std::vector<double> highway(std::span<const double> y, const ComposerParams& params) {
  const int h = params.feature_dim();
  if (static_cast<int>(y.size()) != h)
    throw ShapeError("highway input length must equal the filter count");
  std::vector<double> se(h, 0.0);
  for (int k = 0; k < h; ++k) {
    double uk = params.highway_linear_bias[k];
    double vk = params.highway_gate_bias[k];
    for (int m = 0; m < h; ++m) {
      uk += params.highway_linear.at(k, m) * y[m];
      vk += params.highway_gate.at(k, m) * y[m];
    }
    const double t = sigmoid(vk);
    se[k] = t * (uk > 0 ? uk : 0.0) + (1.0 - t) * y[k];
  }
  return se;
}

std::vector<double> integrate(std::span<const double> word_embedding,
                              std::span<const double> subword_embedding,
                              Integration integration) {
  std::vector<double> out;
  switch (integration) {
    case Integration::concat:
      out.assign(word_embedding.begin(), word_embedding.end());
      out.insert(out.end(), subword_embedding.begin(), subword_embedding.end());
      return out;
    case Integration::sum:
      if (word_embedding.size() != subword_embedding.size())
        throw ShapeError("sum integration needs equal embedding lengths");
      out.resize(word_embedding.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = word_embedding[i] + subword_embedding[i];
      return out;
    case Integration::mul:
      if (word_embedding.size() != subword_embedding.size())
        throw ShapeError("mul integration needs equal embedding lengths");
      out.resize(word_embedding.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = word_embedding[i] * subword_embedding[i];
      return out;
  }
  throw Error("unreachable");
}

ComposedEmbedding compose(const Segmentation& seg, const SubwordVocab& vocab,
                          std::span<const double> word_embedding,
                          const ComposerParams& params) {
  params.validate();
  const Trace tr = forward(params, seg, vocab, word_embedding);
  return {tr.se, tr.ae};
}

namespace {

// One checkable parameter slot in a mutable ComposerParams copy.
struct Slot {
  std::string name;
  double* value;
  enum class Block { plain, filter, embedding, highway_linear_row } block = Block::plain;
  int index = -1;  // filter j or highway row k
};

std::vector<Slot> enumerate_slots(ComposerParams& p) {
  std::vector<Slot> slots;
  const auto add = [&slots](std::string name, double* v, Slot::Block block, int index) {
    slots.push_back({std::move(name), v, block, index});
  };
  for (int r = 0; r < p.subword_embeddings.rows; ++r)
    for (int c = 0; c < p.subword_embeddings.cols; ++c)
      add("subword_embeddings[" + std::to_string(r) + "][" + std::to_string(c) + "]",
          &p.subword_embeddings.at(r, c), Slot::Block::embedding, -1);
  for (int j = 0; j < p.feature_dim(); ++j) {
    for (int r = 0; r < p.filters[j].rows; ++r)
      for (int c = 0; c < p.filters[j].cols; ++c)
        add("filters[" + std::to_string(j) + "][" + std::to_string(r) + "][" +
                std::to_string(c) + "]",
            &p.filters[j].at(r, c), Slot::Block::filter, j);
    add("filter_bias[" + std::to_string(j) + "]", &p.filter_bias[j], Slot::Block::plain, -1);
  }
  for (int k = 0; k < p.feature_dim(); ++k) {
    for (int m = 0; m < p.feature_dim(); ++m) {
      add("highway_linear[" + std::to_string(k) + "][" + std::to_string(m) + "]",
          &p.highway_linear.at(k, m), Slot::Block::highway_linear_row, k);
      add("highway_gate[" + std::to_string(k) + "][" + std::to_string(m) + "]",
          &p.highway_gate.at(k, m), Slot::Block::plain, -1);
    }
    add("highway_linear_bias[" + std::to_string(k) + "]", &p.highway_linear_bias[k],
        Slot::Block::highway_linear_row, k);
    add("highway_gate_bias[" + std::to_string(k) + "]", &p.highway_gate_bias[k],
        Slot::Block::plain, -1);
  }
  return slots;
}

}  // namespace

GradCheckResult grad_check(const ComposerParams& params, const Segmentation& seg,
                           const SubwordVocab& vocab,
                           std::span<const double> word_embedding, double epsilon) {
  if (!(epsilon > 0)) throw UsageError("epsilon must be positive");
  params.validate();

  const Trace base = forward(params, seg, vocab, word_embedding);
  const int h = params.feature_dim();
  const int d = params.embedding_dim();
  const int w = params.filter_width();

  // delta = dloss/dse.
  std::vector<double> delta(h, 1.0);
  if (params.integration == Integration::mul)
    for (int k = 0; k < h; ++k) delta[k] = word_embedding[k];

  // Backward pass.
  std::vector<double> gu(h, 0.0), gv(h, 0.0), gy(h, 0.0);
  for (int k = 0; k < h; ++k) {
    const double gt = delta[k] * (base.relu_u[k] - base.y[k]);
    gu[k] = delta[k] * base.t[k] * (base.u[k] > 0 ? 1.0 : 0.0);
    gv[k] = gt * base.t[k] * (1.0 - base.t[k]);
    gy[k] = delta[k] * (1.0 - base.t[k]);
  }
  for (int m = 0; m < h; ++m)
    for (int k = 0; k < h; ++k)
      gy[m] += gu[k] * params.highway_linear.at(k, m) + gv[k] * params.highway_gate.at(k, m);

  ComposerParams grads = params;  // same shapes, zeroed below
  for (auto& v : grads.subword_embeddings.data) v = 0.0;
  for (auto& f : grads.filters)
    for (auto& v : f.data) v = 0.0;
  std::fill(grads.filter_bias.begin(), grads.filter_bias.end(), 0.0);
  for (auto& v : grads.highway_linear.data) v = 0.0;
  for (auto& v : grads.highway_gate.data) v = 0.0;
  std::fill(grads.highway_linear_bias.begin(), grads.highway_linear_bias.end(), 0.0);
  std::fill(grads.highway_gate_bias.begin(), grads.highway_gate_bias.end(), 0.0);

  for (int k = 0; k < h; ++k) {
    grads.highway_linear_bias[k] = gu[k];
    grads.highway_gate_bias[k] = gv[k];
    for (int m = 0; m < h; ++m) {
      grads.highway_linear.at(k, m) = gu[k] * base.y[m];
      grads.highway_gate.at(k, m) = gv[k] * base.y[m];
    }
  }

  Matrix gcolumns(d, base.columns.cols);
  for (int j = 0; j < h; ++j) {
    const int i = base.argmax[j];
    const double gz = gy[j] * (1.0 - base.f[j][i] * base.f[j][i]);
    grads.filter_bias[j] += gz;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < w; ++c) {
        grads.filters[j].at(r, c) += gz * base.columns.at(r, i + c);
        gcolumns.at(r, i + c) += gz * params.filters[j].at(r, c);
      }
  }
  for (int i = 0; i < gcolumns.cols; ++i)
    for (int r = 0; r < d; ++r)
      grads.subword_embeddings.at(base.ids[i], r) += gcolumns.at(r, i);

  // Nondifferentiable point detection at the base point.
  std::vector<bool> tied(h, false), kinked(h, false);
  double max_abs_emb = 0.0;
  for (int i = 0; i < base.columns.cols; ++i)
    for (int r = 0; r < d; ++r) max_abs_emb = std::max(max_abs_emb, std::abs(base.columns.at(r, i)));
  bool any_tie = false;
  for (int j = 0; j < h; ++j) {
    double max_abs_h = 0.0;
    for (double v : params.filters[j].data) max_abs_h = std::max(max_abs_h, std::abs(v));
    // Largest shift any single +-epsilon parameter step can give one window.
    const double flip_zone =
        2.0 * epsilon * std::max(max_abs_emb, static_cast<double>(w) * max_abs_h);
    const double tol = 4.0 * flip_zone;
    const int best = base.argmax[j];
    for (int i = 0; i < static_cast<int>(base.f[j].size()); ++i) {
      if (i == best || base.y[j] - base.f[j][i] > tol) continue;
      // Windows with identical id tuples move together under every
      // perturbation; such ties are exact but harmless.
      bool same_ids = true;
      for (int c = 0; c < w; ++c)
        if (base.ids[best + c] != base.ids[i + c]) {
          same_ids = false;
          break;
        }
      if (!same_ids) {
        tied[j] = true;
        any_tie = true;
        break;
      }
    }
  }
  double max_abs_y = 1.0;
  for (int j = 0; j < h; ++j) max_abs_y = std::max(max_abs_y, std::abs(base.y[j]));
  for (int k = 0; k < h; ++k)
    if (std::abs(base.u[k]) <= 4.0 * epsilon * max_abs_y) kinked[k] = true;

  // Numeric differentiation.
  ComposerParams mutable_params = params;
  std::vector<Slot> slots = enumerate_slots(mutable_params);
  ComposerParams grad_shapes = grads;
  std::vector<Slot> grad_slots = enumerate_slots(grad_shapes);

  GradCheckResult result;
  result.entries.reserve(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const double saved = *slots[s].value;
    *slots[s].value = saved + epsilon;
    const double up = forward(mutable_params, seg, vocab, word_embedding).loss;
    *slots[s].value = saved - epsilon;
    const double down = forward(mutable_params, seg, vocab, word_embedding).loss;
    *slots[s].value = saved;
    if (!std::isfinite(up) || !std::isfinite(down))
      throw NumericError("non-finite loss while perturbing " + slots[s].name, slots[s].name);

    GradCheckEntry entry;
    entry.param = slots[s].name;
    entry.analytic = *grad_slots[s].value;
    entry.numeric = (up - down) / (2.0 * epsilon);
    entry.rel_error = std::abs(entry.analytic - entry.numeric) /
                      std::max({std::abs(entry.analytic), std::abs(entry.numeric), 1e-8});
    switch (slots[s].block) {
      case Slot::Block::filter:
        entry.excluded = tied[slots[s].index];
        break;
      case Slot::Block::embedding:
        entry.excluded = any_tie;
        break;
      case Slot::Block::highway_linear_row:
        entry.excluded = kinked[slots[s].index];
        break;
      case Slot::Block::plain:
        entry.excluded = false;
        break;
    }
    if (!entry.excluded && entry.rel_error > result.max_rel_error) {
      result.max_rel_error = entry.rel_error;
      result.worst_param = entry.param;
    }
    result.entries.push_back(std::move(entry));
  }
  for (int j = 0; j < h; ++j) result.pool_tie = result.pool_tie || tied[j];
  for (int k = 0; k < h; ++k) result.relu_kink = result.relu_kink || kinked[k];
  return result;
}

}  // namespace subseg

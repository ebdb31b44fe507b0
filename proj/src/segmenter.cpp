#include "subseg/segmenter.hpp"

#include <algorithm>

#include "subseg/error.hpp"

namespace subseg {

std::size_t SegmenterDict::Hash::operator()(std::u32string_view s) const noexcept {
  // FNV-1a over the scalar values.
  std::size_t h = 14695981039346656037ull;
  for (char32_t cp : s) {
    h ^= static_cast<std::size_t>(cp);
    h *= 1099511628211ull;
  }
  return h;
}

SegmenterDict::SegmenterDict(const GoodnessTable& table) {
  floor_ = floor_score(table);
  entries_.reserve(table.entries.size());
  for (const auto& [gram, score] : table.entries) {
    std::u32string chars = decode_utf8(gram);
    max_len_ = std::max(max_len_, static_cast<int>(chars.size()));
    entries_.emplace(std::move(chars), score);
  }
}

const double* SegmenterDict::find(std::u32string_view piece) const {
  const auto it = entries_.find(piece);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::u32string decode_word(std::string_view word) {
  const std::u32string chars = decode_utf8(word);
  if (chars.empty()) throw EmptyInputError("cannot segment an empty word");
  return chars;
}

Segmentation make_result(std::string_view word, const std::u32string& chars,
                         const std::vector<std::pair<std::size_t, std::size_t>>& pieces,
                         double score) {
  Segmentation seg;
  seg.word = std::string(word);
  seg.score = score;
  seg.subwords.reserve(pieces.size());
  for (const auto& [begin, end] : pieces)
    seg.subwords.push_back(encode_utf8(std::u32string_view(chars).substr(begin, end - begin)));
  return seg;
}

// Piece score: table entry, floor for a lone character, absent otherwise.
inline const double* piece_score(const SegmenterDict& dict, std::u32string_view piece,
                                 double& floor_slot) {
  if (const double* s = dict.find(piece)) return s;
  if (piece.size() == 1) {
    floor_slot = dict.floor();
    return &floor_slot;
  }
  return nullptr;
}

// Running total kept as a nonoverlapping float expansion (two_sum chains),
// so comparing two totals sees their exact values. Plain doubles would make
// mathematically equal sums differ by summation order, and near-ties would
// be won by rounding noise instead of the declared tie rules.
class ExactSum {
 public:
  void add(double x) {
    double q = x;
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const double e = terms_[i];
      const double s = q + e;
      const double bv = s - q;
      const double err = (q - (s - bv)) + (e - bv);
      if (err != 0.0) terms_[out++] = err;
      q = s;
    }
    terms_.resize(out);
    if (q != 0.0) terms_.push_back(q);
  }

  // Sign of a - b. Components are nonoverlapping and ascend in magnitude,
  // so the last one carries the sign of the whole difference.
  static int compare(const ExactSum& a, const ExactSum& b) {
    ExactSum diff = a;
    for (const double t : b.terms_) diff.add(-t);
    if (diff.terms_.empty()) return 0;
    return diff.terms_.back() > 0.0 ? 1 : -1;
  }

 private:
  std::vector<double> terms_;
};

// Orders candidate segmentations: higher score first, then fewer subwords,
// then the lexicographically smaller piece sequence. Used by both the
// dynamic program and the exhaustive search so ties resolve identically.
bool sequence_less(const std::u32string& chars,
                   const std::vector<std::pair<std::size_t, std::size_t>>& a,
                   const std::vector<std::pair<std::size_t, std::size_t>>& b) {
  const std::u32string_view text(chars);
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    const auto pa = text.substr(a[i].first, a[i].second - a[i].first);
    const auto pb = text.substr(b[i].first, b[i].second - b[i].first);
    const int cmp = pa.compare(pb);
    if (cmp != 0) return cmp < 0;
  }
  return a.size() < b.size();
}

struct Candidate {
  double score = 0.0;  // left-to-right float total, the reported value
  ExactSum sum;        // exact total, the compared value
  std::size_t pieces = 0;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

bool candidate_better(const std::u32string& chars, const Candidate& a, const Candidate& b) {
  const int by_score = ExactSum::compare(a.sum, b.sum);
  if (by_score != 0) return by_score > 0;
  if (a.pieces != b.pieces) return a.pieces < b.pieces;
  return sequence_less(chars, a.spans, b.spans);
}

}  // namespace

Segmentation viterbi_segment(std::string_view word, const SegmenterDict& dict) {
  const std::u32string chars = decode_word(word);
  const std::size_t n = chars.size();
  const std::size_t max_len = std::max<std::size_t>(1, dict.max_len());

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<double> best_score(n + 1, 0.0);
  std::vector<ExactSum> best_sum(n + 1);
  std::vector<std::size_t> best_pieces(n + 1, 0);
  std::vector<std::size_t> back(n + 1, kUnset);
  back[0] = 0;

  // Materializes the chosen piece spans ending at a finalized position.
  const auto chain = [&](std::size_t pos) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    while (pos > 0) {
      spans.emplace_back(back[pos], pos);
      pos = back[pos];
    }
    std::reverse(spans.begin(), spans.end());
    return spans;
  };

  for (std::size_t end = 1; end <= n; ++end) {
    bool have = false;
    for (std::size_t len = 1; len <= std::min(end, max_len); ++len) {
      const std::size_t begin = end - len;
      double floor_slot;
      const double* g =
          piece_score(dict, std::u32string_view(chars).substr(begin, len), floor_slot);
      if (!g) continue;
      ExactSum sum = best_sum[begin];
      sum.add(*g);
      const double score = best_score[begin] + *g;
      const std::size_t pieces = best_pieces[begin] + 1;
      bool take = false;
      if (!have) {
        take = true;
      } else if (const int by_score = ExactSum::compare(sum, best_sum[end]); by_score != 0) {
        take = by_score > 0;
      } else if (pieces != best_pieces[end]) {
        take = pieces < best_pieces[end];
      } else {
        // Exact tie on score and piece count; pick the smaller sequence.
        auto current = chain(begin);
        current.emplace_back(begin, end);
        auto incumbent = chain(back[end]);
        incumbent.emplace_back(back[end], end);
        take = sequence_less(chars, current, incumbent);
      }
      if (take) {
        best_score[end] = score;
        best_sum[end] = std::move(sum);
        best_pieces[end] = pieces;
        back[end] = begin;
        have = true;
      }
    }
    // A single character is always admissible, so every prefix is reachable.
  }

  return make_result(word, chars, chain(n), best_score[n]);
}

Segmentation mm_segment(std::string_view word, const SegmenterDict& dict) {
  const std::u32string chars = decode_word(word);
  const std::size_t n = chars.size();
  const std::size_t max_len = std::max<std::size_t>(1, dict.max_len());

  std::vector<std::pair<std::size_t, std::size_t>> spans;
  double total = 0.0;
  std::size_t pos = 0;
  while (pos < n) {
    bool have = false;
    double best = 0.0;
    std::size_t best_len = 0;
    for (std::size_t len = 1; len <= std::min(n - pos, max_len); ++len) {
      const double* g = dict.find(std::u32string_view(chars).substr(pos, len));
      if (!g) continue;
      // Ties go to the longer prefix; scanning short to long makes >= do that.
      if (!have || *g >= best) {
        best = *g;
        best_len = len;
        have = true;
      }
    }
    if (!have) {
      best = dict.floor();
      best_len = 1;
    }
    spans.emplace_back(pos, pos + best_len);
    total += best;
    pos += best_len;
  }
  return make_result(word, chars, spans, total);
}

Segmentation brute_force_segment(std::string_view word, const SegmenterDict& dict) {
  const std::u32string chars = decode_word(word);
  const std::size_t n = chars.size();
  if (n > 20)
    throw OracleBoundError("exhaustive segmentation is limited to 20 characters");

  Candidate best;
  bool have = false;
  const std::size_t masks = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    Candidate cand;
    bool valid = true;
    std::size_t begin = 0;
    for (std::size_t end = 1; end <= n && valid; ++end) {
      const bool boundary = end == n || ((mask >> (end - 1)) & 1);
      if (!boundary) continue;
      double floor_slot;
      const double* g =
          piece_score(dict, std::u32string_view(chars).substr(begin, end - begin), floor_slot);
      if (!g) {
        valid = false;
        break;
      }
      cand.score += *g;
      cand.sum.add(*g);
      cand.pieces += 1;
      cand.spans.emplace_back(begin, end);
      begin = end;
    }
    if (!valid) continue;
    if (!have || candidate_better(chars, cand, best)) {
      best = std::move(cand);
      have = true;
    }
  }
  return make_result(word, chars, best.spans, best.score);
}

Segmentation viterbi_segment(std::string_view word, const GoodnessTable& table) {
  return viterbi_segment(word, SegmenterDict(table));
}

Segmentation mm_segment(std::string_view word, const GoodnessTable& table) {
  return mm_segment(word, SegmenterDict(table));
}

Segmentation brute_force_segment(std::string_view word, const GoodnessTable& table) {
  return brute_force_segment(word, SegmenterDict(table));
}

}  // namespace subseg

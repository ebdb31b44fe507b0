#include "subseg/bpe.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "subseg/error.hpp"

namespace subseg {

namespace {

using PairKey = std::uint64_t;

inline PairKey pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

struct U32Hash {
  using is_transparent = void;
  std::size_t operator()(std::u32string_view s) const noexcept {
    std::size_t h = 14695981039346656037ull;
    for (char32_t cp : s) {
      h ^= static_cast<std::size_t>(cp);
      h *= 1099511628211ull;
    }
    return h;
  }
  std::size_t operator()(const std::u32string& s) const noexcept {
    return operator()(std::u32string_view(s));
  }
};

// Accessor variety and greedy occurrence statistics of one string against
// the original character stream.
struct StreamStats {
  std::uint64_t greedy = 0;
  std::set<char32_t> left, right;
};

StreamStats scan_stream(const std::vector<DecodedWord>& words, std::u32string_view s) {
  StreamStats stats;
  for (const auto& [chars, count] : words) {
    std::size_t pos = 0;
    // Positional pass for accessors.
    while ((pos = chars.find(s.data(), pos, s.size())) != std::u32string::npos) {
      stats.left.insert(pos == 0 ? kBeginOfWord : chars[pos - 1]);
      const std::size_t end = pos + s.size();
      stats.right.insert(end == chars.size() ? kEndOfWord : chars[end]);
      pos += 1;
    }
    // Greedy pass for occurrence counting.
    pos = 0;
    while ((pos = chars.find(s.data(), pos, s.size())) != std::u32string::npos) {
      stats.greedy += count;
      pos += s.size();
    }
  }
  return stats;
}

class Trainer {
 public:
  Trainer(const Corpus& corpus, Measure measure, std::optional<int> cap)
      : measure_(measure), cap_(cap), decoded_(decode_words(corpus)) {
    if (measure != Measure::frq) dlg_.emplace(corpus);
    for (std::size_t idx = 0; idx < decoded_.size(); ++idx) {
      Word w;
      w.count = decoded_[idx].count;
      w.syms.reserve(decoded_[idx].chars.size());
      for (char32_t cp : decoded_[idx].chars)
        w.syms.push_back(intern(std::u32string(1, cp)));
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i)
        add_pair(w.syms[i], w.syms[i + 1], w.count, static_cast<int>(idx));
      words_.push_back(std::move(w));
    }
  }

  MergeList run(int num_merges) {
    MergeList out;
    out.measure = measure_;
    out.max_subword_len = cap_;
    for (int step = 0; step < num_merges; ++step) {
      const auto best = pick_pair();
      if (!best) break;
      apply_merge(*best, out);
    }
    return out;
  }

 private:
  struct Word {
    std::vector<int> syms;
    std::uint64_t count = 0;
  };

  int intern(std::u32string text) {
    const auto it = sym_ids_.find(text);
    if (it != sym_ids_.end()) return it->second;
    const int id = static_cast<int>(sym_.size());
    sym_ids_.emplace(text, id);
    sym_.push_back(std::move(text));
    return id;
  }

  void add_pair(int a, int b, std::uint64_t count, int word_idx) {
    const PairKey key = pair_key(a, b);
    pair_count_[key] += count;
    pair_words_[key].insert(word_idx);
  }

  // Goodness of the concatenated string against the original corpus,
  // memoized; the same string always occurs there, because adjacent
  // symbols concatenate to a substring of some corpus word.
  double stream_goodness(const std::u32string& s) {
    const auto it = score_memo_.find(s);
    if (it != score_memo_.end()) return it->second;
    const StreamStats stats = scan_stream(decoded_, s);
    double score;
    if (measure_ == Measure::av) {
      score = std::log(static_cast<double>(std::min(stats.left.size(), stats.right.size())));
    } else {
      score = dlg_->score(s, stats.greedy);
    }
    score_memo_.emplace(s, score);
    return score;
  }

  std::optional<PairKey> pick_pair() {
    bool have = false;
    PairKey best_key = 0;
    std::uint64_t best_count = 0;
    double best_score = 0.0;
    const std::u32string* best_l = nullptr;
    const std::u32string* best_r = nullptr;

    for (const auto& [key, count] : pair_count_) {
      if (count == 0) continue;
      const int a = static_cast<int>(key >> 32);
      const int b = static_cast<int>(key & 0xFFFFFFFF);
      const std::u32string& l = sym_[a];
      const std::u32string& r = sym_[b];
      if (cap_ && static_cast<int>(l.size() + r.size()) > *cap_) continue;

      double score = 0.0;
      if (measure_ != Measure::frq) score = stream_goodness(l + r);

      bool take = false;
      if (!have) {
        take = true;
      } else if (measure_ == Measure::frq) {
        if (count != best_count)
          take = count > best_count;
        else
          take = l < *best_l || (l == *best_l && r < *best_r);
      } else {
        if (score != best_score)
          take = score > best_score;
        else
          take = l < *best_l || (l == *best_l && r < *best_r);
      }
      if (take) {
        have = true;
        best_key = key;
        best_count = count;
        best_score = score;
        best_l = &l;
        best_r = &r;
      }
    }
    if (!have) return std::nullopt;
    return best_key;
  }

  void apply_merge(PairKey key, MergeList& out) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xFFFFFFFF);
    out.merges.emplace_back(encode_utf8(sym_[a]), encode_utf8(sym_[b]));
    const int merged = intern(sym_[a] + sym_[b]);

    // Detach the index entry; rewriting repopulates any recreated pairs.
    const auto node = pair_words_.extract(key);
    if (node.empty()) return;
    for (const int idx : node.mapped()) {
      Word& w = words_[idx];
      bool present = false;
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i)
        if (w.syms[i] == a && w.syms[i + 1] == b) {
          present = true;
          break;
        }
      if (!present) continue;  // stale index entry

      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i)
        pair_count_[pair_key(w.syms[i], w.syms[i + 1])] -= w.count;

      std::vector<int> rewritten;
      rewritten.reserve(w.syms.size());
      for (std::size_t i = 0; i < w.syms.size();) {
        if (i + 1 < w.syms.size() && w.syms[i] == a && w.syms[i + 1] == b) {
          rewritten.push_back(merged);
          i += 2;
        } else {
          rewritten.push_back(w.syms[i]);
          i += 1;
        }
      }
      w.syms = std::move(rewritten);

      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i)
        add_pair(w.syms[i], w.syms[i + 1], w.count, idx);
    }
  }

  Measure measure_;
  std::optional<int> cap_;
  std::vector<DecodedWord> decoded_;
  std::optional<DlgScorer> dlg_;
  std::vector<std::u32string> sym_;
  std::map<std::u32string, int> sym_ids_;
  std::vector<Word> words_;
  std::unordered_map<PairKey, std::uint64_t> pair_count_;
  std::unordered_map<PairKey, std::set<int>> pair_words_;
  std::unordered_map<std::u32string, double, U32Hash, std::equal_to<>> score_memo_;
};

}  // namespace

MergeList train_bpe(const Corpus& corpus, Measure measure, int num_merges,
                    std::optional<int> max_subword_len) {
  if (corpus.empty()) throw EmptyCorpusError("corpus is empty");
  if (num_merges < 0) throw UsageError("number of merges must be non-negative");
  if (max_subword_len && *max_subword_len < 1)
    throw UsageError("max subword length must be at least 1");
  return Trainer(corpus, measure, max_subword_len).run(num_merges);
}

std::size_t MergeIndex::Hash::operator()(
    const std::pair<std::u32string, std::u32string>& p) const noexcept {
  std::size_t h = 14695981039346656037ull;
  for (char32_t cp : p.first) {
    h ^= static_cast<std::size_t>(cp);
    h *= 1099511628211ull;
  }
  h ^= 0x110002;  // separator outside the scalar range
  h *= 1099511628211ull;
  for (char32_t cp : p.second) {
    h ^= static_cast<std::size_t>(cp);
    h *= 1099511628211ull;
  }
  return h;
}

MergeIndex::MergeIndex(const MergeList& merges) {
  ops_.reserve(merges.merges.size());
  for (std::size_t i = 0; i < merges.merges.size(); ++i) {
    const auto& [l, r] = merges.merges[i];
    ops_.emplace_back(decode_utf8(l), decode_utf8(r));
    index_[ops_.back()].push_back(static_cast<int>(i));
  }
}

Segmentation MergeIndex::apply(std::string_view word) const {
  const std::u32string chars = decode_utf8(word);
  if (chars.empty()) throw EmptyInputError("cannot segment an empty word");

  std::vector<std::u32string> syms;
  syms.reserve(chars.size());
  for (char32_t cp : chars) syms.emplace_back(1, cp);

  // First merge index at or after `after` for the adjacent pair, if any.
  const auto next_index = [&](const std::u32string& l, const std::u32string& r,
                              int after) -> std::optional<int> {
    const auto it = index_.find({l, r});
    if (it == index_.end()) return std::nullopt;
    const auto& indices = it->second;
    const auto pos = std::lower_bound(indices.begin(), indices.end(), after);
    if (pos == indices.end()) return std::nullopt;
    return *pos;
  };

  std::set<int> pending;
  for (std::size_t i = 0; i + 1 < syms.size(); ++i)
    if (const auto idx = next_index(syms[i], syms[i + 1], 0)) pending.insert(*idx);

  while (!pending.empty()) {
    const int step = *pending.begin();
    pending.erase(pending.begin());
    const auto& op = ops_[step];

    std::vector<std::u32string> rewritten;
    rewritten.reserve(syms.size());
    bool changed = false;
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == op.first && syms[i + 1] == op.second) {
        rewritten.push_back(op.first + op.second);
        changed = true;
        i += 2;
      } else {
        rewritten.push_back(syms[i]);
        i += 1;
      }
    }
    if (!changed) continue;
    syms = std::move(rewritten);

    // Later merges may now apply; earlier ones stay consumed.
    for (std::size_t i = 0; i + 1 < syms.size(); ++i)
      if (const auto idx = next_index(syms[i], syms[i + 1], step + 1)) pending.insert(*idx);
  }

  Segmentation seg;
  seg.word = std::string(word);
  seg.subwords.reserve(syms.size());
  for (const auto& s : syms) seg.subwords.push_back(encode_utf8(s));
  seg.score = 0.0;
  return seg;
}

Segmentation apply_bpe(std::string_view word, const MergeList& merges) {
  return MergeIndex(merges).apply(word);
}

int SubwordVocab::id(std::string_view subword) const {
  const auto it = id_of.find(std::string(subword));
  return it == id_of.end() ? kUnkId : it->second;
}

SubwordVocab vocab_of(const MergeList& merges, const Corpus& corpus) {
  std::set<std::string> subwords;
  for (const auto& [cp, count] : corpus.char_counts) {
    (void)count;
    subwords.insert(encode_utf8(cp));
  }
  for (const auto& [l, r] : merges.merges) subwords.insert(l + r);

  SubwordVocab vocab;
  vocab.id_of.emplace(std::string(SubwordVocab::kPadSymbol), SubwordVocab::kPadId);
  vocab.id_of.emplace(std::string(SubwordVocab::kUnkSymbol), SubwordVocab::kUnkId);
  int next = 2;
  for (const auto& s : subwords) vocab.id_of.emplace(s, next++);
  return vocab;
}

}  // namespace subseg

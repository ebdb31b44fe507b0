#include "subseg/goodness.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "subseg/error.hpp"

namespace subseg {

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::frq: return "frq";
    case Measure::av: return "av";
    case Measure::dlg: return "dlg";
  }
  return "frq";
}

std::optional<Measure> measure_from_string(std::string_view name) noexcept {
  if (name == "frq") return Measure::frq;
  if (name == "av") return Measure::av;
  if (name == "dlg") return Measure::dlg;
  return std::nullopt;
}

namespace {

std::u32string checked_candidate(const Corpus& corpus, std::string_view w) {
  if (corpus.empty()) throw EmptyCorpusError("corpus is empty");
  const std::u32string chars = decode_utf8(w);
  if (chars.empty()) throw InvalidCandidateError("candidate must be non-empty");
  for (char32_t cp : chars)
    if (is_whitespace(cp))
      throw InvalidCandidateError("candidate must not contain whitespace");
  return chars;
}

double xlg(double c) { return c > 0 ? c * std::log2(c) : 0.0; }

}  // namespace

double score_frq(const Corpus& corpus, std::string_view w) {
  const std::u32string chars = checked_candidate(corpus, w);
  const std::uint64_t count = positional_count(corpus, chars);
  if (count == 0)
    throw AbsentCandidateError("candidate does not occur in the corpus: " + std::string(w));
  const std::uint64_t positions = ngram_positions(corpus, static_cast<int>(chars.size()));
  return std::log(static_cast<double>(count) / static_cast<double>(positions));
}

double score_av(const Corpus& corpus, std::string_view w) {
  const std::u32string chars = checked_candidate(corpus, w);
  std::set<char32_t> left, right;
  bool seen = false;
  for (const auto& [word, count] : corpus.word_counts) {
    (void)count;
    const std::u32string text = decode_utf8(word);
    std::size_t pos = 0;
    while ((pos = text.find(chars.data(), pos, chars.size())) != std::u32string::npos) {
      seen = true;
      left.insert(pos == 0 ? kBeginOfWord : text[pos - 1]);
      const std::size_t end = pos + chars.size();
      right.insert(end == text.size() ? kEndOfWord : text[end]);
      pos += 1;
    }
  }
  if (!seen)
    throw AbsentCandidateError("candidate does not occur in the corpus: " + std::string(w));
  return std::log(static_cast<double>(std::min(left.size(), right.size())));
}

DlgScorer::DlgScorer(const Corpus& corpus) : counts_(corpus.char_counts) {
  if (corpus.empty()) throw EmptyCorpusError("corpus is empty");
  total_ = static_cast<double>(corpus.total_chars);
  for (const auto& [cp, count] : counts_) {
    (void)cp;
    sum_clgc_ += xlg(static_cast<double>(count));
  }
  corpus_bits_ = xlg(total_) - sum_clgc_;
}

double DlgScorer::score(std::u32string_view w, std::uint64_t occurrences) const {
  if (w.size() < 2)
    throw InvalidCandidateError("description length gain needs at least 2 characters");
  if (occurrences == 0)
    throw AbsentCandidateError("candidate does not occur in the corpus");

  // Character multiplicities within w.
  std::map<char32_t, std::uint64_t> mult;
  for (char32_t cp : w) mult[cp] += 1;

  const double c = static_cast<double>(occurrences);
  // Every occurrence collapses |w| characters into one fresh symbol; one
  // copy of w is appended to keep it decodable.
  const double new_total =
      total_ - c * static_cast<double>(w.size() - 1) + static_cast<double>(w.size());

  double sum = sum_clgc_;
  for (const auto& [cp, m] : mult) {
    const auto it = counts_.find(cp);
    const double old_count = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
    // Greedy occurrences are disjoint, so the corpus holds at least c*m copies.
    const double new_count = old_count - c * static_cast<double>(m) + static_cast<double>(m);
    sum += xlg(new_count) - xlg(old_count);
  }
  sum += xlg(c);  // the fresh replacement symbol

  const double new_bits = xlg(new_total) - sum;
  return corpus_bits_ - new_bits;
}

double score_dlg(const Corpus& corpus, std::string_view w) {
  const std::u32string chars = checked_candidate(corpus, w);
  if (chars.size() < 2)
    throw InvalidCandidateError("description length gain needs at least 2 characters");
  const std::uint64_t occurrences = greedy_count(corpus, chars);
  if (occurrences == 0)
    throw AbsentCandidateError("candidate does not occur in the corpus: " + std::string(w));
  return DlgScorer(corpus).score(chars, occurrences);
}

namespace {

// Greedy non-overlapping counts for all within-word n-grams of length
// 2..max_ngram, one scan per (word, candidate) pair.
std::map<std::string, std::uint64_t> greedy_counts_all(const Corpus& corpus) {
  std::map<std::string, std::uint64_t> totals;
  for (const auto& [word, count] : corpus.word_counts) {
    const std::u32string chars = decode_utf8(word);
    const std::size_t len = chars.size();
    const std::size_t max_n = std::min<std::size_t>(corpus.max_ngram, len);
    std::set<std::u32string_view> seen;
    for (std::size_t n = 2; n <= max_n; ++n)
      for (std::size_t i = 0; i + n <= len; ++i)
        seen.insert(std::u32string_view(chars).substr(i, n));
    for (const auto& cand : seen) {
      std::uint64_t occurrences = 0;
      std::size_t pos = 0;
      while ((pos = chars.find(cand.data(), pos, cand.size())) != std::u32string::npos) {
        occurrences += 1;
        pos += cand.size();
      }
      totals[encode_utf8(cand)] += occurrences * count;
    }
  }
  return totals;
}

}  // namespace

GoodnessTable build_table(const Corpus& corpus, Measure measure,
                          std::uint64_t min_count, std::optional<std::size_t> top_k) {
  if (corpus.empty()) throw EmptyCorpusError("corpus is empty");

  GoodnessTable table;
  table.measure = measure;
  table.max_ngram = corpus.max_ngram;
  table.min_count = min_count;

  const auto stats = ngram_stats(corpus);

  if (measure == Measure::dlg) {
    const DlgScorer scorer(corpus);
    const auto greedy = greedy_counts_all(corpus);
    for (const auto& [gram, st] : stats) {
      if (st.count < min_count) continue;
      const std::u32string chars = decode_utf8(gram);
      if (chars.size() < 2) continue;
      table.entries[gram] = scorer.score(chars, greedy.at(gram));
    }
    const double singles = floor_score(table);
    for (const auto& [cp, count] : corpus.char_counts) {
      (void)count;
      table.entries[encode_utf8(cp)] = singles;
    }
  } else if (measure == Measure::frq) {
    std::vector<double> positions(corpus.max_ngram + 1, 0.0);
    for (int n = 1; n <= corpus.max_ngram; ++n)
      positions[n] = static_cast<double>(ngram_positions(corpus, n));
    for (const auto& [gram, st] : stats) {
      if (st.count < min_count) continue;
      const std::size_t len = decode_utf8(gram).size();
      table.entries[gram] = std::log(static_cast<double>(st.count) / positions[len]);
    }
  } else {
    for (const auto& [gram, st] : stats) {
      if (st.count < min_count) continue;
      const std::size_t variety = std::min(st.left_accessors.size(), st.right_accessors.size());
      table.entries[gram] = std::log(static_cast<double>(variety));
    }
  }

  if (top_k && table.entries.size() > *top_k) {
    std::vector<std::pair<std::string, double>> ranked(table.entries.begin(),
                                                       table.entries.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::map<std::string, double> kept;
    for (std::size_t i = 0; i < *top_k; ++i) kept.insert(ranked[i]);
    for (const auto& [gram, score] : table.entries)
      if (decode_utf8(gram).size() == 1) kept.emplace(gram, score);
    table.entries = std::move(kept);
  }
  return table;
}

double table_min_score(const GoodnessTable& table) {
  if (table.entries.empty()) return 0.0;
  double lowest = table.entries.begin()->second;
  for (const auto& [gram, score] : table.entries) {
    (void)gram;
    lowest = std::min(lowest, score);
  }
  return lowest;
}

double floor_score(const GoodnessTable& table) {
  if (table.entries.empty()) return 0.0;
  return table_min_score(table) - std::log(2.0);
}

}  // namespace subseg

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "subseg/corpus.hpp"

namespace subseg {

enum class Measure { frq, av, dlg };

std::string_view to_string(Measure m) noexcept;
std::optional<Measure> measure_from_string(std::string_view name) noexcept;

// Scored candidate subwords. Keys are UTF-8; map order is Unicode scalar
// order, which keeps every downstream iteration deterministic.
struct GoodnessTable {
  Measure measure = Measure::frq;
  std::map<std::string, double> entries;
  int max_ngram = 1;
  std::uint64_t min_count = 1;
};

// Log relative frequency: ln(count(w) / positions of length |w|).
// Occurrences are positional (overlaps included).
double score_frq(const Corpus& corpus, std::string_view w);

// Log accessor variety: ln(min(|left accessors|, |right accessors|)),
// word edges contributing boundary sentinels.
double score_av(const Corpus& corpus, std::string_view w);

// Description length gain in bits: corpus cost minus the cost after every
// greedy non-overlapping occurrence of w is replaced by one fresh symbol
// and a single copy of w is appended. Requires |w| >= 2.
double score_dlg(const Corpus& corpus, std::string_view w);

// Scores every within-word n-gram with positional count >= min_count, up to
// corpus.max_ngram. For dlg, multi-character candidates are scored and every
// single-character type is entered at the floor score (the table minimum
// minus ln 2, or 0 when no multi-character entry exists). top_k keeps the
// best-scoring entries (ties broken by byte order), but single characters
// are always retained.
GoodnessTable build_table(const Corpus& corpus, Measure measure,
                          std::uint64_t min_count = 1,
                          std::optional<std::size_t> top_k = std::nullopt);

// Lowest entry score, or 0 for an empty table.
double table_min_score(const GoodnessTable& table);

// Score assigned to single characters missing from the table: the table
// minimum minus ln 2, or 0 for an empty table.
double floor_score(const GoodnessTable& table);

// Incremental description-length scorer over one corpus. score() evaluates
// the replacement arithmetic in O(|w|) using precomputed totals; results
// match materializing the rewritten corpus.
class DlgScorer {
 public:
  explicit DlgScorer(const Corpus& corpus);

  // occurrences must be the greedy non-overlapping count of w.
  double score(std::u32string_view w, std::uint64_t occurrences) const;

  // Description length of the corpus character stream, in bits.
  double corpus_bits() const noexcept { return corpus_bits_; }

 private:
  std::map<char32_t, std::uint64_t> counts_;
  double total_ = 0;      // |X|
  double sum_clgc_ = 0;   // sum of c*lg(c) over character counts
  double corpus_bits_ = 0;
};

}  // namespace subseg

#include "subseg/pipeline.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "subseg/error.hpp"
#include "subseg/unicode.hpp"

namespace subseg {

CompiledModel::CompiledModel(Model model) : model_(std::move(model)) {
  if (model_.algo == Algo::bpe)
    merge_index_.emplace(model_.merges);
  else
    dict_.emplace(model_.table);
}

Segmentation CompiledModel::segment(std::string_view word) const {
  switch (model_.algo) {
    case Algo::viterbi: return viterbi_segment(word, *dict_);
    case Algo::mm: return mm_segment(word, *dict_);
    case Algo::bpe: return merge_index_->apply(word);
  }
  throw Error("unreachable");
}

namespace {

// Shared per-run memo so repeated tokens are segmented once.
class SegmentCache {
 public:
  explicit SegmentCache(const CompiledModel& model) : model_(model) {}

  const std::vector<std::string>& subwords(std::string_view word) {
    const auto it = cache_.find(word);
    if (it != cache_.end()) return it->second;
    auto seg = model_.segment(word);
    return cache_.emplace(std::string(word), std::move(seg.subwords)).first->second;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
    std::size_t operator()(const std::string& s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  const CompiledModel& model_;
  std::unordered_map<std::string, std::vector<std::string>, Hash, std::equal_to<>> cache_;
};

void write_tabbed(std::ostream& out, std::string_view word,
                  const std::vector<std::string>& subwords) {
  out << word << '\t';
  for (std::size_t i = 0; i < subwords.size(); ++i) {
    if (i > 0) out << ' ';
    out << subwords[i];
  }
  out << '\n';
}

}  // namespace

void segment_stream(const CompiledModel& model, std::istream& in, std::ostream& out,
                    OutputFormat format) {
  SegmentCache cache(model);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();

    // Tokens are maximal runs of non-whitespace scalars.
    std::vector<std::string_view> tokens;
    std::size_t offset = 0, word_start = 0;
    bool in_word = false;
    while (offset < line.size()) {
      const std::size_t cp_start = offset;
      const char32_t cp = decode_one_utf8(line, offset);
      if (is_whitespace(cp)) {
        if (in_word) tokens.push_back(std::string_view(line).substr(word_start, cp_start - word_start));
        in_word = false;
      } else if (!in_word) {
        word_start = cp_start;
        in_word = true;
      }
    }
    if (in_word) tokens.push_back(std::string_view(line).substr(word_start));

    if (format == OutputFormat::tabbed) {
      for (const auto token : tokens) write_tabbed(out, token, cache.subwords(token));
    } else {
      bool first_token = true;
      for (const auto token : tokens) {
        if (!first_token) out << ' ';
        first_token = false;
        const auto& subwords = cache.subwords(token);
        for (std::size_t i = 0; i < subwords.size(); ++i) {
          if (i > 0) out << ' ';
          out << subwords[i];
          if (i + 1 < subwords.size()) out << "@@";
        }
      }
      out << '\n';
    }
  }
}

std::string segment_text(const CompiledModel& model, std::string_view text,
                         OutputFormat format) {
  std::istringstream in{std::string(text)};
  std::ostringstream out;
  segment_stream(model, in, out, format);
  return out.str();
}

namespace {

int scalar_length(std::string_view utf8) {
  return static_cast<int>(decode_utf8(utf8).size());
}

}  // namespace

StatsReport stats_report(const CompiledModel& model, const std::optional<Corpus>& corpus) {
  StatsReport report;
  const Model& m = model.model();
  if (m.algo == Algo::bpe) {
    report.entry_count = m.merges.merges.size();
    for (const auto& [l, r] : m.merges.merges)
      report.max_subword_len = std::max(report.max_subword_len, scalar_length(l) + scalar_length(r));
    if (report.entry_count == 0) report.max_subword_len = 1;
    if (corpus) report.vocab_size = vocab_of(m.merges, *corpus).size();
  } else {
    report.entry_count = m.table.entries.size();
    for (const auto& [gram, score] : m.table.entries) {
      (void)score;
      report.max_subword_len = std::max(report.max_subword_len, scalar_length(gram));
    }
  }
  if (corpus && !corpus->empty()) {
    std::uint64_t tokens = 0, pieces = 0;
    for (const auto& [word, count] : corpus->word_counts) {
      tokens += count;
      pieces += count * model.segment(word).subwords.size();
    }
    report.avg_subwords_per_token = static_cast<double>(pieces) / static_cast<double>(tokens);
  }
  return report;
}

double OovReport::oov_fraction() const {
  return test_types == 0 ? 0.0 : static_cast<double>(oov_types) / static_cast<double>(test_types);
}

double OovReport::covered_fraction() const {
  return oov_types == 0 ? 0.0
                        : static_cast<double>(covered_oov_types) / static_cast<double>(oov_types);
}

OovReport oov_report(const CompiledModel& model, const Corpus& train, const Corpus& test) {
  const Model& m = model.model();
  std::unordered_set<std::string> known;
  if (m.algo == Algo::bpe) {
    const SubwordVocab vocab = vocab_of(m.merges, train);
    for (const auto& [subword, id] : vocab.id_of)
      if (id != SubwordVocab::kPadId && id != SubwordVocab::kUnkId) known.insert(subword);
  } else {
    for (const auto& [gram, score] : m.table.entries) {
      (void)score;
      known.insert(gram);
    }
  }

  OovReport report;
  std::uint64_t oov_pieces = 0;
  for (const auto& [word, count] : test.word_counts) {
    (void)count;
    report.test_types += 1;
    if (train.word_counts.contains(word)) continue;
    report.oov_types += 1;
    const Segmentation seg = model.segment(word);
    oov_pieces += seg.subwords.size();
    bool covered = true;
    for (const auto& piece : seg.subwords)
      if (!known.contains(piece)) {
        covered = false;
        break;
      }
    if (covered) report.covered_oov_types += 1;
  }
  if (report.oov_types > 0)
    report.avg_subwords_per_oov =
        static_cast<double>(oov_pieces) / static_cast<double>(report.oov_types);
  return report;
}

}  // namespace subseg

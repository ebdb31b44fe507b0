#include "subseg/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "subseg/error.hpp"

namespace subseg {

std::string_view to_string(Algo a) noexcept {
  switch (a) {
    case Algo::viterbi: return "viterbi";
    case Algo::mm: return "mm";
    case Algo::bpe: return "bpe";
  }
  return "viterbi";
}

std::optional<Algo> algo_from_string(std::string_view name) noexcept {
  if (name == "viterbi") return Algo::viterbi;
  if (name == "mm") return Algo::mm;
  if (name == "bpe") return Algo::bpe;
  return std::nullopt;
}

namespace {

constexpr std::string_view kFormatTag = "SSM1";

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

[[noreturn]] void reject(const std::string& what, std::size_t line) {
  throw ModelFormatError("model file line " + std::to_string(line) + ": " + what, line);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::uint64_t parse_count(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    reject("bad integer '" + std::string(field) + "'", line);
  return value;
}

double parse_score(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(value))
    reject("bad score '" + std::string(field) + "'", line);
  return value;
}

}  // namespace

std::string serialize_model(const Model& model) {
  std::string out;
  out += kFormatTag;
  out += '\t';
  out += to_string(model.measure);
  out += '\t';
  out += to_string(model.algo);
  out += '\t';

  if (model.algo == Algo::bpe) {
    out += std::to_string(model.merges.max_subword_len.value_or(0));
    out += '\t';
    out += std::to_string(model.merges.merges.size());
    out += '\n';
    for (const auto& [l, r] : model.merges.merges) {
      out += l;
      out += '\t';
      out += r;
      out += '\n';
    }
    return out;
  }

  out += std::to_string(model.table.max_ngram);
  out += '\t';
  out += std::to_string(model.table.entries.size());
  out += '\n';

  std::vector<std::pair<std::string_view, double>> ranked;
  ranked.reserve(model.table.entries.size());
  for (const auto& [gram, score] : model.table.entries) {
    if (!std::isfinite(score))
      throw NumericError("non-finite score for subword '" + gram + "'", gram);
    ranked.emplace_back(gram, score);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [gram, score] : ranked) {
    out += gram;
    out += '\t';
    out += format_double(score);
    out += '\n';
  }
  return out;
}

Model parse_model(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      start = text.size();
    } else {
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  if (lines.empty()) reject("empty model file", 1);

  const auto header = split_tabs(lines[0]);
  if (header.size() != 5) reject("header must have 5 tab-separated fields", 1);
  if (header[0] != kFormatTag)
    reject("unknown format tag '" + std::string(header[0]) + "'", 1);
  const auto measure = measure_from_string(header[1]);
  if (!measure) reject("unknown measure '" + std::string(header[1]) + "'", 1);
  const auto algo = algo_from_string(header[2]);
  if (!algo) reject("unknown algorithm '" + std::string(header[2]) + "'", 1);
  const std::uint64_t param = parse_count(header[3], 1);
  const std::uint64_t count = parse_count(header[4], 1);
  if (lines.size() - 1 != count)
    reject("header announces " + std::to_string(count) + " entries but the body has " +
               std::to_string(lines.size() - 1),
           1);

  Model model;
  model.measure = *measure;
  model.algo = *algo;

  if (*algo == Algo::bpe) {
    model.merges.measure = *measure;
    if (param > 0) model.merges.max_subword_len = static_cast<int>(param);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto fields = split_tabs(lines[i]);
      if (fields.size() != 2) reject("merge line must have 2 tab-separated fields", i + 1);
      if (fields[0].empty() || fields[1].empty()) reject("empty merge operand", i + 1);
      model.merges.merges.emplace_back(fields[0], fields[1]);
    }
    return model;
  }

  if (param < 1) reject("max n-gram length must be at least 1", 1);
  model.table.measure = *measure;
  model.table.max_ngram = static_cast<int>(param);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) reject("entry line must have 2 tab-separated fields", i + 1);
    if (fields[0].empty()) reject("empty subword", i + 1);
    const double score = parse_score(fields[1], i + 1);
    if (!model.table.entries.emplace(std::string(fields[0]), score).second)
      reject("duplicate subword '" + std::string(fields[0]) + "'", i + 1);
  }
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open model file for writing: " + path.string());
  const std::string text = serialize_model(model);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing model file: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(text);
}

}  // namespace subseg

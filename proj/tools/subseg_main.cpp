#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subseg/composer.hpp"
#include "subseg/error.hpp"
#include "subseg/pipeline.hpp"

namespace {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

struct TrainOptions {
  std::string input, output, algo = "viterbi", measure = "frq";
  int merges = 1000;
  bool merges_given = false;
  int max_ngram = 8;
  bool max_ngram_given = false;
  std::uint64_t min_count = 1;
  bool min_count_given = false;
  std::optional<std::size_t> top_k;
  std::optional<int> max_subword_len;
};

int run_train(const TrainOptions& opt) {
  const auto algo = subseg::algo_from_string(opt.algo);
  const auto measure = subseg::measure_from_string(opt.measure);
  if (!algo) throw subseg::UsageError("unknown algorithm: " + opt.algo);
  if (!measure) throw subseg::UsageError("unknown measure: " + opt.measure);

  subseg::Model model;
  model.algo = *algo;
  model.measure = *measure;

  if (*algo == subseg::Algo::bpe) {
    if (opt.max_ngram_given)
      throw subseg::UsageError("--max-ngram applies to dictionary algorithms only");
    if (opt.min_count_given || opt.top_k)
      throw subseg::UsageError("--min-count and --top-k apply to dictionary algorithms only");
    const subseg::Corpus corpus = subseg::ingest_file(opt.input, 1);
    model.merges = subseg::train_bpe(corpus, *measure, opt.merges, opt.max_subword_len);
    if (static_cast<int>(model.merges.merges.size()) < opt.merges)
      std::cerr << "note: stopped after " << model.merges.merges.size() << " of " << opt.merges
                << " merges; no eligible pair remained\n";
  } else {
    if (opt.merges_given)
      throw subseg::UsageError("--merges applies to the bpe algorithm only");
    if (opt.max_subword_len)
      throw subseg::UsageError("--max-subword-len applies to the bpe algorithm only");
    const subseg::Corpus corpus = subseg::ingest_file(opt.input, opt.max_ngram);
    model.table = subseg::build_table(corpus, *measure, opt.min_count, opt.top_k);
  }
  subseg::save_model(model, opt.output);
  return 0;
}

struct SegmentOptions {
  std::string model, input, output, format = "tabbed";
};

int run_segment(const SegmentOptions& opt) {
  subseg::OutputFormat format;
  if (opt.format == "tabbed")
    format = subseg::OutputFormat::tabbed;
  else if (opt.format == "marked")
    format = subseg::OutputFormat::marked;
  else
    throw subseg::UsageError("unknown format: " + opt.format);

  const subseg::CompiledModel model(subseg::load_model(opt.model));
  std::ifstream in(opt.input, std::ios::binary);
  if (!in) throw subseg::Error("cannot open input file: " + opt.input);
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw subseg::Error("cannot open output file: " + opt.output);
  subseg::segment_stream(model, in, out, format);
  out.flush();
  if (!out) throw subseg::Error("failed writing output file: " + opt.output);
  return 0;
}

struct StatsOptions {
  std::string model;
  std::optional<std::string> corpus;
};

int run_stats(const StatsOptions& opt) {
  const subseg::CompiledModel model(subseg::load_model(opt.model));
  std::optional<subseg::Corpus> corpus;
  if (opt.corpus) corpus = subseg::ingest_file(*opt.corpus, 1);
  const subseg::StatsReport report = subseg::stats_report(model, corpus);

  std::cout << "algorithm: " << subseg::to_string(model.model().algo) << '\n'
            << "measure: " << subseg::to_string(model.model().measure) << '\n'
            << "entries: " << report.entry_count << '\n'
            << "max subword length: " << report.max_subword_len << '\n';
  if (report.vocab_size) std::cout << "vocab size: " << *report.vocab_size << '\n';
  if (report.avg_subwords_per_token)
    std::cout << "avg subwords per token: " << format_double(*report.avg_subwords_per_token)
              << '\n';
  return 0;
}

struct EvalOovOptions {
  std::string model, train, test;
};

int run_eval_oov(const EvalOovOptions& opt) {
  const subseg::CompiledModel model(subseg::load_model(opt.model));
  const subseg::Corpus train = subseg::ingest_file(opt.train, 1);
  const subseg::Corpus test = subseg::ingest_file(opt.test, 1);
  const subseg::OovReport report = subseg::oov_report(model, train, test);

  std::cout << "test word types: " << report.test_types << '\n'
            << "oov word types: " << report.oov_types << " ("
            << format_double(report.oov_fraction()) << ")\n"
            << "oov covered: " << report.covered_oov_types << " ("
            << format_double(report.covered_fraction()) << ")\n"
            << "avg subwords per oov word: " << format_double(report.avg_subwords_per_oov)
            << '\n';
  return 0;
}

struct GradCheckOptions {
  int embedding_dim = 8;
  int filter_width = 3;
  int filters = 4;
  std::uint64_t seed = 1;
  double epsilon = 1e-4;
};

int run_gradcheck(const GradCheckOptions& opt) {
  if (opt.embedding_dim < 1 || opt.filter_width < 1 || opt.filters < 0)
    throw subseg::UsageError("dimensions must be positive");
  if (!(opt.epsilon > 0)) throw subseg::UsageError("epsilon must be positive");

  // Fixed synthetic word over five distinct subwords.
  subseg::SubwordVocab vocab;
  vocab.id_of = {{std::string(subseg::SubwordVocab::kPadSymbol), 0},
                 {std::string(subseg::SubwordVocab::kUnkSymbol), 1},
                 {"ab", 2}, {"cd", 3}, {"ef", 4}, {"gh", 5}, {"ij", 6}};
  subseg::Segmentation seg;
  seg.word = "abcdefghij";
  seg.subwords = {"ab", "cd", "ef", "gh", "ij"};

  const auto params = subseg::ComposerParams::random(
      vocab.size(), opt.embedding_dim, opt.filter_width, opt.filters,
      subseg::Integration::concat, opt.seed);
  std::mt19937_64 gen(opt.seed ^ 0x9E3779B97F4A7C15ull);
  std::vector<double> word_embedding(static_cast<std::size_t>(opt.filters));
  for (auto& v : word_embedding)
    v = -0.05 + static_cast<double>(gen() >> 11) * 0x1.0p-53 * 0.1;

  const auto result = subseg::grad_check(params, seg, vocab, word_embedding, opt.epsilon);
  std::cout << "max relative error: " << format_double(result.max_rel_error) << '\n'
            << "worst parameter: " << (result.worst_param.empty() ? "none" : result.worst_param)
            << '\n'
            << "pool tie: " << (result.pool_tie ? "yes" : "no") << '\n'
            << "relu kink: " << (result.relu_kink ? "yes" : "no") << '\n';
  return result.max_rel_error < 1e-4 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus-driven subword segmentation toolkit"};
  app.require_subcommand(1);

  TrainOptions train_opt;
  auto* train = app.add_subcommand("train", "Train a segmentation model from a corpus");
  train->add_option("--input", train_opt.input, "Training corpus (UTF-8 text)")->required();
  train->add_option("--output", train_opt.output, "Model file to write")->required();
  train->add_option("--algo", train_opt.algo, "viterbi, mm, or bpe");
  train->add_option("--measure", train_opt.measure, "frq, av, or dlg");
  train->add_option("--merges", train_opt.merges, "Merge operations (bpe)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--max-ngram", train_opt.max_ngram, "Longest candidate (dictionary)")
      ->check(CLI::PositiveNumber);
  train->add_option("--min-count", train_opt.min_count, "Minimum candidate count (dictionary)")
      ->check(CLI::PositiveNumber);
  train->add_option("--top-k", train_opt.top_k, "Keep only the k best entries (dictionary)")
      ->check(CLI::PositiveNumber);
  train->add_option("--max-subword-len", train_opt.max_subword_len,
                    "Longest merge product (bpe)")
      ->check(CLI::PositiveNumber);

  SegmentOptions segment_opt;
  auto* segment = app.add_subcommand("segment", "Segment text with a trained model");
  segment->add_option("--model", segment_opt.model, "Model file")->required();
  segment->add_option("--input", segment_opt.input, "Text to segment")->required();
  segment->add_option("--output", segment_opt.output, "Where to write segments")->required();
  segment->add_option("--format", segment_opt.format, "tabbed or marked");

  StatsOptions stats_opt;
  auto* stats = app.add_subcommand("stats", "Describe a trained model");
  stats->add_option("--model", stats_opt.model, "Model file")->required();
  stats->add_option("--corpus", stats_opt.corpus, "Corpus for usage statistics");

  EvalOovOptions eval_opt;
  auto* eval_oov = app.add_subcommand("eval-oov", "Out-of-vocabulary coverage on a split");
  eval_oov->add_option("--model", eval_opt.model, "Model file")->required();
  eval_oov->add_option("--train", eval_opt.train, "Training-side corpus")->required();
  eval_oov->add_option("--test", eval_opt.test, "Held-out corpus")->required();

  GradCheckOptions grad_opt;
  auto* gradcheck = app.add_subcommand("gradcheck", "Verify composer gradients numerically");
  gradcheck->add_option("--embedding-dim", grad_opt.embedding_dim, "Embedding dimension");
  gradcheck->add_option("--filter-width", grad_opt.filter_width, "Convolution width");
  gradcheck->add_option("--filters", grad_opt.filters, "Filter count");
  gradcheck->add_option("--seed", grad_opt.seed, "Random seed");
  gradcheck->add_option("--epsilon", grad_opt.epsilon, "Finite difference step");

  // Track which optional flags were supplied so mismatched combinations can
  // be rejected per algorithm.
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  train_opt.merges_given = train->count("--merges") > 0;
  train_opt.max_ngram_given = train->count("--max-ngram") > 0;
  train_opt.min_count_given = train->count("--min-count") > 0;

  try {
    if (train->parsed()) return run_train(train_opt);
    if (segment->parsed()) return run_segment(segment_opt);
    if (stats->parsed()) return run_stats(stats_opt);
    if (eval_oov->parsed()) return run_eval_oov(eval_opt);
    if (gradcheck->parsed()) return run_gradcheck(grad_opt);
  } catch (const subseg::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

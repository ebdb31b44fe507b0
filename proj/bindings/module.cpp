// Python bindings for the segmentation core. Containers cross the boundary
// by value; span parameters are wrapped so plain lists work.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <span>
#include <sstream>

#include "subseg/bpe.hpp"
#include "subseg/composer.hpp"
#include "subseg/corpus.hpp"
#include "subseg/error.hpp"
#include "subseg/goodness.hpp"
#include "subseg/model.hpp"
#include "subseg/pipeline.hpp"
#include "subseg/segmenter.hpp"
#include "subseg/unicode.hpp"

namespace py = pybind11;
using namespace subseg;

namespace {

void check_index(const Matrix& m, int r, int c) {
  if (r < 0 || c < 0 || r >= m.rows || c >= m.cols)
    throw py::index_error("matrix index out of range");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Corpus-driven unsupervised subword segmentation core";

  py::register_exception<Error>(m, "SubsegError");

  py::enum_<Measure>(m, "Measure")
      .value("frq", Measure::frq)
      .value("av", Measure::av)
      .value("dlg", Measure::dlg);

  py::enum_<Algo>(m, "Algo")
      .value("viterbi", Algo::viterbi)
      .value("mm", Algo::mm)
      .value("bpe", Algo::bpe);

  py::enum_<OutputFormat>(m, "OutputFormat")
      .value("tabbed", OutputFormat::tabbed)
      .value("marked", OutputFormat::marked);

  py::enum_<Integration>(m, "Integration")
      .value("concat", Integration::concat)
      .value("sum", Integration::sum)
      .value("mul", Integration::mul);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_readonly("word_counts", &Corpus::word_counts)
      .def_property_readonly("char_counts",
                             [](const Corpus& c) {
                               std::map<std::string, std::uint64_t> out;
                               for (const auto& [cp, n] : c.char_counts)
                                 out.emplace(encode_utf8(cp), n);
                               return out;
                             })
      .def_readonly("total_chars", &Corpus::total_chars)
      .def_readonly("total_words", &Corpus::total_words)
      .def_readonly("max_ngram", &Corpus::max_ngram)
      .def("empty", &Corpus::empty)
      .def("__repr__", [](const Corpus& c) {
        std::ostringstream s;
        s << "Corpus(word_types=" << c.word_counts.size() << ", total_words=" << c.total_words
          << ", total_chars=" << c.total_chars << ")";
        return s.str();
      });

  m.def("ingest", py::overload_cast<std::string_view, int>(&ingest), py::arg("text"),
        py::arg("max_ngram") = 8);
  m.def("ingest_file", &ingest_file, py::arg("path"), py::arg("max_ngram") = 8);
  m.def("to_text", &to_text, py::arg("corpus"));

  py::class_<GoodnessTable>(m, "GoodnessTable")
      .def(py::init<>())
      .def_readwrite("measure", &GoodnessTable::measure)
      .def_readwrite("entries", &GoodnessTable::entries)
      .def_readwrite("max_ngram", &GoodnessTable::max_ngram)
      .def_readwrite("min_count", &GoodnessTable::min_count)
      .def("__len__", [](const GoodnessTable& t) { return t.entries.size(); });

  m.def("build_table", &build_table, py::arg("corpus"), py::arg("measure"),
        py::arg("min_count") = std::uint64_t{1},
        py::arg("top_k") = std::optional<std::size_t>{});
  m.def("table_min_score", &table_min_score, py::arg("table"));
  m.def("floor_score", &floor_score, py::arg("table"));
  m.def("score_frq", &score_frq, py::arg("corpus"), py::arg("w"));
  m.def("score_av", &score_av, py::arg("corpus"), py::arg("w"));
  m.def("score_dlg", &score_dlg, py::arg("corpus"), py::arg("w"));

  py::class_<Segmentation>(m, "Segmentation")
      .def(py::init([](std::string word, std::vector<std::string> subwords, double score) {
             Segmentation s;
             s.word = std::move(word);
             s.subwords = std::move(subwords);
             s.score = score;
             return s;
           }),
           py::arg("word") = std::string(), py::arg("subwords") = std::vector<std::string>{},
           py::arg("score") = 0.0)
      .def_readwrite("word", &Segmentation::word)
      .def_readwrite("subwords", &Segmentation::subwords)
      .def_readwrite("score", &Segmentation::score)
      .def("__repr__", [](const Segmentation& s) {
        std::ostringstream out;
        out << "Segmentation(word='" << s.word << "', subwords=[";
        for (std::size_t i = 0; i < s.subwords.size(); ++i)
          out << (i ? ", '" : "'") << s.subwords[i] << "'";
        out << "], score=" << s.score << ")";
        return out.str();
      });

  m.def("viterbi_segment",
        py::overload_cast<std::string_view, const GoodnessTable&>(&viterbi_segment),
        py::arg("word"), py::arg("table"));
  m.def("mm_segment", py::overload_cast<std::string_view, const GoodnessTable&>(&mm_segment),
        py::arg("word"), py::arg("table"));
  m.def("brute_force_segment",
        py::overload_cast<std::string_view, const GoodnessTable&>(&brute_force_segment),
        py::arg("word"), py::arg("table"));

  py::class_<MergeList>(m, "MergeList")
      .def(py::init<>())
      .def_readwrite("measure", &MergeList::measure)
      .def_readwrite("merges", &MergeList::merges)
      .def_readwrite("max_subword_len", &MergeList::max_subword_len)
      .def("__len__", [](const MergeList& ml) { return ml.merges.size(); });

  m.def("train_bpe", &train_bpe, py::arg("corpus"), py::arg("measure"), py::arg("num_merges"),
        py::arg("max_subword_len") = std::optional<int>{});
  m.def("apply_bpe", &apply_bpe, py::arg("word"), py::arg("merges"));

  py::class_<SubwordVocab>(m, "SubwordVocab")
      .def(py::init<>())
      .def_readonly_static("PAD_ID", &SubwordVocab::kPadId)
      .def_readonly_static("UNK_ID", &SubwordVocab::kUnkId)
      .def_property_readonly_static(
          "PAD_SYMBOL", [](py::object) { return std::string(SubwordVocab::kPadSymbol); })
      .def_property_readonly_static(
          "UNK_SYMBOL", [](py::object) { return std::string(SubwordVocab::kUnkSymbol); })
      .def_readwrite("id_of", &SubwordVocab::id_of)
      .def("id", &SubwordVocab::id, py::arg("subword"))
      .def("size", &SubwordVocab::size)
      .def("__len__", &SubwordVocab::size);

  m.def("vocab_of", &vocab_of, py::arg("merges"), py::arg("corpus"));

  py::class_<Model>(m, "Model")
      .def(py::init<>())
      .def_readwrite("algo", &Model::algo)
      .def_readwrite("measure", &Model::measure)
      .def_readwrite("table", &Model::table)
      .def_readwrite("merges", &Model::merges);

  m.def("serialize_model", &serialize_model, py::arg("model"));
  m.def("parse_model", &parse_model, py::arg("text"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));

  py::class_<CompiledModel>(m, "CompiledModel")
      .def(py::init<Model>(), py::arg("model"))
      .def_property_readonly("model",
                             [](const CompiledModel& c) -> Model { return c.model(); })
      .def("segment", &CompiledModel::segment, py::arg("word"));

  m.def("segment_text", &segment_text, py::arg("model"), py::arg("text"), py::arg("format"));

  py::class_<StatsReport>(m, "StatsReport")
      .def_readonly("entry_count", &StatsReport::entry_count)
      .def_readonly("max_subword_len", &StatsReport::max_subword_len)
      .def_readonly("vocab_size", &StatsReport::vocab_size)
      .def_readonly("avg_subwords_per_token", &StatsReport::avg_subwords_per_token);

  m.def("stats_report", &stats_report, py::arg("model"),
        py::arg("corpus") = std::optional<Corpus>{});

  py::class_<OovReport>(m, "OovReport")
      .def_readonly("test_types", &OovReport::test_types)
      .def_readonly("oov_types", &OovReport::oov_types)
      .def_readonly("covered_oov_types", &OovReport::covered_oov_types)
      .def_readonly("avg_subwords_per_oov", &OovReport::avg_subwords_per_oov)
      .def("oov_fraction", &OovReport::oov_fraction)
      .def("covered_fraction", &OovReport::covered_fraction);

  m.def("oov_report", &oov_report, py::arg("model"), py::arg("train"), py::arg("test"));

  py::class_<Matrix>(m, "Matrix")
      .def(py::init<>())
      .def(py::init<int, int>(), py::arg("rows"), py::arg("cols"))
      .def_readonly("rows", &Matrix::rows)
      .def_readonly("cols", &Matrix::cols)
      .def_readwrite("data", &Matrix::data)
      .def("at",
           [](const Matrix& mt, int r, int c) {
             check_index(mt, r, c);
             return mt.at(r, c);
           })
      .def("set_at", [](Matrix& mt, int r, int c, double v) {
        check_index(mt, r, c);
        mt.at(r, c) = v;
      });

  py::class_<ComposerParams>(m, "ComposerParams")
      .def(py::init<>())
      .def_readwrite("subword_embeddings", &ComposerParams::subword_embeddings)
      .def_readwrite("filters", &ComposerParams::filters)
      .def_readwrite("filter_bias", &ComposerParams::filter_bias)
      .def_readwrite("highway_linear", &ComposerParams::highway_linear)
      .def_readwrite("highway_gate", &ComposerParams::highway_gate)
      .def_readwrite("highway_linear_bias", &ComposerParams::highway_linear_bias)
      .def_readwrite("highway_gate_bias", &ComposerParams::highway_gate_bias)
      .def_readwrite("integration", &ComposerParams::integration)
      .def("embedding_dim", &ComposerParams::embedding_dim)
      .def("filter_width", &ComposerParams::filter_width)
      .def("feature_dim", &ComposerParams::feature_dim)
      .def("validate", &ComposerParams::validate)
      .def_static("random", &ComposerParams::random, py::arg("vocab_size"), py::arg("d"),
                  py::arg("w"), py::arg("h"), py::arg("integration"), py::arg("seed"));

  m.def("subword_matrix", &subword_matrix, py::arg("seg"), py::arg("vocab"), py::arg("params"));
  m.def("conv_maxpool", &conv_maxpool, py::arg("columns"), py::arg("params"));
  m.def(
      "highway",
      [](const std::vector<double>& y, const ComposerParams& p) {
        return highway(std::span<const double>(y), p);
      },
      py::arg("y"), py::arg("params"));
  m.def(
      "integrate",
      [](const std::vector<double>& we, const std::vector<double>& se, Integration mode) {
        return integrate(std::span<const double>(we), std::span<const double>(se), mode);
      },
      py::arg("word_embedding"), py::arg("subword_embedding"), py::arg("integration"));

  py::class_<ComposedEmbedding>(m, "ComposedEmbedding")
      .def_readonly("subword_side", &ComposedEmbedding::subword_side)
      .def_readonly("combined", &ComposedEmbedding::combined);

  m.def(
      "compose",
      [](const Segmentation& seg, const SubwordVocab& vocab, const std::vector<double>& we,
         const ComposerParams& p) { return compose(seg, vocab, std::span<const double>(we), p); },
      py::arg("seg"), py::arg("vocab"), py::arg("word_embedding"), py::arg("params"));

  py::class_<GradCheckEntry>(m, "GradCheckEntry")
      .def_readonly("param", &GradCheckEntry::param)
      .def_readonly("analytic", &GradCheckEntry::analytic)
      .def_readonly("numeric", &GradCheckEntry::numeric)
      .def_readonly("rel_error", &GradCheckEntry::rel_error)
      .def_readonly("excluded", &GradCheckEntry::excluded);

  py::class_<GradCheckResult>(m, "GradCheckResult")
      .def_readonly("max_rel_error", &GradCheckResult::max_rel_error)
      .def_readonly("worst_param", &GradCheckResult::worst_param)
      .def_readonly("pool_tie", &GradCheckResult::pool_tie)
      .def_readonly("relu_kink", &GradCheckResult::relu_kink)
      .def_readonly("entries", &GradCheckResult::entries);

  m.def(
      "grad_check",
      [](const ComposerParams& p, const Segmentation& seg, const SubwordVocab& vocab,
         const std::vector<double>& we, double epsilon) {
        return grad_check(p, seg, vocab, std::span<const double>(we), epsilon);
      },
      py::arg("params"), py::arg("seg"), py::arg("vocab"), py::arg("word_embedding"),
      py::arg("epsilon"));
}

"""Corpus-driven unsupervised subword segmentation toolkit."""

from ._core import (
    Algo,
    CompiledModel,
    ComposedEmbedding,
    ComposerParams,
    Corpus,
    GoodnessTable,
    GradCheckEntry,
    GradCheckResult,
    Integration,
    Matrix,
    Measure,
    MergeList,
    Model,
    OovReport,
    OutputFormat,
    Segmentation,
    StatsReport,
    SubsegError,
    SubwordVocab,
    apply_bpe,
    brute_force_segment,
    build_table,
    compose,
    conv_maxpool,
    floor_score,
    grad_check,
    highway,
    ingest,
    ingest_file,
    integrate,
    load_model,
    mm_segment,
    oov_report,
    parse_model,
    save_model,
    score_av,
    score_dlg,
    score_frq,
    segment_text,
    serialize_model,
    stats_report,
    subword_matrix,
    table_min_score,
    to_text,
    train_bpe,
    viterbi_segment,
    vocab_of,
)

__version__ = "0.1.0"

__all__ = [
    "Algo",
    "CompiledModel",
    "ComposedEmbedding",
    "ComposerParams",
    "Corpus",
    "GoodnessTable",
    "GradCheckEntry",
    "GradCheckResult",
    "Integration",
    "Matrix",
    "Measure",
    "MergeList",
    "Model",
    "OovReport",
    "OutputFormat",
    "Segmentation",
    "StatsReport",
    "SubsegError",
    "SubwordVocab",
    "apply_bpe",
    "brute_force_segment",
    "build_table",
    "compose",
    "conv_maxpool",
    "floor_score",
    "grad_check",
    "highway",
    "ingest",
    "ingest_file",
    "integrate",
    "load_model",
    "mm_segment",
    "oov_report",
    "parse_model",
    "save_model",
    "score_av",
    "score_dlg",
    "score_frq",
    "segment_text",
    "serialize_model",
    "stats_report",
    "subword_matrix",
    "table_min_score",
    "to_text",
    "train_bpe",
    "viterbi_segment",
    "vocab_of",
]

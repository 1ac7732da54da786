"""Naive Bayes classifiers (categorical, Bernoulli, multinomial, Gaussian)
with a tokenize / stop-word / stem / n-gram text pipeline."""

from ._core import (
    FormatError,
    Model,
    ParseError,
    PipelineConfig,
    PosteriorReport,
    SparseVector,
    StopWordMode,
    Vocabulary,
    WeightingMode,
    build_stop_list,
    idf,
    load_corpus,
    ngrams,
    parse_corpus,
    porter_stem,
    run_pipeline,
    split_indices,
    tokenize,
    vectorize,
)

__all__ = [
    "FormatError",
    "Model",
    "ParseError",
    "PipelineConfig",
    "PosteriorReport",
    "SparseVector",
    "StopWordMode",
    "Vocabulary",
    "WeightingMode",
    "build_stop_list",
    "idf",
    "load_corpus",
    "ngrams",
    "parse_corpus",
    "porter_stem",
    "run_pipeline",
    "split_indices",
    "tokenize",
    "vectorize",
]

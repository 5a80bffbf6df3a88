"""Geometry problem toolkit: clause parsing, program execution, augmentation, corpus and evaluation."""

from ._core import (
    GeoprogError,
    Problem,
    augment,
    candidate_vocab,
    dataset_stats,
    evaluate,
    execute,
    load_dataset,
    masked_samples,
    normalize_program,
    shuffle_clauses,
    tokenize,
)

__all__ = [
    "GeoprogError",
    "Problem",
    "augment",
    "candidate_vocab",
    "dataset_stats",
    "evaluate",
    "execute",
    "load_dataset",
    "masked_samples",
    "normalize_program",
    "shuffle_clauses",
    "tokenize",
]

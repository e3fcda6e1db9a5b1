"""Item-writing flaw detection for multiple-choice questions."""

from ._iwf import (
    InputError,
    Question,
    build_prompt,
    chi_square,
    cohen_kappa,
    criteria,
    criterion_f1,
    exact_match_ratio,
    hamming_loss,
    judge_mock,
    lint,
    lint_corpus,
    match_percent,
    micro_f1,
    paired_t,
    parse_response,
    pearson_r,
    verdict,
)

__all__ = [
    "InputError",
    "Question",
    "build_prompt",
    "chi_square",
    "cohen_kappa",
    "criteria",
    "criterion_f1",
    "exact_match_ratio",
    "hamming_loss",
    "judge_mock",
    "lint",
    "lint_corpus",
    "match_percent",
    "micro_f1",
    "paired_t",
    "parse_response",
    "pearson_r",
    "verdict",
]

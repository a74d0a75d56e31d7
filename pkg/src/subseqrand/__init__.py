"""Finite-scale tools for subsequence selection, arithmetic coding under
computable measures, and compressibility estimators."""

from __future__ import annotations

__version__ = "0.1.0"

from ._accel import BACKEND
from .bitseq import BitString, SelectionMask, complement, merge, ones_density, select, tau_indices
from .coder import CodeStream, arith_decode, arith_encode, ideal_length, pad_or_truncate, reconstruct_selected
from .errors import ConfigError, RejectedInputError, TruncatedCodeError, UndefinedInformationError
from .estimators import (
    ComplexityReport,
    EmpiricalBlockMeasure,
    analyze,
    block_frequencies,
    conditional_test_level,
    distinct_blocks,
    estimate_bernoulli_q,
    lz78_parse,
    lz78_rate,
    normality_deviation,
    plugin_entropy_rate,
)
from .generators import GeneratorSpec, bernoulli_sample, champernowne, periodic, sturmian
from .measures import Measure, bernoulli_measure, markov_measure, measure_from_descriptor, prob, prob_q
from .experiments import ExperimentConfig, ExperimentResult, default_config, run_experiment, run_many

__all__ = [
    "__version__",
    "BACKEND",
    "BitString",
    "SelectionMask",
    "complement",
    "merge",
    "ones_density",
    "select",
    "tau_indices",
    "CodeStream",
    "arith_decode",
    "arith_encode",
    "ideal_length",
    "pad_or_truncate",
    "reconstruct_selected",
    "ConfigError",
    "RejectedInputError",
    "TruncatedCodeError",
    "UndefinedInformationError",
    "ComplexityReport",
    "EmpiricalBlockMeasure",
    "analyze",
    "block_frequencies",
    "conditional_test_level",
    "distinct_blocks",
    "estimate_bernoulli_q",
    "lz78_parse",
    "lz78_rate",
    "normality_deviation",
    "plugin_entropy_rate",
    "GeneratorSpec",
    "bernoulli_sample",
    "champernowne",
    "periodic",
    "sturmian",
    "Measure",
    "bernoulli_measure",
    "markov_measure",
    "measure_from_descriptor",
    "prob",
    "prob_q",
    "ExperimentConfig",
    "ExperimentResult",
    "default_config",
    "run_experiment",
    "run_many",
]

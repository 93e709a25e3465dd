"""Early rumor detection for micro-blog event streams.

The pipeline scores single tweets with a small convolutional-recurrent
network, assembles per-interval surface/crowd/epidemic features into
time-series vectors, and classifies events as rumor or news with a random
forest, evaluated at hourly cutoffs from the event's start.
"""

__version__ = "0.1.0"

from .corpus import (
    Event,
    EventWindow,
    IntervalBucket,
    Tweet,
    UserProfile,
    bucket_intervals,
    load_corpus,
    parse_corpus,
    save_corpus,
    select_event_window,
    serialize_corpus,
    truncate_at_cutoff,
)
from .credibility import CredibilityNetwork, credit_score, encode_tweet
from .dsts import (
    DstsTransformer,
    IntervalFeatureMatrix,
    build_dsts_vector,
    slope_blocks,
    zscore_normalize,
)
from .epidemic import (
    EpiFitResult,
    SeizParams,
    SisParams,
    SpikeMParams,
    fit_model,
    simulate_seiz,
    simulate_sis,
    simulate_spikem,
)
from .errors import DataError, NumericalError, ParseError, RumorkitError
from .evaluation import cross_validate
from .features import (
    crowd_wisdom,
    extract_interval_features,
    extract_single_tweet_features,
    polarity_score,
)
from .forest import RandomForestRumorClassifier, TreeNode, leaf
from .lexicons import DomainMetadata, Lexicons, default_lexicons, load_lexicons
from .optimize import nelder_mead
from .pipeline import (
    EvaluationReport,
    PipelineConfig,
    evaluate_over_time,
    run_pipeline,
)
from .svm import RbfSvmClassifier
from .synth import SynthConfig, generate_synthetic_corpus

__all__ = [
    "CredibilityNetwork",
    "DataError",
    "DomainMetadata",
    "DstsTransformer",
    "EpiFitResult",
    "EvaluationReport",
    "Event",
    "EventWindow",
    "IntervalBucket",
    "IntervalFeatureMatrix",
    "Lexicons",
    "NumericalError",
    "ParseError",
    "PipelineConfig",
    "RandomForestRumorClassifier",
    "RbfSvmClassifier",
    "RumorkitError",
    "SeizParams",
    "SisParams",
    "SpikeMParams",
    "SynthConfig",
    "TreeNode",
    "Tweet",
    "UserProfile",
    "bucket_intervals",
    "build_dsts_vector",
    "credit_score",
    "cross_validate",
    "crowd_wisdom",
    "default_lexicons",
    "encode_tweet",
    "evaluate_over_time",
    "extract_interval_features",
    "extract_single_tweet_features",
    "fit_model",
    "generate_synthetic_corpus",
    "leaf",
    "load_corpus",
    "load_lexicons",
    "nelder_mead",
    "parse_corpus",
    "polarity_score",
    "run_pipeline",
    "save_corpus",
    "select_event_window",
    "serialize_corpus",
    "simulate_seiz",
    "simulate_sis",
    "simulate_spikem",
    "slope_blocks",
    "truncate_at_cutoff",
    "zscore_normalize",
]

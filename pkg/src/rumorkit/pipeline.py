"""End-to-end cascade: window selection, per-interval feature assembly,
credibility scoring, epidemic fits, time-series vectors, classification,
and the hourly-cutoff evaluation.

The credibility network is pre-trained on a seed-determined subset of
events that is disjoint from the classification set (tweet labels inherit
the event label); mixing the two sides is rejected as leakage. At each
cutoff the events are truncated first, so nothing posted after the cutoff
can influence features or predictions.
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .corpus import bucket_intervals, select_event_window, truncate_at_cutoff
from .credibility import CredibilityNetwork, credit_score
from .dsts import DstsTransformer, IntervalFeatureMatrix, observed_interval_count
from .epidemic import FitConfig, fit_model, population_proxy
from .errors import DataError
from .evaluation import cross_validate
from .features import (
    catalog_names,
    crowd_wisdom,
    extract_interval_features,
    full_catalog,
)
from .forest import RandomForestRumorClassifier
from .lexicons import default_lexicons, empty_domain_metadata
from .svm import RbfSvmClassifier

DEFAULT_CUTOFFS = (1.0, 6.0, 12.0, 18.0, 24.0, 30.0, 36.0, 42.0, 48.0)


@dataclass(frozen=True)
class PipelineConfig:
    intervals: int = 48
    cutoffs: tuple = DEFAULT_CUTOFFS
    seed: int = 0
    surface: bool = True
    credit: bool = True
    crowd: bool = True
    epi: bool = True
    spikem: bool = True
    model: str = "rf"
    n_trees: int = 350
    folds: int = 10
    pretrain_fraction: float = 1.0 / 3.0
    normalize: bool = True
    credit_params: dict = field(default_factory=dict)
    epi_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(not 0 < h <= 48 for h in self.cutoffs):
            raise DataError("cutoff hours must lie in (0, 48]")
        if self.model not in ("rf", "svm"):
            raise DataError(f"unknown classifier {self.model!r}")
        if not self.surface and not (self.credit or self.crowd or self.epi):
            raise DataError("at least one feature group must be enabled")

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["cutoffs"] = list(self.cutoffs)
        return d

    def config_hash(self):
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]

    def feature_names(self):
        return catalog_names(
            surface=self.surface,
            epi=self.epi,
            spikem=self.spikem,
            crowd=self.crowd,
            credit=self.credit,
        )


def prepare_events(events, intervals):
    """Attach observation windows (idempotent for matching interval counts)."""
    out = []
    for event in events:
        if event.window is not None and event.window.interval_count == intervals:
            out.append(event)
        else:
            out.append(
                event.with_window(select_event_window(event.tweets, intervals))
            )
    return out


def split_pretrain(events, fraction, seed):
    """Seed-determined stratified split into (pretrain, classify) halves of
    the event list; both sides keep corpus order."""
    rng = np.random.default_rng(seed)
    chosen = set()
    for label in ("rumor", "news"):
        positions = [i for i, e in enumerate(events) if e.label == label]
        take = int(round(fraction * len(positions)))
        shuffled = [positions[j] for j in rng.permutation(len(positions))]
        chosen.update(shuffled[:take])
    pretrain = [e for i, e in enumerate(events) if i in chosen]
    classify = [e for i, e in enumerate(events) if i not in chosen]
    return pretrain, classify


def guard_disjoint(pretrain, classify):
    overlap = {e.event_id for e in pretrain} & {e.event_id for e in classify}
    if overlap:
        raise DataError(
            f"pretraining and classification events overlap: {sorted(overlap)[:5]}"
        )


def train_credibility(pretrain_events, config):
    texts, labels = [], []
    for event in pretrain_events:
        for tw in event.tweets:
            texts.append(tw.text)
            labels.append(event.label)
    net = CredibilityNetwork(seed=config.seed, **config.credit_params)
    net.fit(texts, labels)
    return net


def event_feature_matrix(
    event, config, lex, meta, credit_model=None, cutoff_hours=48.0
):
    """One event's interval-by-feature matrix at a cutoff, catalog order."""
    window = event.window
    n = window.interval_count
    interval_hours = window.interval_hours
    truncated = truncate_at_cutoff(event, cutoff_hours)
    buckets = bucket_intervals(truncated)
    k = observed_interval_count(n, interval_hours, cutoff_hours)
    observed = np.arange(n) < k

    columns = {}
    empties = np.zeros(n, dtype=bool)
    if config.surface:
        per_bucket = [
            extract_interval_features(buckets[t], lex, meta) for t in range(k)
        ]
        empties[:k] = [f.empty for f in per_bucket]
        for desc in full_catalog(epi=False, spikem=False, crowd=False, credit=False):
            col = np.zeros(n)
            col[:k] = [f.values[desc.name] for f in per_bucket]
            columns[desc.name] = col
    if config.epi or config.spikem:
        counts = np.array([len(b.tweets) for b in buckets[:k]], dtype=np.float64)
        n_pop = population_proxy(truncated)
        fit_cfg = FitConfig(seed=config.seed, **config.epi_params)
        models = (["sis", "seiz"] if config.epi else []) + (
            ["spikem"] if config.spikem else []
        )
        for model_name in models:
            result = fit_model(counts, model_name, interval_hours, n_pop, fit_cfg)
            for name, value in result.feature_values().items():
                col = np.zeros(n)
                col[:k] = value
                columns[name] = col
    if config.crowd:
        col = np.zeros(n)
        col[:k] = [crowd_wisdom(buckets[t].tweets, lex) for t in range(k)]
        columns["CrowdWisdom"] = col
    if config.credit:
        if credit_model is None:
            raise DataError("credit feature enabled but no credibility model given")
        series = credit_score(credit_model, buckets[:k])
        col = np.zeros(n)
        col[:k] = series.values
        columns["CreditScore"] = col

    names = config.feature_names()
    values = np.column_stack([columns[name] for name in names])
    return IntervalFeatureMatrix(
        event_id=event.event_id,
        values=values,
        feature_names=names,
        interval_hours=interval_hours,
        label=event.label,
        observed=observed,
        cutoff_hours=cutoff_hours,
        empty_intervals=empties,
    )


def drop_feature(matrices, name):
    """Column-subset copies without one feature (ablation helper)."""
    out = []
    for m in matrices:
        keep = [i for i, n in enumerate(m.feature_names) if n != name]
        out.append(
            IntervalFeatureMatrix(
                event_id=m.event_id,
                values=m.values[:, keep],
                feature_names=[m.feature_names[i] for i in keep],
                interval_hours=m.interval_hours,
                label=m.label,
                observed=m.observed.copy(),
                cutoff_hours=m.cutoff_hours,
                empty_intervals=m.empty_intervals,
            )
        )
    return out


def make_classifier(config):
    if config.model == "svm":
        return RbfSvmClassifier(seed=config.seed)
    return RandomForestRumorClassifier(n_trees=config.n_trees, seed=config.seed)


def _vectors(matrices, config):
    transformer = DstsTransformer(normalize=config.normalize).fit(matrices)
    return transformer.transform(matrices), transformer.column_names()


@dataclass
class PipelineResult:
    event_ids: list
    labels: list
    predicted: np.ndarray
    p_rumor: np.ndarray
    mean_accuracy: float
    fold_accuracies: list
    column_names: list


def run_pipeline(config, events, lex=None, meta=None):
    """Cutoff-free (48 h) cascade returning out-of-fold predictions."""
    lex = lex or default_lexicons()
    meta = meta or empty_domain_metadata()
    events = prepare_events(events, config.intervals)
    pretrain, classify = split_pretrain(events, config.pretrain_fraction, config.seed)
    guard_disjoint(pretrain, classify)
    credit_model = train_credibility(pretrain, config) if config.credit else None
    matrices = [
        event_feature_matrix(e, config, lex, meta, credit_model, 48.0)
        for e in classify
    ]
    X, columns = _vectors(matrices, config)
    y = np.array([e.label for e in classify])
    ids = [e.event_id for e in classify]
    cv = cross_validate(
        X, y, ids, lambda: make_classifier(config), config.folds, config.seed
    )
    return PipelineResult(
        event_ids=ids,
        labels=list(y),
        predicted=cv.predicted,
        p_rumor=cv.p_rumor,
        mean_accuracy=cv.mean_accuracy,
        fold_accuracies=cv.fold_accuracies,
        column_names=columns,
    )


@dataclass
class EvaluationReport:
    cutoffs: list
    accuracies: list
    fold_accuracies: list
    importance: dict            # cutoff -> ranked (group, importance) pairs
    ablation_accuracies: list | None
    metadata: dict

    def to_dict(self):
        return {
            "cutoffs": self.cutoffs,
            "accuracies": self.accuracies,
            "fold_accuracies": self.fold_accuracies,
            "importance": {
                str(c): [[g, v] for g, v in ranks]
                for c, ranks in self.importance.items()
            },
            "ablation_accuracies": self.ablation_accuracies,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            cutoffs=d["cutoffs"],
            accuracies=d["accuracies"],
            fold_accuracies=d["fold_accuracies"],
            importance={
                float(c): [(g, v) for g, v in ranks]
                for c, ranks in d["importance"].items()
            },
            ablation_accuracies=d.get("ablation_accuracies"),
            metadata=d["metadata"],
        )


def evaluate_over_time(config, events, lex=None, meta=None, ablation=False):
    """Truncate-rebuild-classify at every cutoff; optionally repeat without
    the CreditScore column for the ablation comparison."""
    lex = lex or default_lexicons()
    meta = meta or empty_domain_metadata()
    events = prepare_events(events, config.intervals)
    pretrain, classify = split_pretrain(events, config.pretrain_fraction, config.seed)
    guard_disjoint(pretrain, classify)
    credit_model = train_credibility(pretrain, config) if config.credit else None
    y = np.array([e.label for e in classify])
    ids = [e.event_id for e in classify]

    accuracies, fold_accs, importance = [], [], {}
    ablation_accs = [] if (ablation and config.credit) else None
    for cutoff in config.cutoffs:
        matrices = [
            event_feature_matrix(e, config, lex, meta, credit_model, cutoff)
            for e in classify
        ]
        X, columns = _vectors(matrices, config)
        cv = cross_validate(
            X, y, ids, lambda: make_classifier(config), config.folds, config.seed
        )
        accuracies.append(cv.mean_accuracy)
        fold_accs.append(cv.fold_accuracies)
        ranker = RandomForestRumorClassifier(
            n_trees=config.n_trees, seed=config.seed
        ).fit(X, y)
        importance[cutoff] = ranker.grouped_importance(columns)
        if ablation_accs is not None:
            bare = drop_feature(matrices, "CreditScore")
            Xb, _ = _vectors(bare, config)
            cvb = cross_validate(
                Xb, y, ids, lambda: make_classifier(config), config.folds, config.seed
            )
            ablation_accs.append(cvb.mean_accuracy)

    metadata = {
        "seed": config.seed,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "version": __version__,
        "n_events": len(events),
        "n_classify": len(classify),
    }
    return EvaluationReport(
        cutoffs=list(config.cutoffs),
        accuracies=accuracies,
        fold_accuracies=fold_accs,
        importance=importance,
        ablation_accuracies=ablation_accs,
        metadata=metadata,
    )

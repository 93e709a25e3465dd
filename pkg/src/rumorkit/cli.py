"""Command-line interface.

Subcommands mirror the pipeline stages so each intermediate artifact is a
plain CSV: synth -> features / score-credit / fit-epi -> build-dsts ->
train / predict / importance, plus the orchestrated evaluate + report pair.

Global flags may also come from a `--config` file of key=value lines;
precedence is command line > config file > built-in default. Exit codes:
0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import csv
import functools
import os
import sys

import click
import numpy as np

from .corpus import bucket_intervals, load_corpus, save_corpus, truncate_at_cutoff
from .credibility import CredibilityNetwork, credit_score
from .dsts import DstsTransformer, IntervalFeatureMatrix, observed_interval_count
from .epidemic import FitConfig, fit_model, population_proxy
from .errors import DataError, NumericalError, RumorkitError
from .features import (
    EPI_FEATURES,
    SPIKEM_FEATURES,
    catalog_names,
    crowd_wisdom,
    extract_interval_features,
)
from .forest import RandomForestRumorClassifier
from .lexicons import default_lexicons, empty_domain_metadata, load_domain_metadata, load_lexicons
from .persistence import (
    load_classifier,
    load_credibility,
    save_credibility,
    save_forest,
    save_svm,
)
from .pipeline import (
    DEFAULT_CUTOFFS,
    PipelineConfig,
    evaluate_over_time,
    prepare_events,
)
from .report import (
    load_report_json,
    write_importance_csv,
    write_report_csv,
    write_report_json,
    write_report_svg,
)
from .svm import RbfSvmClassifier
from .synth import SynthConfig, generate_synthetic_corpus

SURFACE_NAMES = catalog_names(epi=False, spikem=False, crowd=False, credit=False)
EPI_NAMES = [n for n, _ in EPI_FEATURES]
SPIKEM_NAMES = [n for n, _ in SPIKEM_FEATURES]


def _read_config_file(path):
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError(f"bad config line {line!r} (expected key=value)")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class Settings:
    def __init__(self, cli_values, file_values):
        self.cli = cli_values
        self.file = file_values

    def get(self, name, default, cast=str):
        if self.cli.get(name) is not None:
            return self.cli[name]
        if name in self.file:
            raw = self.file[name]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        return default


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DataError as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(3)
        except NumericalError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(4)
        except RumorkitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)

    return wrapper


@click.group()
@click.option("--seed", type=int, default=None, help="Global random seed.")
@click.option("--intervals", type=int, default=None, help="Intervals per 48 h window.")
@click.option("--out-dir", type=click.Path(), default=None, help="Directory for outputs.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="key=value defaults file (flag > file > default).")
@click.pass_context
def main(ctx, seed, intervals, out_dir, config_path):
    """Early rumor detection pipeline for event-grouped tweet streams."""
    file_values = _read_config_file(config_path) if config_path else {}
    ctx.obj = Settings(
        {"seed": seed, "intervals": intervals, "out_dir": out_dir}, file_values
    )


def _settings(ctx):
    return ctx.obj


def _out_path(settings, out):
    out_dir = settings.get("out_dir", ".", str)
    os.makedirs(out_dir, exist_ok=True)
    return out if os.path.isabs(out) else os.path.join(out_dir, out)


def _load_inputs(corpus, lexicons, domains):
    lex = load_lexicons(lexicons) if lexicons else default_lexicons()
    meta = load_domain_metadata(domains) if domains else empty_domain_metadata()
    return load_corpus(corpus), lex, meta


def _fmt(x):
    if isinstance(x, float):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


@main.command()
@click.option("--seed", type=int, default=None)
@click.option("--events", "n_events", type=int, default=None)
@click.option("--margin", type=float, default=None)
@click.option("--ramp-hours", type=float, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def synth(ctx, seed, n_events, margin, ramp_hours, out):
    """Generate a labeled synthetic corpus."""
    s = _settings(ctx)
    seed = seed if seed is not None else s.get("seed", 0, int)
    n_events = n_events if n_events is not None else s.get("events", 20, int)
    margin = margin if margin is not None else s.get("margin", 1.0, float)
    ramp_hours = ramp_hours if ramp_hours is not None else s.get("ramp_hours", 0.0, float)
    config = SynthConfig(margin=margin, ramp_hours=ramp_hours)
    events = generate_synthetic_corpus(seed, n_events, config)
    save_corpus(events, _out_path(s, out))
    click.echo(f"wrote {len(events)} events to {out}")


def _surface_rows(events, lex, meta):
    header = ["event_id", "label", "interval", "empty"] + SURFACE_NAMES + ["CrowdWisdom"]
    rows = []
    for event in events:
        buckets = bucket_intervals(event)
        for b in buckets:
            feats = extract_interval_features(b, lex, meta)
            row = [event.event_id, event.label or "", b.index, int(feats.empty)]
            row += [feats.values[name] for name in SURFACE_NAMES]
            row.append(crowd_wisdom(b.tweets, lex))
            rows.append(row)
    return header, rows


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--lexicons", type=click.Path(exists=True), default=None)
@click.option("--domains", type=click.Path(exists=True), default=None)
@click.option("--intervals", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def features(ctx, corpus, lexicons, domains, intervals, out):
    """Surface + crowd features per event interval."""
    s = _settings(ctx)
    intervals = intervals if intervals is not None else s.get("intervals", 48, int)
    events, lex, meta = _load_inputs(corpus, lexicons, domains)
    events = prepare_events(events, intervals)
    header, rows = _surface_rows(events, lex, meta)
    _write_csv(_out_path(s, out), header, rows)
    click.echo(f"wrote {len(rows)} feature rows to {out}")


@main.command("train-credit")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--seed", type=int, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def train_credit(ctx, corpus, seed, epochs, out):
    """Train the single-tweet credibility network."""
    s = _settings(ctx)
    seed = seed if seed is not None else s.get("seed", 0, int)
    epochs = epochs if epochs is not None else s.get("epochs", 20, int)
    events = load_corpus(corpus)
    texts, labels = [], []
    for event in events:
        if event.label is None:
            raise DataError(f"event {event.event_id} has no label")
        for tw in event.tweets:
            texts.append(tw.text)
            labels.append(event.label)
    net = CredibilityNetwork(seed=seed, epochs=epochs)
    net.fit(texts, labels)
    save_credibility(net, _out_path(s, out))
    click.echo(
        f"trained on {len(texts)} tweets, final loss {net.loss_history_[-1]:.4f}"
    )


@main.command("score-credit")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--intervals", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def score_credit(ctx, model_path, corpus, intervals, out):
    """Per-interval CreditScore from a trained credibility model."""
    s = _settings(ctx)
    intervals = intervals if intervals is not None else s.get("intervals", 48, int)
    net = load_credibility(model_path)
    events = prepare_events(load_corpus(corpus), intervals)
    rows = []
    for event in events:
        series = credit_score(net, bucket_intervals(event))
        for t in range(intervals):
            rows.append([event.event_id, t, series.values[t], series.counts[t]])
    _write_csv(
        _out_path(s, out),
        ["event_id", "interval", "CreditScore", "tweet_count"],
        rows,
    )
    click.echo(f"wrote {len(rows)} credit rows to {out}")


@main.command("fit-epi")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--model", type=click.Choice(["sis", "seiz", "spikem", "all"]),
              default="all")
@click.option("--intervals", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--hours", type=float, default=48.0,
              help="Fit only on tweets before this cutoff.")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def fit_epi(ctx, corpus, model, intervals, seed, hours, out):
    """Fit epidemic-curve parameters per event."""
    s = _settings(ctx)
    intervals = intervals if intervals is not None else s.get("intervals", 48, int)
    seed = seed if seed is not None else s.get("seed", 0, int)
    events = prepare_events(load_corpus(corpus), intervals)
    models = ["sis", "seiz", "spikem"] if model == "all" else [model]
    columns = []
    if "sis" in models:
        columns += EPI_NAMES[:2]
    if "seiz" in models:
        columns += EPI_NAMES[2:]
    if "spikem" in models:
        columns += SPIKEM_NAMES
    rows = []
    for event in events:
        truncated = truncate_at_cutoff(event, hours)
        window = event.window
        k = observed_interval_count(intervals, window.interval_hours, hours)
        counts = [len(b.tweets) for b in bucket_intervals(truncated)][:k]
        n_pop = population_proxy(truncated)
        values = {}
        rms_parts, converged = [], True
        for m in models:
            result = fit_model(
                counts, m, window.interval_hours, n_pop, FitConfig(seed=seed)
            )
            values.update(result.feature_values())
            rms_parts.append(result.rms_residual)
            converged = converged and result.converged
        row = [event.event_id] + [values[c] for c in columns]
        row += [max(rms_parts), int(converged)]
        rows.append(row)
    _write_csv(
        _out_path(s, out),
        ["event_id"] + columns + ["rms_residual", "converged"],
        rows,
    )
    click.echo(f"wrote {len(rows)} epidemic fits to {out}")


def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


@main.command("build-dsts")
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--credit", "credit_path", type=click.Path(exists=True), default=None)
@click.option("--epi", "epi_path", type=click.Path(exists=True), default=None)
@click.option("--hours", type=float, default=48.0)
@click.option("--no-normalize", is_flag=True, default=False)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def build_dsts(ctx, features_path, credit_path, epi_path, hours, no_normalize, out):
    """Merge feature CSVs into flat time-series vectors."""
    s = _settings(ctx)
    header, rows = _read_csv(features_path)
    feat_names = header[4:]
    per_event = {}
    order = []
    labels = {}
    for row in rows:
        event_id, label, interval = row[0], row[1], int(row[2])
        if event_id not in per_event:
            per_event[event_id] = {}
            order.append(event_id)
            labels[event_id] = label
        per_event[event_id][interval] = [float(v) for v in row[4:]]
    n_intervals = max(max(d.keys()) for d in per_event.values()) + 1
    interval_hours = 48.0 / n_intervals

    credit_cols = {}
    if credit_path:
        _, crows = _read_csv(credit_path)
        for row in crows:
            credit_cols.setdefault(row[0], {})[int(row[1])] = float(row[2])
    epi_cols = {}
    epi_names = []
    if epi_path:
        eheader, erows = _read_csv(epi_path)
        epi_names = [c for c in eheader[1:] if c not in ("rms_residual", "converged")]
        for row in erows:
            epi_cols[row[0]] = {
                name: float(v) for name, v in zip(epi_names, row[1 : 1 + len(epi_names)])
            }

    names = list(feat_names[:-1])  # surface block (CrowdWisdom comes last)
    names += [n for n in EPI_NAMES if n in epi_names]
    names += [n for n in SPIKEM_NAMES if n in epi_names]
    names.append(feat_names[-1])
    if credit_path:
        names.append("CreditScore")

    k = observed_interval_count(n_intervals, interval_hours, hours)
    matrices = []
    for event_id in order:
        values = np.zeros((n_intervals, len(names)))
        observed = np.arange(n_intervals) < k
        for t in range(min(k, n_intervals)):
            base = per_event[event_id].get(t)
            if base is None:
                raise DataError(f"missing interval {t} for event {event_id}")
            lookup = dict(zip(feat_names, base))
            if epi_cols:
                lookup.update(epi_cols.get(event_id, {}))
            if credit_path:
                lookup["CreditScore"] = credit_cols.get(event_id, {}).get(t, 0.5)
            values[t] = [lookup.get(nm, 0.0) for nm in names]
        matrices.append(
            IntervalFeatureMatrix(
                event_id=event_id,
                values=values,
                feature_names=names,
                interval_hours=interval_hours,
                label=labels[event_id] or None,
                observed=observed,
                cutoff_hours=hours,
            )
        )
    transformer = DstsTransformer(normalize=not no_normalize).fit(matrices)
    X = transformer.transform(matrices)
    out_rows = [
        [event_id, labels[event_id]] + list(vec) for event_id, vec in zip(order, X)
    ]
    _write_csv(
        _out_path(s, out),
        ["event_id", "label"] + transformer.column_names(),
        out_rows,
    )
    click.echo(f"wrote {len(out_rows)} vectors of width {X.shape[1]} to {out}")


def _read_dsts(path):
    header, rows = _read_csv(path)
    ids = [r[0] for r in rows]
    labels = [r[1] for r in rows]
    X = np.array([[float(v) for v in r[2:]] for r in rows])
    return ids, labels, X, header[2:]


@main.command()
@click.option("--dsts", "dsts_path", required=True, type=click.Path(exists=True))
@click.option("--model", type=click.Choice(["rf", "svm"]), default="rf")
@click.option("--trees", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def train(ctx, dsts_path, model, trees, seed, out):
    """Train the event classifier on DSTS vectors."""
    s = _settings(ctx)
    seed = seed if seed is not None else s.get("seed", 0, int)
    trees = trees if trees is not None else s.get("trees", 350, int)
    ids, labels, X, columns = _read_dsts(dsts_path)
    if any(not l for l in labels):
        raise DataError("training vectors must be labeled")
    if model == "svm":
        clf = RbfSvmClassifier(seed=seed).fit(X, labels)
        clf.column_names_ = columns
        save_svm(clf, _out_path(s, out))
    else:
        clf = RandomForestRumorClassifier(n_trees=trees, seed=seed).fit(X, labels)
        clf.column_names_ = columns
        save_forest(clf, _out_path(s, out))
    acc = float(np.mean(clf.predict(X) == np.asarray(labels)))
    click.echo(f"trained {model} on {len(ids)} events (train accuracy {acc:.3f})")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--dsts", "dsts_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def predict(ctx, model_path, dsts_path, out):
    """Score DSTS vectors with a trained classifier."""
    s = _settings(ctx)
    ids, labels, X, _ = _read_dsts(dsts_path)
    clf = load_classifier(model_path)
    predicted = clf.predict(X)
    if hasattr(clf, "predict_proba"):
        p_rumor = clf.predict_proba(X)[:, 0]
    else:
        p_rumor = (predicted == "rumor").astype(float)
    rows = [
        [event_id, label, pred, p]
        for event_id, label, pred, p in zip(ids, labels, predicted, p_rumor)
    ]
    _write_csv(
        _out_path(s, out), ["event_id", "label", "predicted", "p_rumor"], rows
    )
    click.echo(f"wrote {len(rows)} predictions to {out}")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def importance(ctx, model_path, out):
    """Grouped feature-importance ranking from a trained forest."""
    s = _settings(ctx)
    clf = load_classifier(model_path)
    if not isinstance(clf, RandomForestRumorClassifier):
        raise DataError("importance requires a forest model")
    columns = getattr(clf, "column_names_", None)
    if not columns:
        raise DataError("model file carries no column names")
    ranking = clf.grouped_importance(columns)
    write_importance_csv(ranking, _out_path(s, out))
    click.echo(f"wrote {len(ranking)} feature groups to {out}")


def _parse_cutoffs(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise click.UsageError(f"bad cutoff list {text!r}")


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--lexicons", type=click.Path(exists=True), default=None)
@click.option("--domains", type=click.Path(exists=True), default=None)
@click.option("--cutoffs", default=None, help="Comma-separated hour cutoffs.")
@click.option("--model", type=click.Choice(["rf", "svm"]), default="rf")
@click.option("--trees", type=int, default=None)
@click.option("--folds", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--intervals", type=int, default=None)
@click.option("--ablation", is_flag=True, default=False,
              help="Also evaluate without CreditScore at each cutoff.")
@click.option("--without-credit", is_flag=True, default=False,
              help="Disable the CreditScore feature entirely.")
@click.option("--no-crowd", is_flag=True, default=False)
@click.option("--no-epi", is_flag=True, default=False)
@click.option("--no-spikem", is_flag=True, default=False)
@click.option("--no-surface", is_flag=True, default=False)
@click.option("--no-normalize", is_flag=True, default=False)
@click.option("--credit-epochs", type=int, default=None)
@click.option("--out", default="report.json", type=click.Path())
@click.pass_context
@handle_errors
def evaluate(ctx, corpus, lexicons, domains, cutoffs, model, trees, folds, seed,
             intervals, ablation, without_credit, no_crowd, no_epi, no_spikem,
             no_surface, no_normalize, credit_epochs, out):
    """Time-sliced cross-validated evaluation; writes report JSON + CSV."""
    s = _settings(ctx)
    seed = seed if seed is not None else s.get("seed", 0, int)
    intervals = intervals if intervals is not None else s.get("intervals", 48, int)
    trees = trees if trees is not None else s.get("trees", 350, int)
    folds = folds if folds is not None else s.get("folds", 10, int)
    cutoff_list = (
        _parse_cutoffs(cutoffs)
        if cutoffs is not None
        else _parse_cutoffs(s.get("cutoffs", ",".join(str(c) for c in DEFAULT_CUTOFFS)))
    )
    credit_params = {}
    if credit_epochs is not None:
        credit_params["epochs"] = credit_epochs
    config = PipelineConfig(
        intervals=intervals,
        cutoffs=cutoff_list,
        seed=seed,
        surface=not no_surface,
        credit=not without_credit,
        crowd=not no_crowd,
        epi=not no_epi,
        spikem=not no_spikem,
        model=model,
        n_trees=trees,
        folds=folds,
        normalize=not no_normalize,
        credit_params=credit_params,
    )
    events, lex, meta = _load_inputs(corpus, lexicons, domains)
    report = evaluate_over_time(config, events, lex, meta, ablation=ablation)
    json_path = _out_path(s, out)
    write_report_json(report, json_path)
    csv_path = os.path.splitext(json_path)[0] + ".csv"
    write_report_csv(report, csv_path)
    click.echo(
        "accuracy by cutoff: "
        + ", ".join(
            f"{c:g}h={a:.3f}" for c, a in zip(report.cutoffs, report.accuracies)
        )
    )
    click.echo(f"wrote {json_path} and {csv_path}")


@main.command("report")
@click.option("--report", "report_path", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="svg")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@handle_errors
def report_cmd(ctx, report_path, fmt, out):
    """Render a stored evaluation report as CSV or SVG."""
    s = _settings(ctx)
    rep = load_report_json(report_path)
    path = _out_path(s, out)
    if fmt == "csv":
        write_report_csv(rep, path)
    else:
        write_report_svg(rep, path)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()

"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured values (run with -s to see them).

The heavyweight corpus-level criteria use fixed seeds, so every number
asserted here is reproducible bit-for-bit on one platform.
"""

import dataclasses
import json
import math
import time

import numpy as np
from click.testing import CliRunner

from rumorkit.cli import main as cli_main
from rumorkit.credibility import (
    PARAM_ORDER,
    NetConfig,
    backward_batch,
    flatten_params,
    forward_batch,
    init_params,
    loss,
    loss_value,
    parameter_count,
    unflatten_params,
)
from rumorkit.dsts import IntervalFeatureMatrix, build_dsts_vector, zscore_normalize
from rumorkit.epidemic import (
    FitConfig,
    SeizParams,
    SisParams,
    fit_model,
    seiz_initial_state,
    simulate_seiz,
    simulate_sis,
)
from rumorkit.evaluation import cross_validate
from rumorkit.features import crowd_wisdom, reputation_score
from rumorkit.forest import (
    RandomForestRumorClassifier,
    TreeNode,
    forest_rumor_probability,
    leaf,
)
from rumorkit.lexicons import Lexicons, default_lexicons
from rumorkit.optimize import nelder_mead
from rumorkit.pipeline import (
    PipelineConfig,
    _vectors,
    evaluate_over_time,
    event_feature_matrix,
    prepare_events,
    split_pretrain,
)
from rumorkit.synth import SynthConfig, generate_synthetic_corpus, synthetic_domain_metadata

from conftest import make_tweet


def test_criterion_1_gradient_check():
    started = time.time()
    config = NetConfig(
        embedding_dim=4, filter_count=3, window=2, pool_width=2,
        hidden_size=5, max_len=6,
    )
    rng = np.random.default_rng(42)
    params = init_params(config, 10, rng)
    n_params = parameter_count(params)
    assert n_params <= 500
    tokens = rng.integers(0, 10, size=(8, config.max_len))
    y = rng.integers(0, 2, size=8)
    _, cache = forward_batch(params, tokens, config)
    grads = backward_batch(params, cache, y, config)
    flat = flatten_params(params)
    flat_grads = np.concatenate([grads[n].ravel() for n in PARAM_ORDER])
    eps = 1e-5
    coords = rng.choice(flat.size, size=20, replace=False)
    worst = 0.0
    for c in coords:
        up, down = flat.copy(), flat.copy()
        up[c] += eps
        down[c] -= eps
        numeric = (
            loss(unflatten_params(up, params), tokens, y, config)
            - loss(unflatten_params(down, params), tokens, y, config)
        ) / (2 * eps)
        analytic = flat_grads[c]
        scale = max(abs(analytic), abs(numeric))
        if scale >= 1e-7:
            worst = max(worst, abs(analytic - numeric) / scale)
    elapsed = time.time() - started
    assert worst <= 1e-4
    assert elapsed < 10.0
    print(
        f"\nPASS criterion 1: gradient check on {n_params} params, "
        f"max rel err {worst:.2e} in {elapsed:.1f}s"
    )


def test_criterion_2_formula_goldens():
    z = zscore_normalize(np.array([[1.0], [2.0], [3.0]]))[:, 0]
    assert np.allclose(z, [-1.2247, 0.0, 1.2247], atol=1e-3)

    uniform = loss_value(np.array([[0.5, 0.5]]), np.array([0]))
    assert abs(uniform - math.log(2)) <= 1e-9

    assert reputation_score(30, 10) == 0.25

    lex_hoax = Lexicons(debunking_terms=frozenset(["hoax"]))
    pair = [make_tweet(tid="a", text="this is a hoax"),
            make_tweet(tid="b", text="breaking news")]
    assert crowd_wisdom(pair, lex_hoax) == 0.5
    lex_phrase = Lexicons(debunking_terms=frozenset(["not true"]))
    trio = [make_tweet(tid="a", text="not true at all"),
            make_tweet(tid="b", text="not a fan"),
            make_tweet(tid="c", text="ok")]
    assert crowd_wisdom(trio, lex_phrase) == 1 / 3
    assert crowd_wisdom(pair, Lexicons(debunking_terms=frozenset())) == 0.0
    print(
        "\nPASS criterion 2: z-score, ln2 loss, reputation 0.25, "
        "crowd-wisdom fractions all exact"
    )


def test_criterion_3_dsts_structure():
    rng = np.random.default_rng(0)
    checked = 0
    for n in (1, 4, 12, 24, 48):
        for d in (1, 3, 7):
            values = rng.normal(size=(n, d))
            m = IntervalFeatureMatrix(
                event_id="e", values=values,
                feature_names=[f"x{j}" for j in range(d)], interval_hours=48.0 / n,
            )
            vec = build_dsts_vector(m)
            assert vec.shape == (2 * d * n,)
            shifted = values.copy()
            shifted[:, 0] += 1234.5
            scaled = values.copy()
            scaled[:, d - 1] *= 98.7
            for variant in (shifted, scaled):
                mv = IntervalFeatureMatrix(
                    event_id="e", values=variant,
                    feature_names=m.feature_names, interval_hours=m.interval_hours,
                )
                assert np.max(np.abs(build_dsts_vector(mv) - vec)) <= 1e-12
            checked += 1
    print(f"\nPASS criterion 3: vector length 2*D*N and shift/scale invariance "
          f"for {checked} (N, D) combinations")


def test_criterion_4_epidemic_self_consistency():
    started = time.time()
    # Noiseless generation under the fitter's own anchored convention.
    truth = SeizParams(beta=0.9, b=0.4, rho=0.3, eps=0.1, p=0.3, l=0.5)
    n_pop, i0, n_intervals, dt = 2000.0, 12.0, 24, 2.0
    grid = np.arange(n_intervals, dtype=float) * dt
    states = simulate_seiz(truth, n_pop, seiz_initial_state(n_pop, i0), grid, 2)
    infected = states[:, 2]
    counts = np.diff(np.concatenate([[0.0], infected]))
    result = fit_model(
        counts, "seiz", dt, n_pop,
        FitConfig(starts=8, max_evals=800, polish_evals=600, polish_rounds=20, seed=1),
    )
    fitted = result.params
    rel_errors = {
        name: abs(getattr(fitted, name) - getattr(truth, name))
        / abs(getattr(truth, name))
        for name in ("beta", "b", "rho", "eps", "p", "l")
    }
    assert max(rel_errors.values()) <= 0.10, rel_errors
    assert result.rms_residual <= 0.01 * infected.max()

    drift = np.max(np.abs(states.sum(axis=1) - n_pop))
    assert drift <= 1e-8 * n_pop

    # RK4 order via the logistic closed form
    beta, pop, seed_i, horizon = 0.5, 1000.0, 5.0, 24.0
    exact = pop * seed_i * np.exp(beta * horizon) / (
        pop + seed_i * (np.exp(beta * horizon) - 1.0)
    )
    coarse = simulate_sis(SisParams(beta, 0.0), pop, seed_i, [0.0, horizon], 24)[-1]
    fine = simulate_sis(SisParams(beta, 0.0), pop, seed_i, [0.0, horizon], 48)[-1]
    ratio = abs(coarse - exact) / abs(fine - exact)
    assert ratio >= 8.0

    elapsed = time.time() - started
    assert elapsed < 60.0
    print(
        f"\nPASS criterion 4: SEIZ recovery worst rel err "
        f"{max(rel_errors.values()):.2%}, rms/peak "
        f"{result.rms_residual / infected.max():.2e}, drift {drift:.1e}, "
        f"RK4 ratio {ratio:.1f} in {elapsed:.1f}s"
    )


def test_criterion_5_optimizer():
    rosen = lambda x: float((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)
    result = nelder_mead(rosen, [-1.2, 1.0], max_evals=2000)
    assert result.fx <= 1e-6
    assert result.evaluations <= 2000
    print(
        f"\nPASS criterion 5: Rosenbrock f={result.fx:.2e} after "
        f"{result.evaluations} evaluations"
    )


def test_criterion_6_classifier_oracle_and_cv():
    started = time.time()
    # (a) hand-built two-tree forest against manual walks
    t1 = TreeNode(feature=0, threshold=0.5, left=leaf(3, 1), right=leaf(0, 4))
    t2 = TreeNode(feature=1, threshold=-1.0, left=leaf(2, 2), right=leaf(1, 3))
    probes = [
        (np.array([0.2, -3.0]), (0.75 + 0.5) / 2),
        (np.array([0.2, 0.0]), (0.75 + 0.25) / 2),
        (np.array([0.9, -3.0]), (0.0 + 0.5) / 2),
        (np.array([0.9, 5.0]), (0.0 + 0.25) / 2),
    ]
    for x, expected in probes:
        assert forest_rumor_probability([t1, t2], x) == expected

    # (b) margin-controlled synthetic corpus, 200 events, 10-fold CV
    config = PipelineConfig(
        intervals=12, credit=False, epi=False, spikem=False,
        n_trees=350, folds=10, seed=21,
    )
    lex, meta = default_lexicons(), synthetic_domain_metadata()
    events = prepare_events(
        generate_synthetic_corpus(
            21, 200, SynthConfig(margin=1.0, min_tweets=20, max_tweets=40)
        ),
        config.intervals,
    )
    matrices = [event_feature_matrix(e, config, lex, meta, None, 48.0) for e in events]
    X, _ = _vectors(matrices, config)
    y = np.array([e.label for e in events])
    ids = [e.event_id for e in events]
    cv = cross_validate(
        X, y, ids, lambda: RandomForestRumorClassifier(n_trees=350, seed=21),
        folds=10, seed=21,
    )
    assert cv.mean_accuracy >= 0.9

    # (c) shuffled labels sit at chance
    shuffled = y.copy()
    np.random.default_rng(5).shuffle(shuffled)
    cv_shuffled = cross_validate(
        X, shuffled, ids,
        lambda: RandomForestRumorClassifier(n_trees=100, max_depth=8, seed=21),
        folds=10, seed=21,
    )
    assert 0.4 <= cv_shuffled.mean_accuracy <= 0.6

    elapsed = time.time() - started
    assert elapsed < 120.0
    print(
        f"\nPASS criterion 6: manual walks exact, CV {cv.mean_accuracy:.3f}, "
        f"shuffled {cv_shuffled.mean_accuracy:.3f} in {elapsed:.0f}s"
    )


def test_criterion_7_end_to_end_trend():
    started = time.time()
    events = generate_synthetic_corpus(
        42, 60,
        SynthConfig(margin=1.0, ramp_hours=36.0, min_tweets=60, max_tweets=120),
    )
    config = PipelineConfig(
        intervals=24,
        cutoffs=(1.0, 6.0, 12.0, 24.0, 48.0),
        seed=42,
        epi=False,
        spikem=False,
        n_trees=350,
        folds=10,
        normalize=False,  # the forest path skips z-scoring
        credit_params={"epochs": 12},
    )
    report = evaluate_over_time(
        config, events, default_lexicons(), synthetic_domain_metadata(),
        ablation=True,
    )
    acc = report.accuracies
    for earlier, later in zip(acc, acc[1:]):
        assert later >= earlier - 0.05, acc
    assert acc[-1] >= 0.85
    delta_first = report.accuracies[0] - report.ablation_accuracies[0]
    assert delta_first >= 0.03
    elapsed = time.time() - started
    assert elapsed < 600.0
    print(
        f"\nPASS criterion 7: accuracies {[round(a, 3) for a in acc]}, "
        f"credit advantage at 1h {delta_first:+.3f} in {elapsed:.0f}s"
    )


def test_criterion_8_leakage_probe():
    config = PipelineConfig(
        intervals=12, cutoffs=(12.0,), seed=9, epi=False, spikem=False,
        n_trees=40, folds=4, credit_params={"epochs": 3, "max_len": 20},
    )
    lex, meta = default_lexicons(), synthetic_domain_metadata()
    events = prepare_events(
        generate_synthetic_corpus(
            9, 12, SynthConfig(min_tweets=20, max_tweets=40)
        ),
        config.intervals,
    )
    base = evaluate_over_time(config, events, lex, meta, ablation=True)

    pretrain_ids = {
        e.event_id
        for e in split_pretrain(events, config.pretrain_fraction, config.seed)[0]
    }
    poisoned = []
    for e in events:
        if e.event_id in pretrain_ids:
            poisoned.append(e)
            continue
        ghost = dataclasses.replace(
            e.tweets[0],
            id=f"{e.event_id}-ghost",
            text="explosive fabricated allegations spreading now",
            created_at=e.window.t_0 + 30 * 3600.0 + 11.0,
        )
        poisoned.append(dataclasses.replace(e, tweets=e.tweets + (ghost,)))
    probed = evaluate_over_time(config, poisoned, lex, meta, ablation=True)

    base_bytes = json.dumps(base.to_dict(), sort_keys=True).encode()
    probed_bytes = json.dumps(probed.to_dict(), sort_keys=True).encode()
    assert base_bytes == probed_bytes

    # feature values themselves are untouched at the cutoff
    for e, p in zip(events, poisoned):
        if e.event_id in pretrain_ids:
            continue
        credit_model = None
        cfg = dataclasses.replace(config, credit=False)
        m_base = event_feature_matrix(e, cfg, lex, meta, credit_model, 12.0)
        m_poisoned = event_feature_matrix(p, cfg, lex, meta, credit_model, 12.0)
        assert np.array_equal(m_base.values, m_poisoned.values)
    print("\nPASS criterion 8: post-cutoff injection leaves features, "
          "predictions, and the report byte-identical")


SUBCOMMAND_RUNS = [
    ("synth", ["synth", "--seed", "5", "--events", "6", "--out", "corpus.jsonl"]),
    ("features", ["features", "--corpus", "{prev}/corpus.jsonl", "--intervals", "6",
                  "--out", "features.csv"]),
    ("train-credit", ["train-credit", "--corpus", "{prev}/corpus.jsonl",
                      "--seed", "5", "--epochs", "3", "--out", "credit.bin"]),
    ("score-credit", ["score-credit", "--model", "{prev}/credit.bin",
                      "--corpus", "{prev}/corpus.jsonl", "--intervals", "6",
                      "--out", "credit.csv"]),
    ("fit-epi", ["fit-epi", "--corpus", "{prev}/corpus.jsonl", "--model", "sis",
                 "--intervals", "6", "--seed", "5", "--out", "epi.csv"]),
    ("build-dsts", ["build-dsts", "--features", "{prev}/features.csv",
                    "--credit", "{prev}/credit.csv", "--epi", "{prev}/epi.csv",
                    "--hours", "48", "--out", "dsts.csv"]),
    ("train", ["train", "--dsts", "{prev}/dsts.csv", "--model", "rf",
               "--trees", "20", "--seed", "5", "--out", "rf.bin"]),
    ("predict", ["predict", "--model", "{prev}/rf.bin", "--dsts", "{prev}/dsts.csv",
                 "--out", "preds.csv"]),
    ("importance", ["importance", "--model", "{prev}/rf.bin",
                    "--out", "importance.csv"]),
    ("evaluate", ["evaluate", "--corpus", "{prev}/corpus.jsonl", "--cutoffs", "6,48",
                  "--trees", "15", "--folds", "2", "--no-epi", "--no-spikem",
                  "--credit-epochs", "2", "--intervals", "6", "--seed", "5",
                  "--out", "report.json"]),
    ("report", ["report", "--report", "{prev}/report.json", "--format", "svg",
                "--out", "report.svg"]),
]


def test_criterion_9_subcommand_determinism(tmp_path):
    runner = CliRunner()
    digests = {}
    for attempt in ("first", "second"):
        workdir = tmp_path / attempt
        workdir.mkdir()
        for name, template in SUBCOMMAND_RUNS:
            args = [a.replace("{prev}", str(workdir)) for a in template]
            result = runner.invoke(
                cli_main, ["--out-dir", str(workdir)] + args, catch_exceptions=False
            )
            assert result.exit_code == 0, f"{name}: {result.output}"
        digests[attempt] = {
            f.name: f.read_bytes() for f in sorted(workdir.iterdir())
        }
    assert set(digests["first"]) == set(digests["second"])
    for filename in digests["first"]:
        assert digests["first"][filename] == digests["second"][filename], filename
    print(
        f"\nPASS criterion 9: {len(SUBCOMMAND_RUNS)} subcommands, "
        f"{len(digests['first'])} output files byte-identical across reruns"
    )

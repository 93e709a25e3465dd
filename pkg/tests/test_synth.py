import numpy as np
import pytest

from rumorkit.corpus import serialize_corpus
from rumorkit.errors import DataError
from rumorkit.synth import SynthConfig, generate_synthetic_corpus


class TestGenerator:
    def test_deterministic_for_fixed_seed(self):
        a = generate_synthetic_corpus(7, 6)
        b = generate_synthetic_corpus(7, 6)
        assert serialize_corpus(a) == serialize_corpus(b)

    def test_different_seeds_differ(self):
        a = generate_synthetic_corpus(7, 6)
        b = generate_synthetic_corpus(8, 6)
        assert serialize_corpus(a) != serialize_corpus(b)

    def test_balanced_labels(self):
        events = generate_synthetic_corpus(1, 10)
        labels = [e.label for e in events]
        assert labels.count("rumor") == 5
        assert labels.count("news") == 5

    def test_odd_count_rejected(self):
        with pytest.raises(DataError):
            generate_synthetic_corpus(1, 9)

    def test_margin_bounds(self):
        with pytest.raises(DataError):
            SynthConfig(margin=1.5)

    def test_tweets_sorted_and_within_frame(self):
        for event in generate_synthetic_corpus(3, 4):
            times = [tw.created_at for tw in event.tweets]
            assert times == sorted(times)
            assert max(times) - min(times) < 48 * 3600.0

    def test_debunking_words_target_rumors(self):
        from rumorkit.features import crowd_wisdom
        from rumorkit.lexicons import default_lexicons

        lex = default_lexicons()
        events = generate_synthetic_corpus(5, 30, SynthConfig(margin=1.0))
        rumor = np.mean(
            [crowd_wisdom(e.tweets, lex) for e in events if e.label == "rumor"]
        )
        news = np.mean(
            [crowd_wisdom(e.tweets, lex) for e in events if e.label == "news"]
        )
        assert rumor > news + 0.15

    def test_margin_zero_matches_class_distributions(self):
        events = generate_synthetic_corpus(11, 40, SynthConfig(margin=0.0))
        rumor_followers = [
            tw.user.followers for e in events if e.label == "rumor" for tw in e.tweets
        ]
        news_followers = [
            tw.user.followers for e in events if e.label == "news" for tw in e.tweets
        ]
        # log-scale means within a fraction of the common spread
        lr, ln = np.log1p(rumor_followers), np.log1p(news_followers)
        pooled = np.std(np.concatenate([lr, ln]))
        assert abs(lr.mean() - ln.mean()) < 0.15 * pooled

    def test_categories_assigned(self):
        events = generate_synthetic_corpus(3, 6)
        assert all(e.category is not None for e in events)

    def test_margin_zero_classifier_sits_at_chance(self):
        from rumorkit.evaluation import cross_validate
        from rumorkit.forest import RandomForestRumorClassifier
        from rumorkit.lexicons import default_lexicons
        from rumorkit.pipeline import (
            PipelineConfig,
            _vectors,
            event_feature_matrix,
            prepare_events,
        )
        from rumorkit.synth import synthetic_domain_metadata

        config = PipelineConfig(
            intervals=12, credit=False, epi=False, spikem=False, seed=3
        )
        lex, meta = default_lexicons(), synthetic_domain_metadata()
        events = prepare_events(
            generate_synthetic_corpus(
                21, 120, SynthConfig(margin=0.0, min_tweets=20, max_tweets=40)
            ),
            config.intervals,
        )
        matrices = [
            event_feature_matrix(e, config, lex, meta, None, 48.0) for e in events
        ]
        X, _ = _vectors(matrices, config)
        y = np.array([e.label for e in events])
        cv = cross_validate(
            X, y, [e.event_id for e in events],
            lambda: RandomForestRumorClassifier(n_trees=100, seed=3),
            folds=10, seed=3,
        )
        assert 0.4 <= cv.mean_accuracy <= 0.6

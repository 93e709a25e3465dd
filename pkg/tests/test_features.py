import pytest

from rumorkit.corpus import IntervalBucket
from rumorkit.features import (
    SINGLE_TWEET_FEATURES,
    catalog_names,
    crowd_wisdom,
    extract_interval_features,
    extract_single_tweet_features,
    full_catalog,
    polarity_score,
    reputation_score,
)
from rumorkit.lexicons import Lexicons, default_lexicons, empty_domain_metadata

from conftest import BASE, make_tweet, make_user

LEX = default_lexicons()
META = empty_domain_metadata()


def bucket(tweets, index=0):
    return IntervalBucket(index=index, tweets=tuple(tweets))


class TestPolarity:
    def test_hand_count(self):
        assert polarity_score("good good bad", LEX) == pytest.approx(1 / 3, abs=1e-9)

    def test_no_hits_is_zero(self):
        assert polarity_score("quick brown fox", LEX) == 0.0

    def test_one_sided_saturation(self):
        assert polarity_score("awful hoax lies", LEX) == -1.0

    def test_antisymmetric_under_lexicon_swap(self, rng):
        words = ["good", "bad", "fake", "true", "calm", "panic", "fox"]
        swapped = Lexicons(
            positive_words=LEX.negative_words, negative_words=LEX.positive_words
        )
        for _ in range(50):
            text = " ".join(rng.choice(words, size=rng.integers(1, 12)))
            assert polarity_score(text, LEX) == -polarity_score(text, swapped)


class TestCrowdWisdom:
    def test_direct_count(self):
        tweets = [make_tweet(tid="a", text="this is a hoax"),
                  make_tweet(tid="b", text="breaking news")]
        lex = Lexicons(debunking_terms=frozenset(["hoax"]))
        assert crowd_wisdom(tweets, lex) == 0.5

    def test_empty_debunking_set(self):
        tweets = [make_tweet(text="this is a hoax")]
        assert crowd_wisdom(tweets, Lexicons(debunking_terms=frozenset())) == 0.0

    def test_phrase_on_token_boundaries(self):
        tweets = [
            make_tweet(tid="a", text="not true at all"),
            make_tweet(tid="b", text="not a fan"),
            make_tweet(tid="c", text="ok"),
        ]
        lex = Lexicons(debunking_terms=frozenset(["not true"]))
        assert crowd_wisdom(tweets, lex) == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_tweet_list(self):
        assert crowd_wisdom([], LEX) == 0.0

    def test_monotone_adding_matching_tweet(self, rng):
        tweets = [make_tweet(tid=f"t{i}", text="nothing here") for i in range(5)]
        base = crowd_wisdom(tweets, LEX)
        more = tweets + [make_tweet(tid="d", text="that is a hoax")]
        assert crowd_wisdom(more, LEX) * len(more) >= base * len(tweets)


class TestIntervalFeatures:
    def test_hashtag_fraction(self):
        tweets = [
            make_tweet(tid="a", hashtag_count=1),
            make_tweet(tid="b", hashtag_count=0),
        ]
        feats = extract_interval_features(bucket(tweets), LEX, META)
        assert feats.values["Hashtag"] == 0.5
        assert not feats.empty

    def test_reputation_formula(self):
        user = make_user(followers=30, friends=10)
        feats = extract_interval_features(
            bucket([make_tweet(user=user)]), LEX, META
        )
        assert feats.values["UserReputationScore"] == 0.25

    def test_capital_fraction(self):
        feats = extract_interval_features(
            bucket([make_tweet(text="AbCd")]), LEX, META
        )
        assert feats.values["Capital"] == 0.5

    def test_empty_bucket_zeroed_with_flag(self):
        feats = extract_interval_features(bucket([]), LEX, META)
        assert feats.empty
        assert set(feats.values.values()) == {0.0}

    def test_fraction_features_bounded(self, rng):
        texts = ["Wow!!", "is this TRUE?", "see http://a.example x", "$5 :-)", "via you"]
        tweets = [
            make_tweet(
                tid=f"t{i}",
                text=texts[rng.integers(len(texts))],
                hashtag_count=int(rng.integers(3)),
                mention_count=int(rng.integers(3)),
                is_retweet=bool(rng.integers(2)),
                urls=("http://x.example/a",) if rng.integers(2) else (),
            )
            for i in range(20)
        ]
        feats = extract_interval_features(bucket(tweets), LEX, META)
        for desc in full_catalog(epi=False, spikem=False, crowd=False, credit=False):
            if desc.aggregation == "fraction":
                assert 0.0 <= feats.values[desc.name] <= 1.0, desc.name

    def test_pure_function(self):
        tweets = [make_tweet(text="Some TEXT here?")]
        a = extract_interval_features(bucket(tweets), LEX, META)
        b = extract_interval_features(bucket(tweets), LEX, META)
        assert a == b

    def test_uppercasing_changes_only_capital(self):
        text = "officials confirm the fire is under control, not true they say?!"
        lower = extract_interval_features(bucket([make_tweet(text=text)]), LEX, META)
        upper = extract_interval_features(
            bucket([make_tweet(text=text.upper())]), LEX, META
        )
        for name, value in lower.values.items():
            if name == "Capital":
                assert upper.values[name] > value
            else:
                assert upper.values[name] == value, name

    def test_join_date_clamped_to_zero(self):
        user = make_user(join_date=BASE + 86400.0)  # joined "after" the tweet
        feats = extract_interval_features(
            bucket([make_tweet(at=BASE, user=user)]), LEX, META
        )
        assert feats.values["UserJoinDate"] == 0.0


class TestSingleTweetVector:
    def test_question_indicator(self):
        vec = extract_single_tweet_features(make_tweet(text="?"), LEX, META)
        names = SINGLE_TWEET_FEATURES
        assert vec[names.index("Question")] == 1.0
        assert vec[names.index("Exclamation")] == 0.0

    def test_verified_lift(self):
        tweet = make_tweet(user=make_user(verified=True))
        vec = extract_single_tweet_features(tweet, LEX, META)
        assert vec[SINGLE_TWEET_FEATURES.index("UserVerified")] == 1.0

    def test_vector_has_27_features(self):
        assert len(SINGLE_TWEET_FEATURES) == 27

    def test_golden_vector(self):
        text = (
            "OMG!! Is this true?? The #storm photos look fake "
            "http://Hotgossip.example/p/1 via @sam :-)"
        )
        tweet = make_tweet(
            text=text,
            at=BASE,
            is_retweet=True,
            retweet_count=3,
            urls=("http://Hotgossip.example/p/1",),
            hashtag_count=1,
            mention_count=1,
            user=make_user(
                followers=30,
                friends=10,
                tweets_posted=500,
                photos_posted=20,
                city="London",
                join_date=BASE - 100 * 86400.0,
                has_description=True,
                verified=False,
            ),
        )
        # Hand-computed once against the feature definitions:
        # tokens after URL/mention strip = [omg, is, this, true, the, storm,
        # photos, look, fake, via]; text is 90 chars with 6 uppercase;
        # "true" is the only positive hit, "fake" the only negative.
        expected = {
            "Hashtag": 1.0,
            "Mention": 1.0,
            "LengthOfTweet": 10.0,
            "NumOfChar": 90.0,
            "Capital": 6.0 / 90.0,
            "Smile": 1.0,            # ":-)"
            "Sad": 0.0,
            "NumPositiveWords": 1.0,
            "NumNegativeWords": 1.0,
            "PolarityScores": 0.0,   # (1 - 1) / 2
            "Via": 1.0,
            "Stock": 0.0,
            "Question": 1.0,
            "Exclamation": 1.0,
            "QuestionExclamation": 1.0,  # "!!" and "??"
            "I": 0.0,
            "You": 0.0,
            "HeShe": 0.0,
            "UserNumFollowers": 30.0,
            "UserNumFriends": 10.0,
            "UserNumTweets": 500.0,
            "UserNumPhotos": 20.0,
            "UserIsInLargeCity": 1.0,
            "UserJoinDate": 100.0,
            "UserDescription": 1.0,
            "UserVerified": 0.0,
            "UserReputationScore": 0.25,
        }
        vec = extract_single_tweet_features(tweet, LEX, META)
        for name, value in zip(SINGLE_TWEET_FEATURES, vec):
            assert value == pytest.approx(expected[name], abs=1e-12), name


class TestCatalog:
    def test_names_unique_and_ordered(self):
        names = catalog_names()
        assert len(names) == len(set(names))
        assert len(names) == 51  # 34 surface + 9 epi + 6 spikem + crowd + credit
        assert names[-2:] == ["CrowdWisdom", "CreditScore"]

    def test_toggles_drop_groups(self):
        assert len(catalog_names(epi=False, spikem=False)) == 36
        assert "CreditScore" not in catalog_names(credit=False)

    def test_reputation_zero_guard(self):
        assert reputation_score(0, 0) == 0.0

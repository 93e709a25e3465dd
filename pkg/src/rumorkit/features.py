"""Surface-level tweet features, the crowd-wisdom signal, and the catalog
that fixes feature order for the time-series vectors.

Every surface feature is defined per tweet and aggregated over an interval
bucket: fraction features average a 0/1 indicator, mean features average a
real value. The catalog order is versioned because downstream vector
layouts depend on it.
"""

import re
from dataclasses import dataclass

import numpy as np

from .lexicons import NEUTRAL_WOT
from .text import contains_any_term, tokenize, url_domain

CATALOG_VERSION = 1

_MULTI_MARK_RE = re.compile(r"[?!]{2,}")

DAY = 86400.0


def polarity_score(text, lex):
    """Symmetric lexicon polarity: (pos - neg) / max(1, pos + neg)."""
    tokens = tokenize(text)
    pos = sum(1 for t in tokens if t in lex.positive_words)
    neg = sum(1 for t in tokens if t in lex.negative_words)
    return (pos - neg) / max(1, pos + neg)


def is_debunking(text, lex):
    return contains_any_term(tokenize(text), lex.debunking_terms)


def crowd_wisdom(tweets, lex):
    """Fraction of tweets containing at least one debunking term."""
    if not tweets:
        return 0.0
    hits = sum(1 for tw in tweets if is_debunking(tw.text, lex))
    return hits / len(tweets)


def reputation_score(followers, friends):
    total = followers + friends
    return friends / total if total > 0 else 0.0


def account_age_days(tweet):
    """Days on the platform at posting time; negative ages clamp to 0."""
    return max(0.0, (tweet.created_at - tweet.user.join_date) / DAY)


def _tweet_wot(tweet, meta):
    if not tweet.urls:
        return NEUTRAL_WOT
    scores = [meta.wot(url_domain(u)) for u in tweet.urls]
    return sum(scores) / len(scores)


# Per-tweet evaluators. Fraction features return 0/1, mean features a real.

def _f_hashtag(tw, lex, meta):
    return 1.0 if tw.hashtag_count > 0 else 0.0

def _f_mention(tw, lex, meta):
    return 1.0 if tw.mention_count > 0 else 0.0

def _f_num_urls(tw, lex, meta):
    return float(len(tw.urls))

def _f_retweets(tw, lex, meta):
    return float(tw.retweet_count)

def _f_is_retweet(tw, lex, meta):
    return 1.0 if tw.is_retweet else 0.0

def _f_contain_news(tw, lex, meta):
    return 1.0 if any(meta.is_news(url_domain(u)) for u in tw.urls) else 0.0

def _f_wot_score(tw, lex, meta):
    return _tweet_wot(tw, meta)

def _f_url_rank(tw, lex, meta):
    return 1.0 if any(meta.rank_below(url_domain(u)) for u in tw.urls) else 0.0

def _f_news_url(tw, lex, meta):
    return 1.0 if any("news" in url_domain(u) for u in tw.urls) else 0.0

def _f_length(tw, lex, meta):
    return float(len(tokenize(tw.text)))

def _f_num_chars(tw, lex, meta):
    return float(len(tw.text))

def _f_capital(tw, lex, meta):
    return sum(1 for c in tw.text if c.isupper()) / max(1, len(tw.text))

def _f_smile(tw, lex, meta):
    return 1.0 if any(e in tw.text for e in lex.emoticon_smile) else 0.0

def _f_sad(tw, lex, meta):
    return 1.0 if any(e in tw.text for e in lex.emoticon_sad) else 0.0

def _f_pos_words(tw, lex, meta):
    return float(sum(1 for t in tokenize(tw.text) if t in lex.positive_words))

def _f_neg_words(tw, lex, meta):
    return float(sum(1 for t in tokenize(tw.text) if t in lex.negative_words))

def _f_polarity(tw, lex, meta):
    return polarity_score(tw.text, lex)

def _f_via(tw, lex, meta):
    return 1.0 if "via" in tokenize(tw.text) else 0.0

def _f_stock(tw, lex, meta):
    return 1.0 if "$" in tw.text else 0.0

def _f_question(tw, lex, meta):
    return 1.0 if "?" in tw.text else 0.0

def _f_exclamation(tw, lex, meta):
    return 1.0 if "!" in tw.text else 0.0

def _f_multi_mark(tw, lex, meta):
    return 1.0 if _MULTI_MARK_RE.search(tw.text) else 0.0

def _f_first_person(tw, lex, meta):
    return 1.0 if any(t in lex.pronouns_first for t in tokenize(tw.text)) else 0.0

def _f_second_person(tw, lex, meta):
    return 1.0 if any(t in lex.pronouns_second for t in tokenize(tw.text)) else 0.0

def _f_third_person(tw, lex, meta):
    return 1.0 if any(t in lex.pronouns_third for t in tokenize(tw.text)) else 0.0

def _f_followers(tw, lex, meta):
    return float(tw.user.followers)

def _f_friends(tw, lex, meta):
    return float(tw.user.friends)

def _f_user_tweets(tw, lex, meta):
    return float(tw.user.tweets_posted)

def _f_user_photos(tw, lex, meta):
    return float(tw.user.photos_posted)

def _f_large_city(tw, lex, meta):
    city = tw.user.city
    return 1.0 if city and city.lower() in lex.large_cities else 0.0

def _f_join_date(tw, lex, meta):
    return account_age_days(tw)

def _f_description(tw, lex, meta):
    return 1.0 if tw.user.has_description else 0.0

def _f_verified(tw, lex, meta):
    return 1.0 if tw.user.verified else 0.0

def _f_reputation(tw, lex, meta):
    return reputation_score(tw.user.followers, tw.user.friends)


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    category: str  # twitter | text | user | epidemiological | spikem | crowd | credit
    aggregation: str  # fraction | mean


_SURFACE_TABLE = [
    ("Hashtag", "twitter", "fraction", _f_hashtag),
    ("Mention", "twitter", "fraction", _f_mention),
    ("NumUrls", "twitter", "mean", _f_num_urls),
    ("Retweets", "twitter", "mean", _f_retweets),
    ("IsRetweet", "twitter", "fraction", _f_is_retweet),
    ("ContainNEWS", "twitter", "fraction", _f_contain_news),
    ("WotScore", "twitter", "mean", _f_wot_score),
    ("URLRank5000", "twitter", "fraction", _f_url_rank),
    ("ContainNewsURL", "twitter", "fraction", _f_news_url),
    ("LengthOfTweet", "text", "mean", _f_length),
    ("NumOfChar", "text", "mean", _f_num_chars),
    ("Capital", "text", "mean", _f_capital),
    ("Smile", "text", "fraction", _f_smile),
    ("Sad", "text", "fraction", _f_sad),
    ("NumPositiveWords", "text", "mean", _f_pos_words),
    ("NumNegativeWords", "text", "mean", _f_neg_words),
    ("PolarityScores", "text", "mean", _f_polarity),
    ("Via", "text", "fraction", _f_via),
    ("Stock", "text", "fraction", _f_stock),
    ("Question", "text", "fraction", _f_question),
    ("Exclamation", "text", "fraction", _f_exclamation),
    ("QuestionExclamation", "text", "fraction", _f_multi_mark),
    ("I", "text", "fraction", _f_first_person),
    ("You", "text", "fraction", _f_second_person),
    ("HeShe", "text", "fraction", _f_third_person),
    ("UserNumFollowers", "user", "mean", _f_followers),
    ("UserNumFriends", "user", "mean", _f_friends),
    ("UserNumTweets", "user", "mean", _f_user_tweets),
    ("UserNumPhotos", "user", "mean", _f_user_photos),
    ("UserIsInLargeCity", "user", "fraction", _f_large_city),
    ("UserJoinDate", "user", "mean", _f_join_date),
    ("UserDescription", "user", "fraction", _f_description),
    ("UserVerified", "user", "fraction", _f_verified),
    ("UserReputationScore", "user", "mean", _f_reputation),
]

_SURFACE_FN = {name: fn for name, _, _, fn in _SURFACE_TABLE}

EPI_FEATURES = [
    ("BetaSIS", "epidemiological"),
    ("AlphaSIS", "epidemiological"),
    ("BetaSEIZ", "epidemiological"),
    ("BSEIZ", "epidemiological"),
    ("LSEIZ", "epidemiological"),
    ("PSEIZ", "epidemiological"),
    ("EpsilonSEIZ", "epidemiological"),
    ("RhoSEIZ", "epidemiological"),
    ("RSI", "epidemiological"),
]

SPIKEM_FEATURES = [
    ("PsSpikeM", "spikem"),
    ("PaSpikeM", "spikem"),
    ("PpSpikeM", "spikem"),
    ("QsSpikeM", "spikem"),
    ("QaSpikeM", "spikem"),
    ("QpSpikeM", "spikem"),
]


def surface_catalog():
    return [FeatureDescriptor(n, c, a) for n, c, a, _ in _SURFACE_TABLE]


def full_catalog(surface=True, epi=True, spikem=True, crowd=True, credit=True):
    """Ordered feature descriptors for the selected groups."""
    cat = []
    if surface:
        cat.extend(surface_catalog())
    if epi:
        cat.extend(FeatureDescriptor(n, c, "mean") for n, c in EPI_FEATURES)
    if spikem:
        cat.extend(FeatureDescriptor(n, c, "mean") for n, c in SPIKEM_FEATURES)
    if crowd:
        cat.append(FeatureDescriptor("CrowdWisdom", "crowd", "fraction"))
    if credit:
        cat.append(FeatureDescriptor("CreditScore", "credit", "mean"))
    return cat


def catalog_names(**kwargs):
    return [d.name for d in full_catalog(**kwargs)]


@dataclass(frozen=True)
class IntervalFeatures:
    values: dict
    empty: bool


def extract_interval_features(bucket, lex, meta):
    """Mean/fraction surface features over one interval bucket.

    Empty buckets yield all zeros with the empty flag set, so the
    time-series assembly always has a value for every interval.
    """
    tweets = bucket.tweets
    if not tweets:
        return IntervalFeatures(
            values={name: 0.0 for name in _SURFACE_FN}, empty=True
        )
    values = {}
    for name, _, _, fn in _SURFACE_TABLE:
        values[name] = sum(fn(tw, lex, meta) for tw in tweets) / len(tweets)
    return IntervalFeatures(values=values, empty=False)


# One-tweet feature vector: hashtag/mention indicators plus the text and
# user rows of the catalog, 27 in total. Fractions become 0/1 indicators.
SINGLE_TWEET_FEATURES = [
    name
    for name, category, _, _ in _SURFACE_TABLE
    if name in ("Hashtag", "Mention") or category in ("text", "user")
]


def extract_single_tweet_features(tweet, lex, meta):
    return np.array(
        [_SURFACE_FN[name](tweet, lex, meta) for name in SINGLE_TWEET_FEATURES],
        dtype=np.float64,
    )

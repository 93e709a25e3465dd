"""Deterministic synthetic corpora for desk-scale experiments.

Rumor and news events differ in text phrasing, debunking-word usage, user
profiles, and punctuation habits. All separations are scaled by a single
`margin` knob (margin=0 makes the classes statistically indistinguishable)
and can be ramped in over event time (`ramp_hours`) so that early intervals
carry weaker surface signal than late ones, while text phrasing stays
informative from the first tweet.
"""

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Event, Tweet, UserProfile
from .errors import DataError
from .lexicons import DomainMetadata, DomainRecord

# 2016-07-22 00:00:00 UTC; any fixed hour-aligned origin works.
DEFAULT_START = 1469145600.0

TOPICS = [
    "earthquake", "blackout", "merger", "outbreak", "protest", "crash",
    "flood", "recall", "verdict", "launch", "strike", "fire", "election",
    "storm",
]

TOPIC_CATEGORY = {
    "earthquake": "Disaster", "blackout": "Other", "merger": "Business",
    "outbreak": "Health", "protest": "Politics", "crash": "Disaster",
    "flood": "Disaster", "recall": "Business", "verdict": "Politics",
    "launch": "Science", "strike": "Politics", "fire": "Disaster",
    "election": "Politics", "storm": "Disaster",
}

FILLER = [
    "city", "people", "tonight", "today", "area", "officials", "residents",
    "crowd", "scene", "downtown", "local", "morning", "witnesses", "street",
]

# The two template pools use disjoint vocabularies so word choice carries
# the class from the very first tweet, but they are matched on everything a
# surface feature can see: similar lengths, no sentiment-lexicon or
# debunking-lexicon hits, no extra punctuation. Late-time divergence comes
# from the ramped add-ons below instead.
NEWS_TEMPLATES = [
    "city desk notes the {topic} response is underway in {filler}",
    "bulletin from the {topic} briefing lists timelines for {filler} services",
    "reporters at the {topic} site describe a steady scene near {filler}",
    "agency channel posts {topic} guidance for residents across {filler}",
    "press pool carries the {topic} schedule and roadway details for {filler}",
]

RUMOR_TEMPLATES = [
    "somebody heard the {topic} numbers are way off around {filler}",
    "friends whisper the {topic} footage looks recycled from another {filler}",
    "people swear the {topic} story keeps changing every hour in {filler}",
    "chatter suggests the {topic} photos came from an older {filler}",
    "strangers insist the {topic} tally is being hidden from {filler}",
]

DEBUNK_PHRASES = [
    "this is a hoax",
    "rumor alert, do not share",
    "that is not true",
    "fake news again",
    "debunked already",
    "totally unverified claim",
]

ENDORSE_PHRASES = [
    "confirmed by the press office",
    "official statement is accurate",
    "verified and correct coverage",
    "genuine update, stay calm",
]

NEWS_DOMAINS = ["news-wire.example", "dailynews.example", "city-herald.example"]
BLOG_DOMAINS = ["hotgossip.example", "fringeblog.example", "chainpost.example"]

LARGE_CITIES = ["london", "berlin", "new york", "tokyo", "munich"]
SMALL_TOWNS = ["elmwood", "greenvale", "north fork", "dusty springs"]


def synthetic_domain_metadata():
    """Offline domain snapshot matching the generator's URL pools."""
    records = {}
    for d in NEWS_DOMAINS:
        records[d] = DomainRecord(wot_score=90.0, rank=1200, is_news=True)
    for d in BLOG_DOMAINS:
        records[d] = DomainRecord(wot_score=25.0, rank=800000, is_news=False)
    return DomainMetadata(records=records)


@dataclass(frozen=True)
class SynthConfig:
    margin: float = 1.0
    min_tweets: int = 60
    max_tweets: int = 140
    credibility_text: bool = True
    ramp_hours: float = 0.0
    start_time: float = DEFAULT_START

    def __post_init__(self):
        if not 0.0 <= self.margin <= 1.0:
            raise DataError("margin must be in [0, 1]")
        if self.min_tweets < 2 or self.max_tweets < self.min_tweets:
            raise DataError("need max_tweets >= min_tweets >= 2")
        if self.ramp_hours < 0:
            raise DataError("ramp_hours must be >= 0")


def _ramp(offset_hours, ramp_hours):
    if ramp_hours <= 0:
        return 1.0
    return min(1.0, offset_hours / ramp_hours)


def _clip_prob(p):
    return min(0.97, max(0.01, p))


def _make_text(rng, is_rumor, topic, cfg, ramp):
    # Phrasing separation scales with margin but not with the ramp: the
    # wording of a tweet is informative from the very first post.
    own_pool_prob = 0.5 + 0.5 * cfg.margin if cfg.credibility_text else 0.5
    use_own = rng.random() < own_pool_prob
    pool = (RUMOR_TEMPLATES if is_rumor else NEWS_TEMPLATES) if use_own else (
        NEWS_TEMPLATES if is_rumor else RUMOR_TEMPLATES
    )
    template = pool[rng.integers(len(pool))]
    text = template.format(
        topic=topic, filler=FILLER[rng.integers(len(FILLER))]
    )
    d = cfg.margin * ramp
    # Debunking chatter targets rumors while endorsements build around news;
    # both need time to warm up.
    p_debunk = _clip_prob(0.03 + (0.45 * d if is_rumor else 0.0))
    if rng.random() < p_debunk:
        text += ", " + DEBUNK_PHRASES[rng.integers(len(DEBUNK_PHRASES))]
    p_endorse = _clip_prob(0.03 + (0.3 * d if not is_rumor else 0.0))
    if rng.random() < p_endorse:
        text += ", " + ENDORSE_PHRASES[rng.integers(len(ENDORSE_PHRASES))]
    p_shout = _clip_prob(0.05 + (0.25 * d if is_rumor else 0.0))
    if rng.random() < p_shout:
        text = text.upper()
    if rng.random() < _clip_prob(0.1 + (0.3 * d if is_rumor else 0.0)):
        text += "?!?"
    return text


def _make_user(rng, is_rumor, created_at, cfg, ramp):
    d = cfg.margin * ramp * (-1.0 if is_rumor else 1.0)
    followers = int(math.exp(rng.normal(5.0 + 1.0 * d, 1.0)))
    friends = int(math.exp(rng.normal(5.0 - 0.5 * d, 0.8)))
    age_days = math.exp(rng.normal(5.5 + 1.0 * d, 0.7))
    city_pool = LARGE_CITIES if rng.random() < _clip_prob(0.4 + 0.3 * d) else SMALL_TOWNS
    return UserProfile(
        followers=followers,
        friends=friends,
        tweets_posted=int(math.exp(rng.normal(6.0 + 0.5 * d, 1.0))),
        photos_posted=int(math.exp(rng.normal(3.0 + 0.4 * d, 1.0))),
        city=city_pool[rng.integers(len(city_pool))],
        join_date=created_at - age_days * 86400.0,
        has_description=bool(rng.random() < _clip_prob(0.5 + 0.35 * d)),
        verified=bool(rng.random() < _clip_prob(0.08 + 0.3 * max(0.0, d))),
    )


def _arrival_offsets_hours(rng, n, is_rumor, cfg):
    # News volume spikes early and sharply; rumors trickle out. Both get a
    # guaranteed tweet in the first few minutes so the frame starts at the
    # event onset.
    scale = 2.5 + (3.0 * cfg.margin if is_rumor else 0.0)
    offsets = rng.gamma(2.0, scale, size=n - 1)
    offsets = np.clip(offsets, 0.0, 47.9)
    first = rng.uniform(0.0, 0.1)
    return np.concatenate(([first], np.sort(offsets)))


def _make_event(rng, index, cfg):
    is_rumor = index % 2 == 0
    label = "rumor" if is_rumor else "news"
    event_id = f"ev{index:04d}"
    topic = TOPICS[rng.integers(len(TOPICS))]
    start = cfg.start_time + index * 96 * 3600.0
    n = int(rng.integers(cfg.min_tweets, cfg.max_tweets + 1))
    offsets = _arrival_offsets_hours(rng, n, is_rumor, cfg)
    tweets = []
    for i, off in enumerate(offsets):
        created_at = start + int(round(off * 3600.0 * 1000.0)) / 1000.0
        ramp = _ramp(off, cfg.ramp_hours)
        d = cfg.margin * ramp
        text = _make_text(rng, is_rumor, topic, cfg, ramp)
        has_url = rng.random() < _clip_prob(0.15 + (0.35 * d if not is_rumor else 0.0))
        if has_url:
            # Both classes start from the same mixed domain pool and drift
            # toward their own side as the signal ramps in.
            p_blog = _clip_prob(0.5 + (0.45 * d if is_rumor else -0.45 * d))
            pool = BLOG_DOMAINS if rng.random() < p_blog else NEWS_DOMAINS
            urls = (f"http://{pool[rng.integers(len(pool))]}/p/{rng.integers(9999)}",)
        else:
            urls = ()
        hashtag_count = int(rng.random() < 0.35)
        mention_count = int(rng.random() < 0.25)
        if hashtag_count:
            text += f" #{topic}"
        if mention_count:
            text += f" @user{rng.integers(999)}"
        is_retweet = bool(rng.random() < 0.25)
        tweets.append(
            Tweet(
                id=f"{event_id}-t{i:04d}",
                text=text,
                created_at=created_at,
                is_retweet=is_retweet,
                retweet_count=int(rng.geometric(0.4) - 1),
                urls=urls,
                hashtag_count=hashtag_count,
                mention_count=mention_count,
                user=_make_user(rng, is_rumor, created_at, cfg, ramp),
            )
        )
    tweets.sort(key=lambda tw: (tw.created_at, tw.id))
    return Event(
        event_id=event_id,
        label=label,
        category=TOPIC_CATEGORY[topic],
        tweets=tuple(tweets),
    )


def generate_synthetic_corpus(seed, n_events, config=None):
    """Generate `n_events` labeled events, half rumor and half news,
    byte-reproducible for a fixed seed."""
    if n_events < 2 or n_events % 2 != 0:
        raise DataError("n_events must be an even number >= 2")
    cfg = config or SynthConfig()
    rng = np.random.default_rng(seed)
    return [_make_event(rng, i, cfg) for i in range(n_events)]

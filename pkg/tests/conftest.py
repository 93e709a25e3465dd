import numpy as np
import pytest

from rumorkit.corpus import Event, Tweet, UserProfile

BASE = 1469145600.0  # 2016-07-22 00:00:00 UTC


def make_user(**overrides):
    defaults = dict(
        followers=100,
        friends=50,
        tweets_posted=1000,
        photos_posted=10,
        city="elmwood",
        join_date=BASE - 400 * 86400.0,
        has_description=True,
        verified=False,
    )
    defaults.update(overrides)
    return UserProfile(**defaults)


def make_tweet(tid="t0", text="hello world", at=BASE, user=None, **overrides):
    defaults = dict(
        id=tid,
        text=text,
        created_at=at,
        is_retweet=False,
        retweet_count=0,
        urls=(),
        hashtag_count=0,
        mention_count=0,
        user=user or make_user(),
    )
    defaults.update(overrides)
    return Tweet(**defaults)


def make_event(tweets, event_id="ev0", label="news", window=None, intervals=48):
    event = Event(
        event_id=event_id,
        label=label,
        category=None,
        tweets=tuple(sorted(tweets, key=lambda tw: (tw.created_at, tw.id))),
    )
    if window == "auto":
        from rumorkit.corpus import select_event_window

        return event.with_window(select_event_window(event.tweets, intervals))
    if window is not None:
        return event.with_window(window)
    return event


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

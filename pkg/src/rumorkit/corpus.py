"""Event-grouped tweet streams: parsing, observation windows, interval buckets.

An event is observed through a fixed 48-hour frame anchored just before its
busiest hour: the hour with the highest tweet volume is ``t_max``, the frame
starts at the first tweet posted in the 48 hours up to (and including) that
hour, and ends exactly 48 hours later. Tweets outside the frame are kept on
the event but ignored by bucketing.
"""

import dataclasses
import json
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import DataError, ParseError

HOUR = 3600.0
WINDOW_SECONDS = 48 * HOUR

SCHEMA_VERSION = 1

LABELS = ("rumor", "news")


@dataclass(frozen=True)
class UserProfile:
    followers: int
    friends: int
    tweets_posted: int
    photos_posted: int
    city: str | None
    join_date: float
    has_description: bool
    verified: bool


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    created_at: float
    is_retweet: bool
    retweet_count: int
    urls: tuple[str, ...]
    hashtag_count: int
    mention_count: int
    user: UserProfile


@dataclass(frozen=True)
class EventWindow:
    """48-hour observation frame.

    t_max is hour-granular (multiple of 3600); t_0 falls in
    (t_max - 48h, t_max + 1h] and t_end is always t_0 + 48h exactly.
    """

    t_max: float
    t_0: float
    interval_count: int = 48

    def __post_init__(self):
        if self.interval_count < 1:
            raise DataError("interval_count must be >= 1")
        if self.t_max % HOUR != 0:
            raise DataError("t_max must be hour-granular")
        if not (self.t_0 - HOUR < self.t_max <= self.t_0 + WINDOW_SECONDS):
            raise DataError("t_max must lie within the observation frame")

    @property
    def t_end(self):
        return self.t_0 + WINDOW_SECONDS

    @property
    def interval_length(self):
        """Interval length in seconds."""
        return WINDOW_SECONDS / self.interval_count

    @property
    def interval_hours(self):
        return 48.0 / self.interval_count


@dataclass(frozen=True)
class Event:
    event_id: str
    label: str | None
    category: str | None
    tweets: tuple[Tweet, ...]
    window: EventWindow | None = None

    def with_window(self, window):
        return dataclasses.replace(self, window=window)


@dataclass(frozen=True)
class IntervalBucket:
    index: int
    tweets: tuple[Tweet, ...]


def hour_floor(ts):
    return (ts // HOUR) * HOUR


def select_event_window(tweets, interval_count=48):
    """Pick the 48-hour observation frame for a time-ordered tweet list.

    The busiest hour (earliest on ties) anchors the frame; the frame starts
    at the earliest tweet posted within the 48 hours ending with that hour.
    Tweets inside the busiest hour itself are anchor candidates, so a
    one-tweet event starts exactly at its tweet.
    """
    if not tweets:
        raise DataError("cannot select a window for an event with no tweets")
    counts = {}
    for tw in tweets:
        h = hour_floor(tw.created_at)
        counts[h] = counts.get(h, 0) + 1
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    t_max = best[0]
    lo, hi = t_max - WINDOW_SECONDS, t_max + HOUR
    candidates = [tw.created_at for tw in tweets if lo <= tw.created_at < hi]
    t_0 = min(candidates)
    return EventWindow(t_max=t_max, t_0=t_0, interval_count=interval_count)


def bucket_intervals(event, interval_count=None):
    """Partition the event's in-window tweets into equal time intervals.

    A tweet at exactly t_end is excluded. Tweets outside [t_0, t_end) are
    silently dropped, not errors.
    """
    if event.window is None:
        raise DataError(f"event {event.event_id} has no window selected")
    n = event.window.interval_count if interval_count is None else interval_count
    if n < 1:
        raise DataError("interval count must be >= 1")
    t_0 = event.window.t_0
    members = [[] for _ in range(n)]
    for tw in event.tweets:
        offset = tw.created_at - t_0
        if 0 <= offset < WINDOW_SECONDS:
            idx = min(int(offset * n / WINDOW_SECONDS), n - 1)
            members[idx].append(tw)
    return [IntervalBucket(index=i, tweets=tuple(ms)) for i, ms in enumerate(members)]


def truncate_at_cutoff(event, hours):
    """Simulate observing only the first `hours` hours of the window."""
    if not 0 < hours <= 48:
        raise DataError(f"cutoff hours must be in (0, 48], got {hours}")
    if event.window is None:
        raise DataError(f"event {event.event_id} has no window selected")
    limit = event.window.t_0 + hours * HOUR
    kept = tuple(tw for tw in event.tweets if tw.created_at < limit)
    return dataclasses.replace(event, tweets=kept)


def volume_series(event, interval_count=None):
    """Per-interval tweet counts inside the observation window."""
    return [len(b.tweets) for b in bucket_intervals(event, interval_count)]


def distinct_user_count(event):
    """Distinct (followers, friends, join_date) triples as a user proxy;
    tweets carry no user id, so profile identity stands in."""
    seen = {
        (tw.user.followers, tw.user.friends, tw.user.join_date)
        for tw in event.tweets
    }
    return len(seen)


# --- line-delimited corpus format (schema v1) ---

def _parse_timestamp(value, line_number, field):
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ParseError(line_number, f"field {field!r} must be a timestamp")
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ParseError(line_number, f"bad timestamp in {field!r}: {exc}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _format_timestamp(ts):
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    return dt.isoformat().replace("+00:00", "Z")


def _require(record, key, line_number):
    if key not in record:
        raise ParseError(line_number, f"missing required field {key!r}")
    return record[key]


def _parse_line(line, line_number):
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(line_number, f"invalid JSON: {exc.msg}") from None
    if not isinstance(record, dict):
        raise ParseError(line_number, "record must be a JSON object")
    version = _require(record, "v", line_number)
    if version != SCHEMA_VERSION:
        raise ParseError(line_number, f"unsupported schema version {version!r}")
    event_id = _require(record, "event_id", line_number)
    if not event_id or not isinstance(event_id, str):
        raise ParseError(line_number, "event_id must be a non-empty string")
    label = _require(record, "label", line_number)
    if label is not None and label not in LABELS:
        raise ParseError(line_number, f"unknown label {label!r}")
    category = record.get("category")

    t = _require(record, "tweet", line_number)
    u = _require(record, "user", line_number)
    if not isinstance(t, dict) or not isinstance(u, dict):
        raise ParseError(line_number, "tweet and user must be objects")

    text = _require(t, "text", line_number)
    if not isinstance(text, str) or not text:
        raise ParseError(line_number, "tweet text must be a non-empty string")
    tweet_id = _require(t, "id", line_number)
    if not tweet_id or not isinstance(tweet_id, str):
        raise ParseError(line_number, "tweet id must be a non-empty string")

    try:
        user = UserProfile(
            followers=max(0, int(_require(u, "followers", line_number))),
            friends=max(0, int(_require(u, "friends", line_number))),
            tweets_posted=max(0, int(_require(u, "tweets_posted", line_number))),
            photos_posted=max(0, int(_require(u, "photos_posted", line_number))),
            city=u.get("city"),
            join_date=_parse_timestamp(
                _require(u, "join_date", line_number), line_number, "join_date"
            ),
            has_description=bool(_require(u, "has_description", line_number)),
            verified=bool(_require(u, "verified", line_number)),
        )
        tweet = Tweet(
            id=tweet_id,
            text=text,
            created_at=_parse_timestamp(
                _require(t, "created_at", line_number), line_number, "created_at"
            ),
            is_retweet=bool(_require(t, "is_retweet", line_number)),
            retweet_count=max(0, int(_require(t, "retweet_count", line_number))),
            urls=tuple(str(x) for x in _require(t, "urls", line_number)),
            hashtag_count=max(0, int(_require(t, "hashtag_count", line_number))),
            mention_count=max(0, int(_require(t, "mention_count", line_number))),
            user=user,
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(line_number, f"bad field value: {exc}") from None
    return event_id, label, category, tweet


def parse_corpus(stream):
    """Parse line-delimited tweet records into Events grouped by event_id.

    `stream` is an iterable of lines (an open file works). Events come back
    in first-seen order with tweets sorted by time; duplicate tweet ids
    within an event keep the first occurrence.
    """
    order = []
    groups = {}
    for line_number, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        event_id, label, category, tweet = _parse_line(line, line_number)
        if event_id not in groups:
            groups[event_id] = {
                "label": label,
                "category": category,
                "tweets": {},
            }
            order.append(event_id)
        group = groups[event_id]
        if label != group["label"]:
            raise ParseError(
                line_number,
                f"event {event_id!r} has conflicting labels "
                f"{group['label']!r} and {label!r}",
            )
        if tweet.id not in group["tweets"]:
            group["tweets"][tweet.id] = tweet
    events = []
    for event_id in order:
        group = groups[event_id]
        tweets = tuple(
            sorted(group["tweets"].values(), key=lambda tw: (tw.created_at, tw.id))
        )
        events.append(
            Event(
                event_id=event_id,
                label=group["label"],
                category=group["category"],
                tweets=tweets,
            )
        )
    return events


def serialize_corpus(events):
    """Inverse of parse_corpus: one schema-v1 JSON line per tweet."""
    lines = []
    for event in events:
        for tw in event.tweets:
            record = {
                "v": SCHEMA_VERSION,
                "event_id": event.event_id,
                "label": event.label,
            }
            if event.category is not None:
                record["category"] = event.category
            record["tweet"] = {
                "id": tw.id,
                "text": tw.text,
                "created_at": _format_timestamp(tw.created_at),
                "is_retweet": tw.is_retweet,
                "retweet_count": tw.retweet_count,
                "urls": list(tw.urls),
                "hashtag_count": tw.hashtag_count,
                "mention_count": tw.mention_count,
            }
            record["user"] = {
                "followers": tw.user.followers,
                "friends": tw.user.friends,
                "tweets_posted": tw.user.tweets_posted,
                "photos_posted": tw.user.photos_posted,
                "city": tw.user.city,
                "join_date": _format_timestamp(tw.user.join_date),
                "has_description": tw.user.has_description,
                "verified": tw.user.verified,
            }
            lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def load_corpus(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_corpus(fh)


def save_corpus(events, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_corpus(events))

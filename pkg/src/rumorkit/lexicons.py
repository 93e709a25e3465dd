"""Word lists and offline domain metadata backing the surface features.

The debunking list ships with a small curated default (hoax, rumor,
"not true", plus additions like fake/false/debunk/unverified/unconfirmed)
and every list can be replaced from plain-text files: UTF-8, one term per
line, `#` starts a comment.

Domain lookups (web-of-trust score, traffic rank, news flag) come from an
offline snapshot file instead of live services. Lookups are total: unknown
domains get a neutral WOT score of 50, no rank, and is_news=False.
"""

import json
from dataclasses import dataclass, field

from .errors import DataError

DEFAULT_POSITIVE = frozenset(
    """good great confirmed true official safe love win happy best support
    verified accurate correct real genuine hope help breaking update calm
    rescue recover praise thank""".split()
)

DEFAULT_NEGATIVE = frozenset(
    """bad awful fake false hoax lies lie wrong terrible fear panic scam
    dead death attack shooting danger worst hate sad angry doubt deny
    misleading shame horrible""".split()
)

# Seeded with hoax / rumor / "not true"; the remaining entries are curated
# additions. Users can replace the list wholesale from a file.
DEFAULT_DEBUNKING = frozenset(
    ["hoax", "rumor", "not true", "fake", "false", "debunk",
     "unverified", "unconfirmed"]
)

EMOTICON_SMILE = frozenset([":->", ":-)", ";->", ";-)"])
# ";->'" appears in both the smile and sad sets on purpose; the sad list is
# taken literally from its source table.
EMOTICON_SAD = frozenset([":-<", ":-(", ";->", ";-("])

PRONOUNS_FIRST = frozenset("i my mine we our ours me us".split())
PRONOUNS_SECOND = frozenset("u you your yours".split())
PRONOUNS_THIRD = frozenset(
    "he she they his her hers their theirs him them it its".split()
)

DEFAULT_LARGE_CITIES = frozenset(
    ["new york", "london", "paris", "berlin", "munich", "tokyo",
     "los angeles", "chicago", "toronto", "sydney", "beijing", "moscow",
     "madrid", "rome", "istanbul", "seoul", "mumbai", "sao paulo"]
)


@dataclass(frozen=True)
class Lexicons:
    positive_words: frozenset = DEFAULT_POSITIVE
    negative_words: frozenset = DEFAULT_NEGATIVE
    debunking_terms: frozenset = DEFAULT_DEBUNKING
    emoticon_smile: frozenset = EMOTICON_SMILE
    emoticon_sad: frozenset = EMOTICON_SAD
    pronouns_first: frozenset = PRONOUNS_FIRST
    pronouns_second: frozenset = PRONOUNS_SECOND
    pronouns_third: frozenset = PRONOUNS_THIRD
    large_cities: frozenset = DEFAULT_LARGE_CITIES


def default_lexicons():
    return Lexicons()


def read_term_file(path):
    """One lowercase term per line; blank lines and `#` comments ignored."""
    terms = set()
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip().lower()
            if line:
                terms.add(line)
    return frozenset(terms)


_LEXICON_FILES = {
    "positive_words": "positive.txt",
    "negative_words": "negative.txt",
    "debunking_terms": "debunking.txt",
    "emoticon_smile": "smile.txt",
    "emoticon_sad": "sad.txt",
    "pronouns_first": "pronouns_first.txt",
    "pronouns_second": "pronouns_second.txt",
    "pronouns_third": "pronouns_third.txt",
    "large_cities": "large_cities.txt",
}


def load_lexicons(directory):
    """Build Lexicons from a directory of term files; missing files fall
    back to the built-in defaults for that slot."""
    import os

    overrides = {}
    for attr, filename in _LEXICON_FILES.items():
        path = os.path.join(directory, filename)
        if os.path.exists(path):
            terms = read_term_file(path)
            if not terms:
                raise DataError(f"lexicon file {path} is empty")
            overrides[attr] = terms
    return Lexicons(**overrides)


NEUTRAL_WOT = 50.0


@dataclass(frozen=True)
class DomainRecord:
    wot_score: float | None = None
    rank: int | None = None
    is_news: bool = False


_NEUTRAL = DomainRecord()


@dataclass
class DomainMetadata:
    records: dict = field(default_factory=dict)

    def lookup(self, domain):
        return self.records.get(domain.lower(), _NEUTRAL)

    def wot(self, domain):
        rec = self.lookup(domain)
        return NEUTRAL_WOT if rec.wot_score is None else rec.wot_score

    def rank_below(self, domain, limit=5000):
        rec = self.lookup(domain)
        return rec.rank is not None and rec.rank < limit

    def is_news(self, domain):
        return self.lookup(domain).is_news


def load_domain_metadata(path):
    """Line-delimited records {domain, wot_score?, rank?, is_news}."""
    records = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                domain = rec["domain"].lower()
                records[domain] = DomainRecord(
                    wot_score=rec.get("wot_score"),
                    rank=rec.get("rank"),
                    is_news=bool(rec.get("is_news", False)),
                )
            except (json.JSONDecodeError, KeyError, AttributeError, TypeError):
                raise DataError(
                    f"bad domain metadata at {path}:{line_number}"
                ) from None
    return DomainMetadata(records=records)


def empty_domain_metadata():
    return DomainMetadata()

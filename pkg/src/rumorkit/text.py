"""Tweet text tokenization and lexicon matching.

Word-level features operate on lowercased tokens with URLs and @mentions
stripped first (they are counted separately from tweet metadata). Splitting
is on anything that is not a word character, so punctuation never leaks
into tokens.
"""

import re

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"\w+", re.UNICODE)
_DOMAIN_RE = re.compile(r"^(?:https?://)?(?:www\.)?([^/:?#]+)", re.IGNORECASE)


def tokenize(text):
    """Lowercased word tokens with URLs and @mentions removed."""
    cleaned = _MENTION_RE.sub(" ", _URL_RE.sub(" ", text))
    return _TOKEN_RE.findall(cleaned.lower())


def contains_term(tokens, term):
    """True if `term` occurs in `tokens`; multi-word terms must appear as a
    consecutive token run (substring matching on token boundaries)."""
    parts = term.split()
    if len(parts) == 1:
        return parts[0] in tokens
    n = len(parts)
    return any(tokens[i : i + n] == parts for i in range(len(tokens) - n + 1))


def contains_any_term(tokens, terms):
    return any(contains_term(tokens, t) for t in terms)


def url_domain(url):
    """Registrable host part of a URL-ish string, lowercased ('' if none)."""
    m = _DOMAIN_RE.match(url.strip())
    return m.group(1).lower() if m else ""

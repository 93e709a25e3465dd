"""Single-tweet credibility network, trained from scratch.

Word embeddings feed a one-layer convolution over token windows (tanh
nonlinearity), a 1D max pooling over the time axis shortens the feature-map
sequence, an LSTM reads the pooled sequence, and a softmax on the final
hidden state scores the tweet: index 0 is rumor, index 1 is news. Training
is plain stochastic gradient descent on the negated cross-entropy with a
1/sqrt(epoch) learning-rate decay; dropout masks the pooled sequence during
training only.

Per-interval CreditScore is the mean news probability over the tweets in
the interval, 0.5 for empty intervals.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import DataError, NumericalError
from .text import tokenize
from .validation import as_label_array, check_fitted, check_two_classes

PAD, UNK = 0, 1
PROB_FLOOR = 1e-12

PARAM_ORDER = ("embed", "conv_w", "conv_b", "lstm_w", "lstm_b", "out_w", "out_b")


@dataclass(frozen=True)
class Vocabulary:
    word_to_index: dict
    max_len: int

    @property
    def size(self):
        return len(self.word_to_index) + 2

    def index_of(self, word):
        return self.word_to_index.get(word, UNK)


def build_vocabulary(texts, max_len):
    """Indices from the training split only; 0 is padding, 1 unknown."""
    mapping = {}
    for text in texts:
        for token in tokenize(text):
            if token not in mapping:
                mapping[token] = len(mapping) + 2
    return Vocabulary(word_to_index=mapping, max_len=max_len)


def encode_tweet(text, vocab):
    """Token indices right-padded with 0 to the fixed length; unknown words
    map to 1 and overlong tweets are truncated."""
    indices = [vocab.index_of(t) for t in tokenize(text)][: vocab.max_len]
    indices.extend([PAD] * (vocab.max_len - len(indices)))
    return np.array(indices, dtype=np.int64)


def encode_batch(texts, vocab):
    return np.stack([encode_tweet(t, vocab) for t in texts])


@dataclass(frozen=True)
class NetConfig:
    embedding_dim: int
    filter_count: int
    window: int
    pool_width: int
    hidden_size: int
    max_len: int

    @property
    def conv_steps(self):
        return self.max_len - self.window + 1

    @property
    def pooled_steps(self):
        return -(-self.conv_steps // self.pool_width)


def init_params(config, vocab_size, rng):
    k, m, h, d = (
        config.embedding_dim,
        config.filter_count,
        config.window,
        config.hidden_size,
    )
    def glorot(rows, cols):
        r = math.sqrt(6.0 / (rows + cols))
        return rng.uniform(-r, r, size=(rows, cols))

    params = {
        "embed": rng.uniform(-0.5, 0.5, size=(vocab_size, k)),
        "conv_w": glorot(m, h * k),
        "conv_b": np.zeros(m),
        "lstm_w": glorot(4 * d, m + d),
        "lstm_b": np.zeros(4 * d),
        "out_w": glorot(2, d),
        "out_b": np.zeros(2),
    }
    # Forget gate opens by default so early gradients reach back in time.
    params["lstm_b"][d : 2 * d] = 1.0
    return params


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def forward_batch(params, tokens, config, dropout_mask=None):
    """Probabilities (batch, 2) plus the cache needed for backprop."""
    h, p = config.window, config.pool_width
    B, n = tokens.shape
    T = n - h + 1
    X = params["embed"][tokens]  # (B, n, k)
    windows = np.concatenate([X[:, i : i + T] for i in range(h)], axis=2)
    conv_pre = windows @ params["conv_w"].T + params["conv_b"]
    conv = np.tanh(conv_pre)  # (B, T, m)

    q = config.pooled_steps
    padded = np.full((B, q * p, conv.shape[2]), -np.inf)
    padded[:, :T] = conv
    blocks = padded.reshape(B, q, p, -1)
    argmax = blocks.argmax(axis=2)  # first maximal index on ties
    pooled = np.take_along_axis(blocks, argmax[:, :, None, :], axis=2)[:, :, 0, :]

    dropped = pooled if dropout_mask is None else pooled * dropout_mask

    d = config.hidden_size
    hidden = np.zeros((B, d))
    cell = np.zeros((B, d))
    steps = []
    for t in range(q):
        z = np.concatenate([dropped[:, t], hidden], axis=1)
        gates = z @ params["lstm_w"].T + params["lstm_b"]
        gi = _sigmoid(gates[:, :d])
        gf = _sigmoid(gates[:, d : 2 * d])
        gg = np.tanh(gates[:, 2 * d : 3 * d])
        go = _sigmoid(gates[:, 3 * d :])
        cell_prev = cell
        cell = gf * cell_prev + gi * gg
        tanh_cell = np.tanh(cell)
        hidden = go * tanh_cell
        steps.append((z, gi, gf, gg, go, cell_prev, tanh_cell))

    logits = hidden @ params["out_w"].T + params["out_b"]
    probs = _softmax(logits)
    cache = {
        "tokens": tokens,
        "windows": windows,
        "conv": conv,
        "argmax": argmax,
        "pooled": pooled,
        "dropout_mask": dropout_mask,
        "dropped": dropped,
        "steps": steps,
        "hidden": hidden,
        "probs": probs,
    }
    return probs, cache


def forward(params, indices, config):
    """Single-sequence scoring: returns (p_rumor, p_news)."""
    probs, _ = forward_batch(params, np.asarray(indices)[None, :], config)
    return float(probs[0, 0]), float(probs[0, 1])


def loss_value(probs, y):
    """Mean negated cross-entropy with probabilities clamped away from 0/1."""
    picked = np.clip(probs[np.arange(len(y)), y], PROB_FLOOR, 1.0 - PROB_FLOOR)
    return float(-np.mean(np.log(picked)))


def loss(params, tokens, y, config):
    probs, _ = forward_batch(params, tokens, config)
    return loss_value(probs, y)


def backward_batch(params, cache, y, config):
    """Gradients of the mean cross-entropy for every parameter tensor."""
    h, p, d = config.window, config.pool_width, config.hidden_size
    k = config.embedding_dim
    tokens = cache["tokens"]
    B, n = tokens.shape
    T = n - h + 1
    q = config.pooled_steps

    probs = cache["probs"].copy()
    probs[np.arange(B), y] -= 1.0
    dlogits = probs / B

    grads = {name: np.zeros_like(params[name]) for name in PARAM_ORDER}
    grads["out_w"] = dlogits.T @ cache["hidden"]
    grads["out_b"] = dlogits.sum(axis=0)

    dhidden = dlogits @ params["out_w"]
    dcell = np.zeros((B, d))
    ddropped = np.zeros_like(cache["dropped"])
    for t in range(q - 1, -1, -1):
        z, gi, gf, gg, go, cell_prev, tanh_cell = cache["steps"][t]
        do = dhidden * tanh_cell
        dcell = dcell + dhidden * go * (1.0 - tanh_cell**2)
        di = dcell * gg
        dg = dcell * gi
        df = dcell * cell_prev
        dgates = np.concatenate(
            [
                di * gi * (1.0 - gi),
                df * gf * (1.0 - gf),
                dg * (1.0 - gg**2),
                do * go * (1.0 - go),
            ],
            axis=1,
        )
        grads["lstm_w"] += dgates.T @ z
        grads["lstm_b"] += dgates.sum(axis=0)
        dz = dgates @ params["lstm_w"]
        ddropped[:, t] = dz[:, : z.shape[1] - d]
        dhidden = dz[:, z.shape[1] - d :]
        dcell = dcell * gf

    dpooled = (
        ddropped if cache["dropout_mask"] is None
        else ddropped * cache["dropout_mask"]
    )

    dconv = np.zeros_like(cache["conv"])  # (B, T, m)
    flat_positions = cache["argmax"] + (
        np.arange(q)[None, :, None] * p
    )  # index into padded time axis
    valid = flat_positions < T
    b_idx, q_idx, m_idx = np.nonzero(valid)
    np.add.at(
        dconv,
        (b_idx, flat_positions[b_idx, q_idx, m_idx], m_idx),
        dpooled[b_idx, q_idx, m_idx],
    )

    dconv_pre = dconv * (1.0 - cache["conv"] ** 2)
    grads["conv_w"] = np.tensordot(dconv_pre, cache["windows"], axes=([0, 1], [0, 1]))
    grads["conv_b"] = dconv_pre.sum(axis=(0, 1))

    dwindows = dconv_pre @ params["conv_w"]  # (B, T, h*k)
    dX = np.zeros((B, n, k))
    for i in range(h):
        dX[:, i : i + T] += dwindows[:, :, i * k : (i + 1) * k]
    np.add.at(grads["embed"], tokens, dX)
    return grads


def flatten_params(params):
    return np.concatenate([params[name].ravel() for name in PARAM_ORDER])


def unflatten_params(vector, template):
    out = {}
    offset = 0
    for name in PARAM_ORDER:
        size = template[name].size
        out[name] = vector[offset : offset + size].reshape(template[name].shape)
        offset += size
    return out


def parameter_count(params):
    return sum(params[name].size for name in PARAM_ORDER)


@dataclass
class CreditScoreSeries:
    """Per-interval mean news probability and tweet counts."""

    values: np.ndarray
    counts: np.ndarray


class CredibilityNetwork(ClassifierMixin, BaseEstimator):
    """Tweet-level rumor/news scorer with the paper-scale defaults."""

    def __init__(
        self,
        embedding_dim=50,
        filter_count=64,
        window=3,
        pool_width=2,
        hidden_size=64,
        max_len=40,
        dropout=0.25,
        learning_rate=0.2,
        epochs=20,
        batch_size=32,
        seed=0,
    ):
        self.embedding_dim = embedding_dim
        self.filter_count = filter_count
        self.window = window
        self.pool_width = pool_width
        self.hidden_size = hidden_size
        self.max_len = max_len
        self.dropout = dropout
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed

    def _config(self):
        if self.max_len < self.window:
            raise DataError("max_len must be >= window")
        return NetConfig(
            embedding_dim=self.embedding_dim,
            filter_count=self.filter_count,
            window=self.window,
            pool_width=self.pool_width,
            hidden_size=self.hidden_size,
            max_len=self.max_len,
        )

    def fit(self, texts, labels):
        config = self._config()
        y = as_label_array(labels)
        check_two_classes(y)
        if len(texts) != y.size:
            raise DataError("texts and labels must align")
        self.vocab_ = build_vocabulary(texts, self.max_len)
        rng = np.random.default_rng(self.seed)
        self.params_ = init_params(config, self.vocab_.size, rng)
        tokens = encode_batch(texts, self.vocab_)
        n = tokens.shape[0]
        keep = 1.0 - self.dropout
        self.loss_history_ = []
        for epoch in range(1, self.epochs + 1):
            lr = self.learning_rate / math.sqrt(epoch)
            order = rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, self.batch_size):
                idx = order[start : start + self.batch_size]
                batch = tokens[idx]
                mask = None
                if self.dropout > 0:
                    shape = (len(idx), config.pooled_steps, self.filter_count)
                    mask = (rng.random(shape) < keep) / keep
                probs, cache = forward_batch(self.params_, batch, config, mask)
                batch_loss = loss_value(probs, y[idx])
                if not math.isfinite(batch_loss):
                    raise NumericalError(
                        f"training diverged at epoch {epoch} (loss={batch_loss})"
                    )
                epoch_loss += batch_loss * len(idx)
                grads = backward_batch(self.params_, cache, y[idx], config)
                if lr > 0:
                    for name in PARAM_ORDER:
                        self.params_[name] -= lr * grads[name]
            self.loss_history_.append(epoch_loss / n)
        self.classes_ = np.array(["rumor", "news"])
        return self

    def predict_proba(self, texts):
        """Columns follow classes_: (p_rumor, p_news)."""
        check_fitted(self, "params_")
        if len(texts) == 0:
            return np.empty((0, 2))
        config = self._config()
        probs, _ = forward_batch(self.params_, encode_batch(texts, self.vocab_), config)
        return probs

    def predict(self, texts):
        proba = self.predict_proba(texts)
        return np.where(proba[:, 0] > 0.5, "rumor", "news")


def credit_score(model, buckets):
    """Mean news probability per interval bucket; empty buckets sit at the
    neutral 0.5."""
    values = np.full(len(buckets), 0.5)
    counts = np.zeros(len(buckets), dtype=np.int64)
    for j, bucket in enumerate(buckets):
        counts[j] = len(bucket.tweets)
        if bucket.tweets:
            probs = model.predict_proba([tw.text for tw in bucket.tweets])
            values[j] = float(np.mean(probs[:, 1]))
    return CreditScoreSeries(values=values, counts=counts)

"""Save/load for trained models on top of the container format."""

import numpy as np

from .credibility import PARAM_ORDER, CredibilityNetwork, Vocabulary
from .errors import DataError
from .forest import RandomForestRumorClassifier, TreeNode
from .model_io import read_container, write_container
from .svm import RbfSvmClassifier


def save_credibility(model, path):
    meta = {
        "params": model.get_params(),
        "vocab": sorted(model.vocab_.word_to_index.items(), key=lambda kv: kv[1]),
        "max_len": model.vocab_.max_len,
    }
    tensors = [(name, model.params_[name], "f4") for name in PARAM_ORDER]
    write_container(path, "credibility", meta, tensors)


def load_credibility(path):
    _, meta, tensors = read_container(path, "credibility")
    model = CredibilityNetwork(**meta["params"])
    model.vocab_ = Vocabulary(
        word_to_index=dict(meta["vocab"]), max_len=meta["max_len"]
    )
    model.params_ = {
        name: tensors[name].astype(np.float64) for name in PARAM_ORDER
    }
    model.classes_ = np.array(["rumor", "news"])
    return model


def _flatten_tree(node, nodes):
    """Append node records depth-first; returns this node's index."""
    idx = len(nodes)
    nodes.append(None)
    if node.is_leaf:
        nodes[idx] = (-1, 0.0, -1, -1, float(node.counts[0]), float(node.counts[1]))
    else:
        left = _flatten_tree(node.left, nodes)
        right = _flatten_tree(node.right, nodes)
        nodes[idx] = (node.feature, node.threshold, left, right, 0.0, 0.0)
    return idx


def _rebuild_tree(records, idx):
    feature, threshold, left, right, c0, c1 = records[idx]
    if feature < 0:
        return TreeNode(counts=np.array([c0, c1]))
    node = TreeNode(feature=int(feature), threshold=float(threshold))
    node.left = _rebuild_tree(records, int(left))
    node.right = _rebuild_tree(records, int(right))
    return node


def save_forest(model, path):
    offsets = [0]
    all_nodes = []
    for tree in model.trees_:
        nodes = []
        _flatten_tree(tree, nodes)
        all_nodes.extend(nodes)
        offsets.append(len(all_nodes))
    rec = np.array(all_nodes, dtype=np.float64).reshape(-1, 6)
    meta = {
        "params": model.get_params(),
        "n_features": model.n_features_in_,
        "column_names": getattr(model, "column_names_", None),
    }
    tensors = [
        ("offsets", np.array(offsets), "i8"),
        ("features", rec[:, 0], "i8"),
        ("thresholds", rec[:, 1], "f8"),
        ("left", rec[:, 2], "i8"),
        ("right", rec[:, 3], "i8"),
        ("counts", rec[:, 4:6], "f8"),
        ("importances", model.feature_importances_, "f8"),
    ]
    write_container(path, "forest", meta, tensors)


def load_forest(path):
    _, meta, t = read_container(path, "forest")
    model = RandomForestRumorClassifier(**meta["params"])
    records = list(
        zip(
            t["features"].tolist(),
            t["thresholds"].tolist(),
            t["left"].tolist(),
            t["right"].tolist(),
            t["counts"][:, 0].tolist(),
            t["counts"][:, 1].tolist(),
        )
    )
    offsets = t["offsets"].tolist()
    trees = []
    for i in range(len(offsets) - 1):
        chunk = records[offsets[i] : offsets[i + 1]]
        trees.append(_rebuild_tree(chunk, 0))
    model.trees_ = trees
    model.n_features_in_ = int(meta["n_features"])
    model.feature_importances_ = t["importances"].astype(np.float64)
    model.classes_ = np.array(["rumor", "news"])
    if meta.get("column_names"):
        model.column_names_ = list(meta["column_names"])
    return model


def save_svm(model, path):
    meta = {
        "params": model.get_params(),
        "n_features": model.n_features_in_,
        "converged": bool(model.converged_),
        "intercept": float(model.intercept_),
        "column_names": getattr(model, "column_names_", None),
    }
    tensors = [
        ("support_vectors", model.support_vectors_, "f8"),
        ("dual_coef", model.dual_coef_, "f8"),
    ]
    write_container(path, "svm", meta, tensors)


def load_svm(path):
    _, meta, t = read_container(path, "svm")
    model = RbfSvmClassifier(**meta["params"])
    model.support_vectors_ = t["support_vectors"].astype(np.float64)
    model.dual_coef_ = t["dual_coef"].astype(np.float64)
    model.intercept_ = float(meta["intercept"])
    model.converged_ = bool(meta["converged"])
    model.n_features_in_ = int(meta["n_features"])
    model.classes_ = np.array(["rumor", "news"])
    if meta.get("column_names"):
        model.column_names_ = list(meta["column_names"])
    return model


def load_classifier(path):
    """Dispatch on the container kind (forest or svm)."""
    kind, _, _ = read_container(path)
    if kind == "forest":
        return load_forest(path)
    if kind == "svm":
        return load_svm(path)
    raise DataError(f"{path}: {kind!r} is not a classifier container")

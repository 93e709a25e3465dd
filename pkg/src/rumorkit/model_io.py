"""Versioned self-describing model containers.

Layout: one UTF-8 JSON header line (schema version, model kind, arbitrary
metadata, and the tensor directory with names, dtypes, and shapes) followed
by the raw little-endian tensor bytes in directory order. Headers are
serialized with sorted keys so identical models produce identical bytes.
"""

import json

import numpy as np

from .errors import DataError

SCHEMA_VERSION = 1

_DTYPES = {"f4": "<f4", "f8": "<f8", "i4": "<i4", "i8": "<i8"}


def write_container(path, kind, meta, tensors):
    """`tensors` is a list of (name, array, dtype-code) triples; dtype codes
    are f4/f8/i4/i8 and arrays are cast on write."""
    directory = []
    blobs = []
    for name, array, code in tensors:
        arr = np.ascontiguousarray(array, dtype=_DTYPES[code])
        directory.append({"name": name, "dtype": code, "shape": list(arr.shape)})
        blobs.append(arr.tobytes())
    header = {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "meta": meta,
        "tensors": directory,
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True, ensure_ascii=False).encode("utf-8"))
        fh.write(b"\n")
        for blob in blobs:
            fh.write(blob)


def read_container(path, expected_kind=None):
    """Returns (kind, meta, {tensor name: array})."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise DataError(f"{path} is not a model container") from None
        if header.get("schema") != SCHEMA_VERSION:
            raise DataError(f"unsupported model schema {header.get('schema')!r}")
        if expected_kind is not None and header.get("kind") != expected_kind:
            raise DataError(
                f"expected a {expected_kind!r} model, found {header.get('kind')!r}"
            )
        tensors = {}
        for entry in header["tensors"]:
            dtype = np.dtype(_DTYPES[entry["dtype"]])
            count = int(np.prod(entry["shape"])) if entry["shape"] else 1
            raw = fh.read(count * dtype.itemsize)
            if len(raw) != count * dtype.itemsize:
                raise DataError(f"{path}: truncated tensor {entry['name']!r}")
            tensors[entry["name"]] = np.frombuffer(raw, dtype=dtype).reshape(
                entry["shape"]
            )
        return header["kind"], header["meta"], tensors

"""On-disk epoch bundles: one directory per (subject, session) recording.

A bundle is a directory holding ``meta.json`` and ``data.bin``.  The binary
file is raw little-endian 32-bit floats in C order with shape
``[n_trials][n_channels][n_samples]``; the JSON file declares the shape,
sampling rate, per-trial labels, and provenance ids.  Serialization is
lossless for float32-representable samples, so a save/load cycle is
bit-exact and repeated saves of the same epochs are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .datasets import Dataset
from .dsp import Epochs
from .errors import CorruptBundle, InvalidInput, NotFound, UnsupportedVersion

SCHEMA_VERSION = 1
META_NAME = "meta.json"
DATA_NAME = "data.bin"

_PARADIGMS = ("mi", "erp", "ssvep")


def _default_channels(n: int) -> list:
    return [f"ch{i:02d}" for i in range(n)]


def save_bundle(path, epochs: Epochs, paradigm: str, subject: str,
                session: str, channels=None) -> Path:
    """Write one recording into directory ``path``; returns that path.

    ``channels`` optionally names the rows of each trial; defaults to
    ``ch00``, ``ch01``, ...  Samples are stored as little-endian float32.
    """
    if paradigm not in _PARADIGMS:
        raise InvalidInput(f"unknown paradigm {paradigm!r}")
    if channels is None:
        channels = _default_channels(epochs.n_channels)
    channels = [str(c) for c in channels]
    if len(channels) != epochs.n_channels:
        raise InvalidInput("channel names must match the channel count")

    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "paradigm": paradigm,
        "subject": str(subject),
        "session": str(session),
        "sfreq": float(epochs.sfreq),
        "tmin": float(epochs.tmin),
        "shape": [epochs.n_trials, epochs.n_channels, epochs.n_samples],
        "channels": channels,
        "labels": [int(v) for v in epochs.labels],
        "class_names": [str(c) for c in epochs.class_names],
    }
    text = json.dumps(meta, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    (path / META_NAME).write_bytes(text.encode("utf-8"))
    raw = np.ascontiguousarray(epochs.data, dtype="<f4").tobytes()
    (path / DATA_NAME).write_bytes(raw)
    return path


def _require(meta: dict, key):
    if key not in meta:
        raise CorruptBundle(f"meta.json is missing {key!r}")
    return meta[key]


def load_bundle(path):
    """Read a bundle directory back as ``(Epochs, ids)``.

    ``ids`` carries the provenance fields (paradigm, subject, session,
    channels).  Declared dimensions are cross-checked against the label
    list, the channel list, and the byte length of ``data.bin``.
    """
    path = Path(path)
    meta_path = path / META_NAME
    data_path = path / DATA_NAME
    if not meta_path.is_file() or not data_path.is_file():
        raise NotFound(f"no epoch bundle at {path}")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CorruptBundle(f"meta.json is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict):
        raise CorruptBundle("meta.json must hold a JSON object")

    version = _require(meta, "schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema_version {version!r} is not supported")

    paradigm = _require(meta, "paradigm")
    if paradigm not in _PARADIGMS:
        raise CorruptBundle(f"unknown paradigm {paradigm!r}")
    shape = _require(meta, "shape")
    if (not isinstance(shape, list) or len(shape) != 3
            or any(not isinstance(v, int) or v < 1 for v in shape)):
        raise CorruptBundle(f"shape must be three positive ints, got {shape!r}")
    n_trials, n_channels, n_samples = shape

    labels = _require(meta, "labels")
    if len(labels) != n_trials:
        raise CorruptBundle(
            f"labels length {len(labels)} != declared n_trials {n_trials}")
    channels = [str(c) for c in _require(meta, "channels")]
    if len(channels) != n_channels:
        raise CorruptBundle(
            f"channel list length {len(channels)} != declared "
            f"n_channels {n_channels}")

    raw = data_path.read_bytes()
    expected = 4 * n_trials * n_channels * n_samples
    if len(raw) != expected:
        raise CorruptBundle(
            f"data.bin holds {len(raw)} bytes, expected {expected}")
    data = np.frombuffer(raw, dtype="<f4").reshape(shape)

    try:
        epochs = Epochs(
            data=data.astype(float),
            labels=np.asarray(labels, dtype=int),
            sfreq=float(_require(meta, "sfreq")),
            tmin=float(meta.get("tmin", 0.0)),
            class_names=tuple(meta.get("class_names", ())),
        )
    except InvalidInput as exc:
        raise CorruptBundle(f"bundle does not form valid epochs: {exc}") from exc
    ids = {
        "paradigm": paradigm,
        "subject": str(_require(meta, "subject")),
        "session": str(_require(meta, "session")),
        "channels": channels,
    }
    return epochs, ids


def save_dataset(root, dataset: Dataset) -> Path:
    """Write every recording of ``dataset`` under ``root/<subject>/<session>``."""
    root = Path(root)
    for subject, session, epochs in dataset.iter_units():
        save_bundle(root / subject / session, epochs, dataset.paradigm,
                    subject, session)
    return root


def load_dataset(root, dataset_id=None) -> Dataset:
    """Assemble every bundle found under ``root`` into one dataset.

    Bundles are located by their ``meta.json`` files, so the directory
    layout is free-form; subject and session ids come from the metadata.
    All bundles must agree on paradigm.
    """
    root = Path(root)
    metas = sorted(root.rglob(META_NAME)) if root.is_dir() else []
    if not metas:
        raise NotFound(f"no epoch bundles under {root}")
    sessions: dict = {}
    paradigm = None
    for meta_path in metas:
        epochs, ids = load_bundle(meta_path.parent)
        if paradigm is None:
            paradigm = ids["paradigm"]
        elif ids["paradigm"] != paradigm:
            raise CorruptBundle(
                f"mixed paradigms under {root}: {paradigm} vs "
                f"{ids['paradigm']} in {meta_path.parent}")
        by_subject = sessions.setdefault(ids["subject"], {})
        if ids["session"] in by_subject:
            raise CorruptBundle(
                f"duplicate bundle for subject {ids['subject']!r} "
                f"session {ids['session']!r}")
        by_subject[ids["session"]] = epochs
    return Dataset(dataset_id or root.name, paradigm, sessions)

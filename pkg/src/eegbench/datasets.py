"""In-memory dataset container shared by generators, loaders, and the harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import Epochs, design_butter_bandpass, filtfilt, resample_array
from .errors import InvalidInput, NotFound


@dataclass
class Dataset:
    """Epochs organized by subject and session.

    ``sessions`` maps subject id -> session id -> :class:`Epochs`.  Ids are
    strings so loaded and generated data address uniformly.
    """

    dataset_id: str
    paradigm: str
    sessions: dict

    def __post_init__(self):
        if self.paradigm not in ("mi", "erp", "ssvep"):
            raise InvalidInput(f"unknown paradigm {self.paradigm!r}")
        if not self.sessions:
            raise InvalidInput("dataset has no subjects")

    @property
    def subject_ids(self) -> list[str]:
        return sorted(self.sessions)

    def session_ids(self, subject: str) -> list[str]:
        if subject not in self.sessions:
            raise NotFound(f"no subject {subject!r} in {self.dataset_id}")
        return sorted(self.sessions[subject])

    def epochs(self, subject: str, session: str) -> Epochs:
        try:
            return self.sessions[subject][session]
        except KeyError as exc:
            raise NotFound(
                f"no epochs for subject {subject!r} session {session!r}"
            ) from exc

    def iter_units(self):
        for subject in self.subject_ids:
            for session in self.session_ids(subject):
                yield subject, session, self.sessions[subject][session]

    @property
    def class_names(self) -> tuple:
        first = next(iter(self.iter_units()))[2]
        return first.class_names

    @property
    def n_classes(self) -> int:
        labels = np.concatenate([e.labels for _, _, e in self.iter_units()])
        return int(np.unique(labels).size)


def preprocess(
    dataset: Dataset,
    band: tuple[float, float] | None = None,
    target_sfreq: float | None = None,
) -> Dataset:
    """Bandpass (zero phase) and optionally resample every session's trials."""
    out = {}
    for subject, session, ep in dataset.iter_units():
        data = ep.data
        sfreq = ep.sfreq
        if band is not None:
            cascade = design_butter_bandpass(band[0], band[1], sfreq)
            data = filtfilt(cascade, data)
        if target_sfreq is not None and target_sfreq != sfreq:
            data = resample_array(data, sfreq, target_sfreq)
            sfreq = target_sfreq
        out.setdefault(subject, {})[session] = Epochs(
            data, ep.labels, sfreq, ep.tmin, ep.class_names
        )
    return Dataset(dataset.dataset_id, dataset.paradigm, out)

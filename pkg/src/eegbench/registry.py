"""Embedded metadata for the benchmark's EEG dataset corpus.

One descriptor per corpus: 14 motor-imagery, 15 ERP, and 7 SSVEP entries.
Counts transcribe the published recording parameters; where a corpus is
irregular across subjects (sessions, runs, or per-class trial counts) the
descriptor stores the typical value and preserves the irregularity in
``notes``.  ``n_classes`` counts every recorded class, including the ones
most studies drop; ``class_names`` lists only those the source names.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput, NotFound


@dataclass(frozen=True)
class DatasetDescriptor:
    id: str
    paradigm: str
    n_subjects: int
    n_channels: int
    n_classes: int
    trials_per_class_per_session: float | dict
    trial_len_s: float
    sfreq_hz: float
    n_sessions: int
    n_runs: int
    class_names: tuple = ()
    notes: str = ""

    def __post_init__(self):
        if self.paradigm not in ("mi", "erp", "ssvep"):
            raise InvalidInput(f"unknown paradigm {self.paradigm!r}")
        for name in ("n_subjects", "n_channels", "n_classes", "n_sessions", "n_runs"):
            if getattr(self, name) < 1:
                raise InvalidInput(f"{name} must be at least 1")
        if self.trial_len_s <= 0 or self.sfreq_hz <= 0:
            raise InvalidInput("trial_len_s and sfreq_hz must be positive")
        if isinstance(self.trials_per_class_per_session, dict):
            if len(self.trials_per_class_per_session) != self.n_classes:
                raise InvalidInput("per-class trial counts must cover every class")
        elif self.trials_per_class_per_session <= 0:
            raise InvalidInput("trials_per_class_per_session must be positive")
        if len(self.class_names) > self.n_classes:
            raise InvalidInput("more class names than classes")

    @property
    def trials_per_session(self) -> float:
        """Trials per session, summed over classes."""
        t = self.trials_per_class_per_session
        if isinstance(t, dict):
            return float(sum(t.values()))
        return float(t * self.n_classes)

    @property
    def total_trials(self) -> float:
        """Nominal corpus-wide trial count per subject."""
        return self.trials_per_session * self.n_sessions


def _mi(id, n_subjects, n_channels, n_classes, trials, trial_len_s,
        sfreq, n_sessions, n_runs, class_names, notes=""):
    return DatasetDescriptor(
        id, "mi", n_subjects, n_channels, n_classes, trials,
        trial_len_s, sfreq, n_sessions, n_runs, class_names, notes,
    )


def _erp(id, n_subjects, n_channels, nt, t, epoch_len_s, sfreq,
         n_sessions, n_runs, notes=""):
    return DatasetDescriptor(
        id, "erp", n_subjects, n_channels, 2,
        {"NonTarget": nt, "Target": t}, epoch_len_s, sfreq, n_sessions,
        n_runs, ("NonTarget", "Target"), notes,
    )


def _ssvep(id, n_subjects, n_channels, n_classes, trials, trial_len_s,
           sfreq, n_sessions, n_runs, class_names=(), notes=""):
    return DatasetDescriptor(
        id, "ssvep", n_subjects, n_channels, n_classes, trials,
        trial_len_s, sfreq, n_sessions, n_runs, class_names, notes,
    )


MI_DATASETS = (
    _mi("AlexMI", 8, 16, 3, 20.0, 3.0, 512.0, 1, 1, ("RH", "F", "R"),
        "two classes typically used, resting state optional"),
    _mi("BNCI2014_001", 9, 22, 4, 72.0, 4.0, 250.0, 2, 6, ("RH", "LH", "F", "T"),
        "three classes typically used, tongue optional"),
    _mi("BNCI2014_002", 14, 15, 2, 80.0, 5.0, 512.0, 1, 8, ("RH", "F")),
    _mi("BNCI2014_004", 9, 3, 2, 72.4, 4.5, 250.0, 5, 1, ("RH", "LH"),
        "trials per class per session 72.4 +- 9.5"),
    _mi("BNCI2015_001", 12, 13, 2, 100.0, 5.0, 512.0, 2, 1, ("RH", "F"),
        "3 sessions for subjects 8-11, 2 otherwise"),
    _mi("BNCI2015_004", 9, 30, 5, 39.4, 7.0, 256.0, 2, 1, ("RH", "F"),
        "two of five recorded classes named; trials 39.4 +- 1.6"),
    _mi("Cho2017", 52, 64, 2, 101.2, 3.0, 512.0, 1, 1, ("RH", "LH"),
        "trials per class per session 101.2 +- 4.7"),
    _mi("Lee2019_MI", 54, 62, 2, 50.0, 4.0, 1000.0, 2, 1, ("RH", "LH")),
    _mi("GrosseWentrup2009", 10, 128, 2, 150.0, 7.0, 500.0, 1, 1, ("RH", "LH")),
    _mi("PhysionetMI", 109, 64, 5, 22.6, 3.0, 160.0, 1, 6,
        ("RH", "LH", "H", "F", "R"),
        "four classes typically used; trials 22.6 +- 1.3; run count nominal"),
    _mi("Schirrmeister2017", 14, 128, 4, 240.8, 4.0, 500.0, 1, 2,
        ("RH", "LH", "F", "R"),
        "three classes typically used; trials 240.8 +- 37.7"),
    _mi("Shin2017A", 29, 30, 2, 10.0, 10.0, 200.0, 3, 1, ("RH", "LH")),
    _mi("Weibo2014", 10, 60, 7, 79.0, 4.0, 200.0, 1, 1,
        ("RH", "LH", "H", "F", "LHRF", "RHLF", "R"),
        "four classes typically used; trials 79 +- 3"),
    _mi("Zhou2016", 4, 14, 3, 50.0, 5.0, 250.0, 3, 2, ("RH", "LF", "F"),
        "trials per class per session 50 +- 3.5"),
)

ERP_DATASETS = (
    _erp("BI2012", 25, 16, 638.2, 127.6, 1.0, 128.0, 1, 1, "36-alien keyboard"),
    _erp("BI2013a", 24, 16, 400.3, 80.1, 1.0, 512.0, 1, 1,
         "8 sessions for subjects 1-7, 1 for subjects 8-24; 36-alien keyboard"),
    _erp("BI2014a", 64, 16, 794.5, 158.9, 1.0, 512.0, 1, 1, "36-alien keyboard"),
    _erp("BI2014b", 37, 32, 201.3, 40.3, 1.0, 512.0, 1, 1, "36-alien keyboard"),
    _erp("BI2015a", 43, 32, 461.8, 92.3, 1.0, 512.0, 3, 1, "36-alien keyboard"),
    _erp("BI2015b", 44, 32, 2158.7, 479.9, 1.0, 512.0, 1, 4, "36-alien keyboard"),
    _erp("BNCI2014_008", 8, 8, 3500.0, 700.0, 1.0, 256.0, 1, 1,
         "36-character keyboard"),
    _erp("BNCI2014_009", 10, 16, 480.0, 96.0, 0.8, 256.0, 3, 1,
         "36-character keyboard"),
    _erp("BNCI2015_003", 10, 8, 2250.0, 270.0, 0.8, 256.0, 1, 2,
         "36-character keyboard; epochs 2250 +- 1500 / 270 +- 60"),
    _erp("EPFLP300", 8, 32, 685.2, 137.2, 1.0, 2048.0, 4, 6, "6-image keyboard"),
    _erp("Huebner2017", 13, 31, 3275.3, 1007.8, 0.9, 1000.0, 3, 9,
         "2 sessions for subject 6, 3 otherwise; 42-character keyboard"),
    _erp("Huebner2018", 12, 31, 3638.4, 1119.6, 0.9, 1000.0, 3, 10,
         "42-character keyboard"),
    _erp("Lee2019_ERP", 54, 62, 3450.0, 690.0, 1.0, 1000.0, 2, 1,
         "36-character keyboard"),
    _erp("Sosulski2019", 13, 31, 75.0, 15.0, 1.2, 1000.0, 3, 20,
         "4 sessions for subject 1, 3 otherwise; 2-tone oddball"),
    _erp("Cattan2019_VR", 21, 16, 600.0, 120.0, 1.0, 512.0, 2, 60,
         "36-cross keyboard"),
)

SSVEP_DATASETS = (
    _ssvep("Lee2019_SSVEP", 54, 62, 4, 25.0, 1.0, 1000.0, 2, 1,
           notes="4 stimulation frequencies in 5.45-12 Hz"),
    _ssvep("MAMEM1", 10, 256, 5,
           {"6.66": 21.0, "7.5": 21.0, "8.57": 16.8, "10.0": 16.8, "12.0": 21.0},
           3.0, 250.0, 1, 5,
           ("6.66", "7.5", "8.57", "10.0", "12.0"),
           "3 runs for subjects 1,3,8; 4 for subjects 4,6; 5 otherwise"),
    _ssvep("MAMEM2", 10, 256, 5,
           {"6.66": 25.0, "7.5": 25.0, "8.57": 30.0, "10.0": 25.0, "12.0": 20.0},
           3.0, 250.0, 1, 5,
           ("6.66", "7.5", "8.57", "10.0", "12.0")),
    _ssvep("MAMEM3", 10, 14, 4,
           {"6.66": 20.0, "8.57": 25.0, "10.0": 30.0, "12.0": 25.0},
           3.0, 128.0, 1, 10,
           ("6.66", "8.57", "10.0", "12.0")),
    _ssvep("Nakanishi2015", 9, 8, 12, 15.0, 4.15, 256.0, 1, 1,
           notes="12 stimulation frequencies in 9.25-14.75 Hz"),
    _ssvep("Kalunga2016", 12, 8, 4, 20.0, 2.0, 256.0, 1, 2,
           ("13", "17", "21", "rest"),
           "5 runs for subject 12, 4 for subject 10, 3 for subject 7, "
           "2 otherwise; trials 20 +- 7.7"),
    _ssvep("Wang2016", 34, 62, 40, 6.0, 5.0, 250.0, 1, 1,
           notes="40 stimulation frequencies in 8-15.8 Hz"),
)

REGISTRY = {d.id: d for d in MI_DATASETS + ERP_DATASETS + SSVEP_DATASETS}


def registry_lookup(id: str) -> DatasetDescriptor:
    """The embedded descriptor for a corpus id."""
    try:
        return REGISTRY[id]
    except KeyError:
        raise NotFound(f"no dataset {id!r} in the registry") from None


def registry_ids(paradigm: str | None = None) -> list[str]:
    return [d.id for d in REGISTRY.values() if paradigm in (None, d.paradigm)]


def sampling_rates() -> set:
    """Every sampling rate appearing in the registry."""
    return {d.sfreq_hz for d in REGISTRY.values()}

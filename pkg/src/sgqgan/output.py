"""Deterministic file writers: identical inputs produce identical bytes.

Floats are rendered with repr (shortest round-trip form); JSON is written
with sorted keys; all newlines are '\n'.
"""

import csv
import json

__all__ = ["write_trials_csv", "write_aggregate_csv", "write_json"]


def write_trials_csv(path, series, value_label: str) -> None:
    """Per-trial metric series as rows of (k, trial_id, value)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "trial_id", value_label])
        for trial_id, values in enumerate(series):
            for k, value in enumerate(values):
                writer.writerow([k, trial_id, repr(float(value))])


def write_aggregate_csv(path, mean, std) -> None:
    """Aggregate bands as rows of (k, mean, std)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "mean", "std"])
        for k, (m, s) in enumerate(zip(mean, std)):
            writer.writerow([k, repr(float(m)), repr(float(s))])


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Schema-validating readers for the harness CSV files."""

from __future__ import annotations

import csv
from collections import defaultdict

import numpy as np

SUMMARY_HEADER = ["experiment_id", "method", "pass", "median_gap", "q10_gap", "q90_gap"]
TTE_HEADER = ["experiment_id", "method", "alpha0", "beta", "rep", "T", "capped"]

__all__ = ["read_summary", "read_tte", "median_over_reps"]


def _read_rows(path, expected_header):
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if header != expected_header:
            raise ValueError(
                f"{path}: header {header!r} does not match schema {expected_header!r}"
            )
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def read_summary(path):
    """summary.csv -> {method: dict of passes/median/q10/q90 arrays}.

    Rows of a method must appear at distinct, increasing checkpoint positions.
    """
    by_method = defaultdict(list)
    for exp_id, method, p, med, q10, q90 in _read_rows(path, SUMMARY_HEADER):
        by_method[method].append((float(p), float(med), float(q10), float(q90)))
    out = {}
    for method, rows in by_method.items():
        arr = np.array(rows)
        if np.any(np.diff(arr[:, 0]) <= 0):
            raise ValueError(f"{path}: non-increasing checkpoints for {method!r}")
        out[method] = {
            "passes": arr[:, 0], "median": arr[:, 1], "q10": arr[:, 2], "q90": arr[:, 3]
        }
    return out


def read_tte(path):
    """tte.csv -> list of (method, alpha0, beta, rep, T, capped) records."""
    records = []
    for exp_id, method, alpha0, beta, rep, T, capped in _read_rows(path, TTE_HEADER):
        records.append(
            (method, float(alpha0), float(beta), int(rep), int(T), bool(int(capped)))
        )
    return records


def median_over_reps(records):
    """{(method, alpha0, beta): median T over replications}.

    The median interpolates linearly between order statistics, matching the
    harness quantile convention.
    """
    cells = defaultdict(list)
    for method, alpha0, beta, _rep, T, _capped in records:
        cells[(method, alpha0, beta)].append(T)
    return {
        key: float(np.quantile(np.array(ts, dtype=float), 0.5, method="linear"))
        for key, ts in cells.items()
    }

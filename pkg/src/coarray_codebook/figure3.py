"""Bound curves for a fixed array size, either over N_sigma (fixed Q) or over Q (fixed N_sigma).

Each row carries the proven nested lower bound, which exists only where
``N_sigma / N_rx`` is an integer, and separately a smooth reference curve (``lower_plotted``), which evaluates
the same binomial at a rounded L everywhere.
"""
from __future__ import annotations

import csv
import io

from .bounds import BoundsError, binomial, exact_size, lower_bound_nested, nested_L, upper_bound
from .codebook import ParameterTuple, min_selection_size

COLUMNS = ["N_sigma", "Q", "upper", "lower", "exact", "lower_applicable", "lower_plotted"]
MODES = ("fixed-Q", "fixed-NSigma")


def _row(t: ParameterTuple, plotted_L: int) -> dict:
    proven = nested_L(t) is not None
    exact = exact_size(t)
    return {
        "N_sigma": t.N_sigma,
        "Q": t.Q,
        "upper": upper_bound(t),
        "lower": lower_bound_nested(t) if proven else None,
        "exact": exact,
        "lower_applicable": proven,
        "lower_plotted": binomial(t.N_tx - plotted_L, t.Q - plotted_L),
    }


def figure3_sweep(N_tx: int, N_rx: int, mode: str, fixed_value: int) -> list[dict]:
    """Rows of upper/lower bounds along one axis of the bound figure.

    ``fixed-Q`` sweeps ``N_sigma`` over ``[N_tx + N_rx - 1, Q N_rx]`` and
    plots with ``L = max(2, floor(N_sigma / N_rx))``; ``fixed-NSigma`` sweeps
    ``Q`` over ``[ceil(N_sigma / N_rx), N_tx]`` and plots with the ceiling.
    """
    rows = []
    if mode == "fixed-Q":
        Q = fixed_value
        lo, hi = N_tx + N_rx - 1, Q * N_rx
        if not 1 <= Q <= N_tx or lo > hi:
            raise BoundsError(f"empty sweep range for Q={Q}, N_tx={N_tx}, N_rx={N_rx}")
        for n_sigma in range(lo, hi + 1):
            t = ParameterTuple(Q, N_tx, N_rx, n_sigma)
            rows.append(_row(t, max(2, n_sigma // N_rx)))
    elif mode == "fixed-NSigma":
        n_sigma = fixed_value
        if not N_tx + N_rx - 1 <= n_sigma <= N_tx * N_rx:
            raise BoundsError(f"empty sweep range for N_sigma={n_sigma}, N_tx={N_tx}, N_rx={N_rx}")
        L = min_selection_size(n_sigma, N_rx)
        for Q in range(L, N_tx + 1):
            rows.append(_row(ParameterTuple(Q, N_tx, N_rx, n_sigma), L))
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in COLUMNS])
    return buf.getvalue()


def to_records(rows: list[dict]) -> list[dict]:
    """JSON-safe rows; big integers become decimal strings."""
    out = []
    for row in rows:
        rec = {}
        for c in COLUMNS:
            v = row[c]
            rec[c] = str(v) if c in ("upper", "lower", "exact", "lower_plotted") and v is not None else v
        out.append(rec)
    return out

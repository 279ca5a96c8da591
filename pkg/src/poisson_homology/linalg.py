"""Exact rank and kernel computation for rational matrices.

Rows are cleared of denominators and eliminated fraction-free: the
update pivot*a - b*c never leaves the integers and each new row is
divided by its gcd to control growth.  Rows are stored sparsely as
column -> value dicts so the large, very sparse differential matrices
stay cheap.  Kernel vectors are back-substituted exactly over
Fractions from the integer echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Row = dict[int, int]


def _to_integer_rows(rows: Sequence, ncols: int) -> list[Row]:
    out: list[Row] = []
    for row in rows:
        if isinstance(row, dict):
            items = row.items()
        else:
            if len(row) != ncols:
                raise ValueError("row length mismatch")
            items = ((j, v) for j, v in enumerate(row))
        entries = {}
        denom = 1
        for j, v in items:
            if v == 0:
                continue
            if not 0 <= j < ncols:
                raise ValueError(f"column index {j} out of range")
            f = Fraction(v)
            entries[j] = f
            denom = lcm(denom, f.denominator)
        if entries:
            out.append({j: int(v * denom) for j, v in entries.items()})
    return out


def _gcd_normalize(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


def _echelonize(rows: Sequence, ncols: int) -> tuple[list[Row], list[int]]:
    """Fraction-free row echelon form; returns (pivot rows, pivot columns).

    Elimination stays in the integers by cross-multiplication
    (pivot * row - entry * pivot_row) with a gcd reduction of each new
    row to keep entries small; only rows meeting the pivot column are
    touched, so sparsity is preserved.
    """
    active = _to_integer_rows(rows, ncols)
    done: list[Row] = []
    pivot_cols: list[int] = []
    for col in range(ncols):
        if not active:
            break
        candidates = [(len(r), abs(r[col]), i)
                      for i, r in enumerate(active) if col in r]
        if not candidates:
            continue
        best = min(candidates)[2]
        pivot_row = active.pop(best)
        pivot = pivot_row[col]
        updated = []
        for row in active:
            entry = row.get(col)
            if entry is None:
                updated.append(row)
                continue
            new_row: Row = {}
            for j in row.keys() | pivot_row.keys():
                if j == col:
                    continue
                value = pivot * row.get(j, 0) - entry * pivot_row.get(j, 0)
                if value:
                    new_row[j] = value
            if new_row:
                updated.append(_gcd_normalize(new_row))
        active = updated
        done.append(pivot_row)
        pivot_cols.append(col)
    return done, pivot_cols


def rank_exact(rows: Sequence, ncols: int) -> int:
    """Rank of a matrix given as rows (sequences or sparse dicts)."""
    _, pivot_cols = _echelonize(rows, ncols)
    return len(pivot_cols)


def rank_and_kernel(rows: Sequence, ncols: int) -> tuple[int, list[list[Fraction]]]:
    """Rank and an exact basis of the right kernel {v : A v = 0}.

    One kernel vector per free column, normalized to primitive integer
    form (cleared denominators, divided by the gcd, leading entry
    positive).
    """
    echelon, pivot_cols = _echelonize(rows, ncols)
    pivot_set = set(pivot_cols)
    basis: list[list[Fraction]] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i in range(len(echelon) - 1, -1, -1):
            col = pivot_cols[i]
            if col > free:
                continue
            row = echelon[i]
            s = Fraction(0)
            for j, value in row.items():
                if j != col and v[j]:
                    s += value * v[j]
            v[col] = -s / row[col]
        basis.append(make_primitive(v))
    return len(pivot_cols), basis


def kernel_basis(rows: Sequence, ncols: int) -> list[list[Fraction]]:
    return rank_and_kernel(rows, ncols)[1]


def make_primitive(v: Sequence[Fraction]) -> list[Fraction]:
    """Scale to coprime integers with the first nonzero entry positive."""
    denom = 1
    for x in v:
        if x:
            denom = lcm(denom, Fraction(x).denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return [Fraction(0)] * len(v)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [Fraction(x, g) for x in ints]

"""Flat-file formats: tomogram CSV, figure CSV, kernel point lists.

Floats are written with ``repr`` so every file reads back bit-exactly.
"""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import GridMismatchError
from .su2 import check_jm
from .tomography import Tomogram, TomographyPoint, make_grid

TOMOGRAM_HEADER = ["two_m", "alpha", "beta", "gamma", "weight", "value"]
FIGURE_HEADER = ["beta", "two_m", "exact", "asymptotic"]
KERNEL_HEADER = ["index", "numeric_re", "numeric_im", "closed_re", "closed_im"]


def write_tomogram_csv(w: Tomogram, path) -> int:
    """One row per (m, beta, alpha, gamma) node, m outermost. Returns the row count."""
    g = w.grid
    a, b, c = g.angle_nodes()
    wt = g.angle_weights()
    vals = w.values.reshape(g.dim, -1)
    rows = 0
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(TOMOGRAM_HEADER)
        for k, tm in enumerate(range(g.twice_j, -g.twice_j - 1, -2)):
            for p in range(g.n_angles):
                out.writerow([tm, repr(float(a[p])), repr(float(b[p])), repr(float(c[p])),
                              repr(float(wt[p])), repr(float(vals[k, p]))])
                rows += 1
    return rows


def _parse_rows(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TOMOGRAM_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TOMOGRAM_HEADER)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(TOMOGRAM_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(TOMOGRAM_HEADER)} fields")
            try:
                rows.append((int(row[0]), *(float(x) for x in row[1:])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def read_tomogram_csv(path, twice_j: int | None = None) -> Tomogram:
    """Read a tomogram CSV and rebuild its grid.

    The grid is regenerated with ``make_grid`` and every node and weight in
    the file must match it exactly, otherwise GridMismatchError is raised.
    """
    rows = _parse_rows(path)
    tms = [r[0] for r in rows]
    tj = max(tms)
    if twice_j is not None and twice_j != tj:
        raise GridMismatchError(f"file holds 2j={tj}, expected 2j={twice_j}")
    n_m = tj + 1
    if len(rows) % n_m:
        raise GridMismatchError("row count is not a multiple of 2j+1")
    n_ang = len(rows) // n_m
    n_beta = len({r[2] for r in rows})
    oversample, rem = divmod(n_beta - 1, tj + 1)
    if rem or oversample < 1:
        raise GridMismatchError(f"{n_beta} beta nodes do not fit any grid for 2j={tj}")
    grid = make_grid(Fraction(tj, 2), oversample)
    if grid.n_angles != n_ang:
        raise GridMismatchError(f"expected {grid.n_angles} angle nodes per m, found {n_ang}")
    a, b, c = grid.angle_nodes()
    wt = grid.angle_weights()
    data = np.array([r[1:] for r in rows])
    expect_m = np.repeat(np.arange(tj, -tj - 1, -2), n_ang)
    expect = np.column_stack([np.tile(x, n_m) for x in (a, b, c, wt)])
    if not np.array_equal(np.array(tms), expect_m) or not np.array_equal(data[:, :4], expect):
        raise GridMismatchError("grid metadata in file does not match the regenerated grid")
    return Tomogram(tj, grid, data[:, 4].reshape(grid.shape))


def write_figure_csv(fig, path) -> int:
    rows = 0
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(FIGURE_HEADER)
        for ib, beta in enumerate(fig.betas):
            for k, tm in enumerate(fig.two_ms):
                out.writerow([repr(float(beta)), int(tm), repr(float(fig.exact[ib, k])),
                              repr(float(fig.asymptotic[ib, k]))])
                rows += 1
    return rows


def read_figure_csv(path):
    """Returns (betas, two_ms, exact, asymptotic) with grids shaped (n_beta, n_m)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != FIGURE_HEADER:
            raise ValueError(f"{path}: bad figure header")
        rows = [(float(r[0]), int(r[1]), float(r[2]), float(r[3])) for r in reader if r]
    betas = np.array(sorted({r[0] for r in rows}))
    two_ms = np.array(sorted({r[1] for r in rows}, reverse=True))
    arr = np.array([(r[2], r[3]) for r in rows]).reshape(len(betas), len(two_ms), 2)
    return betas, two_ms, arr[..., 0], arr[..., 1]


def read_points_json(path, twice_j: int) -> list[list[TomographyPoint]]:
    """Kernel evaluation points: a JSON list of entries, each a list of
    points ``{"m": ..., "alpha": ..., "beta": ..., "gamma": ...}`` ordered
    (x3, x2, x1) or (x2, x1)."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise ValueError("points file must hold a JSON list")
    j = Fraction(twice_j, 2)
    out = []
    for entry in raw:
        pts = []
        for p in entry:
            m = Fraction(p["m"]) if isinstance(p["m"], str) else p["m"]
            check_jm(j, m)
            pts.append(TomographyPoint.of(m, p.get("alpha", 0.0), p["beta"], p.get("gamma", 0.0)))
        out.append(pts)
    return out


def write_kernel_csv(values, path):
    """values: list of (numeric or None, closed or None)."""
    def parts(z):
        return ("", "") if z is None else (repr(z.real), repr(z.imag))

    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(KERNEL_HEADER)
        for i, (num, closed) in enumerate(values):
            out.writerow([i, *parts(num), *parts(closed)])


def read_kernel_csv(path):
    def z(re, im):
        return None if re == "" else complex(float(re), float(im))

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != KERNEL_HEADER:
            raise ValueError(f"{path}: bad kernel header")
        return [(z(r[1], r[2]), z(r[3], r[4])) for r in reader if r]

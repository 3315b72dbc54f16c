"""``tomo`` command-line front end.

Exit codes: 0 success, 1 verification or numeric failure, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels as K
from . import verify as V
from .errors import ConvergenceError, ReconstructionError, TomographyError
from .figure import figure_grid
from .io import (
    read_points_json,
    read_tomogram_csv,
    write_figure_csv,
    write_kernel_csv,
    write_tomogram_csv,
)
from .matrix import DensityMatrix, load_matrix, save_matrix
from .tomography import make_grid, reconstruct, sample_tomogram

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("tomogram", "reconstruct", "kernel", "verify", "figure")
MAX_TWICE_J_QUADRATURE = 11
MAX_TWICE_J_FIGURE = 100


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    twice_j: int | None = None
    oversample: int = 1
    seed: int = 0
    input: Path | None = None
    output: Path | None = None
    tol: float | None = None
    kernel: str = "delta"
    form: str = "both"
    resolution: int = 181
    perturb_quantizer: float = 1.0
    only: tuple = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.oversample < 1:
            raise UsageError("--oversample must be a positive integer")
        if self.seed < 0:
            raise UsageError("--seed must be nonnegative")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.command in ("tomogram", "kernel") and self.twice_j is None:
            raise UsageError(f"{self.command} needs --j")
        if self.twice_j is not None:
            cap = MAX_TWICE_J_FIGURE if self.command == "figure" else MAX_TWICE_J_QUADRATURE
            if not 0 <= self.twice_j <= cap:
                raise UsageError(f"--j must be in [0, {cap}] for {self.command}")
        if self.command in ("tomogram", "reconstruct", "kernel"):
            if self.input is None or self.output is None:
                raise UsageError(f"{self.command} needs --in and --out")
            if not self.input.is_file():
                raise UsageError(f"cannot read {self.input}")
        if self.command == "figure" and self.output is None:
            raise UsageError("figure needs --out (a directory)")

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)


def _say(*parts):
    print(*parts, flush=True)


def cmd_tomogram(cfg: RunConfig) -> int:
    mat = load_matrix(cfg.input)
    if mat.shape[0] != cfg.twice_j + 1:
        raise UsageError(f"matrix has dimension {mat.shape[0]}, --j {cfg.twice_j} needs {cfg.twice_j + 1}")
    rho = DensityMatrix(mat)
    w = sample_tomogram(rho, make_grid(cfg.j, cfg.oversample))
    rows = write_tomogram_csv(w, cfg.output)
    _say(f"wrote {rows} rows to {cfg.output}")
    _say(f"max |sum_m w - 1| = {np.max(np.abs(w.m_sums() - 1)):.3e}")
    _say(f"max |(2j+1)/(8pi^2) int w dangles - 1| = {np.max(np.abs(w.angle_integrals() - 1)):.3e}")
    return EXIT_OK


def cmd_reconstruct(cfg: RunConfig) -> int:
    w = read_tomogram_csv(cfg.input, cfg.twice_j)
    tol = 1e-10 if cfg.tol is None else cfg.tol
    rho = reconstruct(w, tol=tol)
    save_matrix(cfg.output, rho.mat)
    resampled = sample_tomogram(rho, w.grid)
    _say(f"wrote {rho.dim}x{rho.dim} density matrix to {cfg.output}")
    _say(f"trace error = {abs(np.trace(rho.mat) - 1):.3e}")
    _say(f"min eigenvalue = {float(np.min(np.linalg.eigvalsh(rho.mat))):.3e}")
    _say(f"max tomogram residual = {np.max(np.abs(resampled.values - w.values)):.3e}")
    return EXIT_OK


def cmd_kernel(cfg: RunConfig) -> int:
    points = read_points_json(cfg.input, cfg.twice_j)
    need = 2 if cfg.kernel == "delta" else 3
    closed_ok = cfg.twice_j in (1, 2)
    if cfg.form == "closed" and not closed_ok:
        raise UsageError("closed forms exist for --j 1 and --j 2 only")
    numeric = K.NUMERIC_FORMS[cfg.kernel]
    rows, worst = [], 0.0
    for i, pts in enumerate(points):
        if len(pts) != need:
            raise UsageError(f"entry {i}: {cfg.kernel} kernel takes {need} points, got {len(pts)}")
        num = numeric(cfg.j, *pts) if cfg.form in ("numeric", "both") else None
        closed = K.closed_form(cfg.kernel, cfg.j, *pts) if cfg.form in ("closed", "both") and closed_ok else None
        if num is not None and closed is not None:
            worst = max(worst, abs(num - closed))
        rows.append((num, closed))
    write_kernel_csv(rows, cfg.output)
    _say(f"wrote {len(rows)} {cfg.kernel} kernel values to {cfg.output}")
    if cfg.form == "both" and closed_ok:
        tol = 1e-12 if cfg.tol is None else cfg.tol
        _say(f"max |numeric - closed| = {worst:.3e} (tol {tol:g})")
        if worst >= tol:
            return EXIT_FAIL
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    report = V.run(cfg.seed, quantizer_scale=cfg.perturb_quantizer, only=cfg.only or None)
    obj = report.to_json_obj()
    text = json.dumps(obj, indent=2)
    if cfg.output is not None:
        cfg.output.write_text(text + "\n")
    for c in report.checks:
        tag = "PASS" if c.passed else "FAIL"
        crit = f"[{c.criterion}]" if c.criterion else "[inv]"
        _say(f"{tag} {crit} {c.name}: observed {c.observed:.3e} tol {c.tolerance:g}")
    if cfg.output is None:
        _say(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _figure_mus(twice_j: int) -> tuple:
    mid = twice_j // 2
    if (twice_j - mid) % 2:
        mid -= 1
    return tuple(dict.fromkeys((twice_j, mid, twice_j % 2)))


def cmd_figure(cfg: RunConfig) -> int:
    tj = 100 if cfg.twice_j is None else cfg.twice_j
    out = cfg.output
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for tmu in _figure_mus(tj):
        fig = figure_grid(tj, tmu, cfg.resolution)
        path = out / fig.name
        write_figure_csv(fig, path)
        finite = bool(np.isfinite(fig.exact).all() and np.isfinite(fig.asymptotic[1:-1]).all())
        dev = float(np.max(np.abs(fig.slice_sums() - 1)))
        _say(f"wrote {path}: max |sum_m w - 1| = {dev:.3e}, finite = {finite}")
        if not finite or dev >= 1e-9:
            status = EXIT_FAIL
    return status


HANDLERS = {
    "tomogram": cmd_tomogram,
    "reconstruct": cmd_reconstruct,
    "kernel": cmd_kernel,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tomo", description="Spin tomography toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--j", dest="twice_j", type=int, help="twice the spin, e.g. 1 for spin-1/2")
    p.add_argument("--in", dest="input", type=Path)
    p.add_argument("--out", dest="output", type=Path)
    p.add_argument("--oversample", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--kernel", choices=("delta", "star", "dual"), default="delta")
    p.add_argument("--form", choices=("numeric", "closed", "both"), default="both")
    p.add_argument("--resolution", type=int, default=181, help="beta points for figure")
    p.add_argument("--perturb-quantizer", type=float, default=1.0,
                   help="scale D in the biorthogonality check (sensitivity self-test)")
    p.add_argument("--only", nargs="*", default=(), help="verify: restrict to these check groups")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig(
            command=args.command, twice_j=args.twice_j, oversample=args.oversample, seed=args.seed,
            input=args.input, output=args.output, tol=args.tol, kernel=args.kernel, form=args.form,
            resolution=args.resolution, perturb_quantizer=args.perturb_quantizer, only=tuple(args.only),
        )
        return HANDLERS[cfg.command](cfg)
    except (ReconstructionError, ConvergenceError) as exc:
        print(f"tomo: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, TomographyError, ValueError, KeyError, OSError) as exc:
        print(f"tomo: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

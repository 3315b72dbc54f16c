"""Pure-state tomogram grids w_{j mu}(m, beta) at large j, exact and asymptotic."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SingularityError
from .su2 import check_jm, m_values
from .tomography import asymptotic_tomogram, pure_state_tomogram_grid

# (2j, 2mu)
FIGURE_CASES = ((100, 100), (100, 50), (100, 0))


@dataclass(frozen=True, eq=False)
class FigureGrid:
    twice_j: int
    twice_mu: int
    betas: np.ndarray
    two_ms: np.ndarray
    exact: np.ndarray        # (n_beta, n_m)
    asymptotic: np.ndarray   # (n_beta, n_m); NaN where the formula is singular

    @property
    def name(self) -> str:
        return f"tomogram_2j{self.twice_j}_2mu{self.twice_mu}.csv"

    def slice_sums(self) -> np.ndarray:
        return self.exact.sum(axis=1)


def figure_grid(twice_j: int, twice_mu: int, resolution: int = 181) -> FigureGrid:
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    j, mu = Fraction(twice_j, 2), Fraction(twice_mu, 2)
    check_jm(j, mu)
    betas = np.linspace(0.0, math.pi, resolution)
    two_ms = m_values(j)
    exact = pure_state_tomogram_grid(j, mu, betas)
    asym = np.full_like(exact, np.nan)
    for ib, beta in enumerate(betas):
        try:
            asym[ib] = asymptotic_tomogram(j, mu, two_ms / 2.0, beta)
        except SingularityError:
            pass
    return FigureGrid(twice_j, twice_mu, betas, two_ms, exact, asym)


def figure_data(resolution: int = 181, cases=FIGURE_CASES) -> list[FigureGrid]:
    return [figure_grid(tj, tmu, resolution) for tj, tmu in cases]


def peak_comparison(twice_j: int, twice_mu: int, beta: float) -> dict:
    """Argmax over integer m and peak heights of the exact and asymptotic tomograms at one beta."""
    j, mu = Fraction(twice_j, 2), Fraction(twice_mu, 2)
    ms = m_values(j) / 2.0
    exact = pure_state_tomogram_grid(j, mu, [beta])[0]
    asym = np.asarray(asymptotic_tomogram(j, mu, ms, beta))
    ie, ia = int(np.argmax(exact)), int(np.argmax(asym))
    return {
        "argmax_exact": float(ms[ie]),
        "argmax_asymptotic": float(ms[ia]),
        "peak_exact": float(exact[ie]),
        "peak_asymptotic": float(asym[ia]),
    }

"""Acceptance criteria 1-8, one line each.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` for the bare report.
"""
import math
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from spintomo import verify as V
from spintomo.cli import main as tomo_main
from spintomo.io import read_figure_csv

# criterion -> (title, check function, runtime target in seconds)
CRITERIA = {
    1: ("round-trip reconstruction", V.check_roundtrip, 30),
    2: ("tensor/exponential/bridge/series form equivalence", V.check_forms, 10),
    3: ("closed-form kernels vs traces", V.check_closed_forms, 10),
    4: ("kernel marginalization", V.check_marginalization, 60),
    5: ("star product and associativity", V.check_star_product, 120),
    6: ("dual pairing", V.check_pairing, 30),
    7: ("golden values", V.check_golden, math.inf),
    8: ("figure data at j=50", V.check_figure, 60),
}

SEED = 2024
RESULTS = []


def figure_command_checks():
    """Run ``tomo figure`` and re-check the emitted files."""
    with tempfile.TemporaryDirectory() as tmp:
        code = tomo_main(["figure", "--out", tmp])
        files = sorted(Path(tmp).glob("*.csv"))
        worst, bad = 0.0, 0
        for f in files:
            _, _, exact, asym = read_figure_csv(f)
            worst = max(worst, float(np.max(np.abs(exact.sum(axis=1) - 1))))
            bad += int(np.sum(~np.isfinite(exact)) + np.sum(~np.isfinite(asym[1:-1])))
    return [
        V.Check("cmd_figure_exit_code", 8, 1, code, code == 0 and len(files) == 3),
        V._check("cmd_figure_file_slice_sums", 8, 1e-9, worst),
        V._check("cmd_figure_file_nonfinite_count", 8, 1, bad),
    ]


def evaluate(n):
    title, fn, budget = CRITERIA[n]
    t0 = time.perf_counter()
    checks = fn(np.random.default_rng([SEED, n]))
    if n == 8:
        checks += figure_command_checks()
    elapsed = time.perf_counter() - t0
    ok = all(c.passed for c in checks) and elapsed < budget
    parts = ", ".join(f"{c.name}={c.observed:.2e}{'' if c.passed else '>=' + format(c.tolerance, 'g')}"
                      for c in checks)
    target = "no target" if math.isinf(budget) else f"{budget}s"
    line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} [{elapsed:.1f}s / {target}] {parts}"
    return ok, line, checks, elapsed


@pytest.mark.acceptance
@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, line, checks, elapsed = evaluate(n)
    RESULTS.append(line)
    print(line)
    failed = [f"{c.name}: {c.observed:.3e} (tol {c.tolerance:g})" for c in checks if not c.passed]
    assert not failed, "; ".join(failed)
    assert elapsed < CRITERIA[n][2], f"runtime {elapsed:.1f}s over the {CRITERIA[n][2]}s target"


if __name__ == "__main__":
    status = 0
    for n in sorted(CRITERIA):
        ok, line, _, _ = evaluate(n)
        print(line)
        status |= not ok
    raise SystemExit(status)

"""Acceptance criteria 1-10, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py -v``; the summary lists one
PASS/FAIL line per criterion.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from chronocollapse import kernels, standard_params
from chronocollapse.noise_sim import (
    DecoherenceSetup,
    decoherence_mc,
    decoherence_rate,
    drift_ensemble,
    field_covariance,
    sample_field_increments,
)
from chronocollapse.scan import csl_bound_range, headline_numbers
from chronocollapse.stability import OPTICAL_LATTICE, collapse_to_clock_ratio
from chronocollapse.tau import ClockGeometry, tau_asymptotic_large, tau_monte_carlo, tau_quadrature

from _oracles import csl_smeared_by_convolution, dp_inverse_fourier

# Fixed once, before any comparison was run.
SEED = 20240917

CSL = standard_params("csl")
DP = standard_params("dp")
BOTH = (CSL, DP)


def best_of(func, repeat=5):
    """Smallest wall time over ``repeat`` calls, and the last result."""
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = func()
        best = min(best, time.perf_counter() - t0)
    return best, out


def timed(func):
    t0 = time.perf_counter()
    out = func()
    return time.perf_counter() - t0, out


def test_criterion_01_headline(criterion):
    elapsed, entries = best_of(headline_numbers)
    expect = {"csl": -28, "dp": -31}
    logs = {e.model: e.log10_delta_t for e in entries}
    ok = all(abs(logs[k] - v) <= 0.7 for k, v in expect.items()) and elapsed < 1e-3
    criterion(1, ok, f"log10 dt(1 yr): csl {logs['csl']:.3f}, dp {logs['dp']:.3f}; {elapsed * 1e3:.3f} ms")
    assert ok


def test_criterion_02_bound_range(criterion):
    elapsed, (lo, hi) = best_of(csl_bound_range)
    lg_lo, lg_hi = math.log10(lo), math.log10(hi)
    ok = abs(lg_lo + 31) <= 0.7 and abs(lg_hi + 26) <= 0.7 and elapsed < 1e-3
    criterion(2, ok, f"log10 range [{lg_lo:.3f}, {lg_hi:.3f}]; {elapsed * 1e3:.3f} ms")
    assert ok


def test_criterion_03_plateau(criterion):
    def run():
        return [tau_quadrature(m, ClockGeometry(0.1 * m.sigma)).tau / m.tau_max for m in BOTH]

    elapsed, ratios = timed(run)
    dev = [abs(r - 1.0) for r in ratios]
    ok = max(dev) < 0.01 and elapsed < 1.0
    criterion(3, ok, f"|tau/tau_max - 1| at R=0.1 sigma: csl {dev[0]:.2e}, dp {dev[1]:.2e}; {elapsed:.3f} s")
    assert ok


def test_criterion_04_tail(criterion):
    def run():
        out = {}
        rhos = np.geomspace(100.0, 1000.0, 11)
        for m in BOTH:
            at100 = tau_quadrature(m, ClockGeometry(100 * m.sigma)).tau
            closed = tau_asymptotic_large(m, ClockGeometry(100 * m.sigma)).tau
            taus = [tau_quadrature(m, ClockGeometry(r * m.sigma)).tau for r in rhos]
            slope = np.polyfit(np.log10(rhos), np.log10(taus), 1)[0]
            out[m.kind.value] = (abs(at100 / closed - 1.0), slope)
        return out

    elapsed, out = timed(run)
    (e_c, s_c), (e_d, s_d) = out["csl"], out["dp"]
    ok = (
        e_c < 0.05 and e_d < 0.05
        and abs(s_c + 3.0) <= 0.05 and abs(s_d + 1.0) <= 0.05
        and elapsed < 10.0
    )
    criterion(
        4, ok,
        f"rel dev at 100 sigma: csl {e_c:.2e}, dp {e_d:.2e}; slopes csl {s_c:.4f}, dp {s_d:.4f}; {elapsed:.2f} s",
    )
    assert ok


def test_criterion_05_quadrature_vs_monte_carlo(criterion):
    rhos = np.geomspace(0.1, 100.0, 7)

    def run():
        worst = 0.0
        for m in BOTH:
            for rho in rhos:
                geom = ClockGeometry(rho * m.sigma)
                q = tau_quadrature(m, geom)
                mc = tau_monte_carlo(m, geom, 1_000_000, SEED)
                se = math.hypot(mc.stderr, q.abs_error)
                worst = max(worst, abs(q.tau - mc.tau) / se)
        return worst

    elapsed, worst = timed(run)
    ok = worst <= 3.0 and elapsed < 60.0
    criterion(5, ok, f"max |quad - mc| = {worst:.2f} combined SE over 7 rho x 2 models; {elapsed:.1f} s")
    assert ok


def test_criterion_06_kernel_consistency(criterion):
    r_over_sigma = np.geomspace(0.1, 20.0, 25)

    def run():
        dp_err = max(
            abs(dp_inverse_fourier(DP, u * DP.sigma) / kernels.kernel_smeared(DP, u * DP.sigma) - 1.0)
            for u in r_over_sigma
        )
        csl_err = max(
            abs(csl_smeared_by_convolution(CSL, u * CSL.sigma) / kernels.kernel_smeared(CSL, u * CSL.sigma) - 1.0)
            for u in np.concatenate([[0.0], r_over_sigma[r_over_sigma <= 8]])
        )
        return dp_err, csl_err

    elapsed, (dp_err, csl_err) = timed(run)
    ok = dp_err < 1e-6 and csl_err < 1e-9 and elapsed < 10.0
    criterion(6, ok, f"max rel err: dp Fourier {dp_err:.2e}, csl convolution {csl_err:.2e}; {elapsed:.2f} s")
    assert ok


def test_criterion_07_stochastic_covariance(criterion):
    def run():
        n = 10_000
        tau = CSL.tau_max
        grid = np.linspace(0.0, 3.15576e7, 6)
        ens = drift_ensemble(tau, grid, n, SEED)
        drift_z = []
        for j in range(1, 6):
            sq = ens[:, j] ** 2
            drift_z.append(abs(sq.mean() - tau * grid[j]) / (sq.std(ddof=1) / math.sqrt(n)))

        pts = np.array([[0, 0, 0], [1, 0, 0], [0, 2, 0], [0.5, 0.5, 0.5], [3, -1, 2]], float) * DP.sigma
        dt = 10.0
        draws = 100_000
        vals = sample_field_increments(pts, DP, dt, SEED, n_draws=draws).values
        target = field_covariance(pts, DP, dt)
        prod = vals[:, :, None] * vals[:, None, :]
        emp = prod.mean(axis=0)
        se = prod.std(axis=0, ddof=1) / math.sqrt(draws)
        field_z = np.abs(emp - target) / se
        return max(drift_z), float(field_z.max())

    elapsed, (dz, fz) = timed(run)
    ok = dz <= 4.0 and fz <= 4.0 and elapsed < 60.0
    criterion(7, ok, f"max z: drift variance {dz:.2f} (5 times), field covariance {fz:.2f} (25 entries); {elapsed:.2f} s")
    assert ok


def test_criterion_08_unraveling(criterion):
    t = 100.0

    def run():
        worst = 0.0
        for m in BOTH:
            d = 2.0 * m.sigma
            unit = decoherence_rate(DecoherenceSetup(1.0, d, m))
            for gt in (0.1, 0.5, 1.0, 2.0):
                setup = DecoherenceSetup(math.sqrt(gt / (unit * t)), d, m)
                est = decoherence_mc(setup, t, 100_000, SEED)
                assert est.expected == pytest.approx(math.exp(-gt), rel=1e-9)
                worst = max(worst, abs(est.modulus - est.expected) / est.stderr)
        return worst

    elapsed, worst = timed(run)
    ok = worst <= 4.0 and elapsed < 120.0
    criterion(8, ok, f"max ||mc| - exp(-Gamma t)| = {worst:.2f} SE over 4 Gamma t x 2 models; {elapsed:.2f} s")
    assert ok


def test_criterion_09_negligibility(criterion):
    times = (1.0, 3600.0, 86400.0, 1e6)
    elapsed, ratios = best_of(lambda: [collapse_to_clock_ratio(CSL.tau_max, OPTICAL_LATTICE, t) for t in times])
    ok = max(ratios) < 1e-10 and elapsed < 1e-3
    criterion(9, ok, f"collapse/clock ratio {max(ratios):.3e} (1 s to 1e6 s); {elapsed * 1e3:.3f} ms")
    assert ok


SEEDED_COMMANDS = [
    ["tau", "--method", "monte-carlo", "--radius", "3e-7", "--n", "50000", "--seed", str(SEED)],
    ["drift", "--steps", "50", "--realizations", "20", "--seed", str(SEED)],
    ["decohere", "--mass-kg", "1e-20", "--separation-m", "2e-7", "--time-s", "100", "--n", "10000", "--seed", str(SEED)],
    ["tau", "--model", "dp", "--method", "monte-carlo", "--radius", "5e-9", "--n", "200000", "--workers", "3", "--seed", str(SEED)],
]


def test_criterion_10_determinism(tmp_path, criterion):
    def run():
        identical = []
        for i, argv in enumerate(SEEDED_COMMANDS):
            blobs = []
            for rep in range(2):
                out = tmp_path / f"cmd{i}_{rep}"
                proc = subprocess.run(
                    [sys.executable, "-m", "chronocollapse", *argv, "--out", str(out)],
                    capture_output=True, text=True,
                )
                assert proc.returncode == 0, proc.stderr
                blobs.append(out.read_bytes())
            identical.append(blobs[0] == blobs[1] and len(blobs[0]) > 0)
        return identical

    elapsed, identical = timed(run)
    ok = all(identical)
    criterion(10, ok, f"{sum(identical)}/{len(identical)} seeded commands byte-identical across runs; {elapsed:.2f} s")
    assert ok

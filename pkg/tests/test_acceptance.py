"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import numpy as np
import pytest

from fdrthresh.balls import L0, Configuration, ParameterBall, tstar
from fdrthresh.boundary import FdrBoundary
from fdrthresh.detection import (
    bi_threshold,
    discovery_bounds,
    exceedance_mean,
    exceedance_mean_derivative,
    mean_discovery_number,
)
from fdrthresh.estimators import (
    empirical_fdr,
    estimate,
    select_penalized,
    select_step_down,
    select_step_up,
    step_down_index,
    step_up_index,
)
from fdrthresh.gauss import log_phi, log_upper_tail, quantile_diagnostics
from fdrthresh.harness import ExperimentSpec, run_foster_george, run_table1
from fdrthresh.risk import covariance_kernel_xi, hard_risk_exact, mc_risk_fixed
from fdrthresh.rng import replicate_normals

Q_GRID = (0.01, 0.05, 0.25, 0.40, 0.50, 0.75, 0.99)

# reference MSE ratios (step-up, penalized, step-down) for p = 1.5
REFERENCE_RATIOS = {
    1024: {
        0.01: (1.3440, 1.3440, 1.3440),
        0.05: (1.3283, 1.3293, 1.3334),
        0.25: (1.2473, 1.2482, 1.2512),
        0.40: (1.2171, 1.2171, 1.2173),
        0.50: (1.2339, 1.2335, 1.2321),
        0.75: (1.4159, 1.4132, 1.4100),
        0.99: (1.9810, 1.9744, 1.9687),
    },
    65536: {
        0.01: (1.3370, 1.3372, 1.3374),
        0.05: (1.3178, 1.3180, 1.3183),
        0.25: (1.2276, 1.2277, 1.2277),
        0.40: (1.1889, 1.1889, 1.1890),
        0.50: (1.1937, 1.1936, 1.1936),
        0.75: (1.5122, 1.5118, 1.5114),
        0.99: (4.0211, 4.0189, 4.0174),
    },
}
FOSTER_GEORGE = {1024: 1.2308, 65536: 1.2281}
REPLICATES = 1000


@pytest.fixture(scope="module")
def ratio_table():
    return {
        n: {row.q: row for row in run_table1(ExperimentSpec(n=n, p=1.5, q_list=Q_GRID, replicates=REPLICATES, seed=0))}
        for n in (1024, 65536)
    }


def _ratios(row):
    return row.ratio_step_up, row.ratio_penalized, row.ratio_step_down


def test_c1_mse_ratio_table(ratio_table, criterion):
    misses, worst = [], 0.0
    for n, rows in REFERENCE_RATIOS.items():
        for q, reference in rows.items():
            for name, got, want in zip(("up", "pen", "down"), _ratios(ratio_table[n][q]), reference):
                tol = 0.05 if q <= 0.5 else 0.04 * want
                worst = max(worst, abs(got - want))
                if abs(got - want) > tol:
                    misses.append(f"n={n} q={q} {name} {got:.4f} vs {want:.4f}")
    detail = f"{42 - len(misses)}/42 cells within tolerance, max |diff| {worst:.3f}"
    if misses:
        detail += "; e.g. " + "; ".join(misses[:3])
    criterion("1 MSE ratio table", not misses, detail)


def test_c2_foster_george(criterion):
    got = {n: run_foster_george(n, 1.5, REPLICATES, seed=0).ratio for n in FOSTER_GEORGE}
    ok = all(abs(got[n] - want) <= 0.03 for n, want in FOSTER_GEORGE.items())
    detail = ", ".join(f"n={n}: {got[n]:.4f} vs {want}" for n, want in FOSTER_GEORGE.items())
    criterion("2 Foster-George ratios", ok, detail)


def test_c3_fdr_identity_at_null(criterion):
    n, reps, qs = 1024, 10_000, (0.05, 0.25, 0.5)
    bounds = {q: FdrBoundary(n, q) for q in qs}
    fdr = {q: np.empty(reps) for q in qs}
    truth = np.zeros(n)
    for i in range(reps):
        y = replicate_normals(100, i, n)
        for q in qs:
            fdr[q][i] = empirical_fdr(estimate(y, bounds[q]), truth)
    parts, ok = [], True
    for q in qs:
        mean, se = fdr[q].mean(), fdr[q].std(ddof=1) / np.sqrt(reps)
        ok &= abs(mean - q) <= 3 * se
        parts.append(f"q={q}: {mean:.4f} (se {se:.4f})")
    criterion("3 FDR identity at mu = 0", bool(ok), ", ".join(parts))


def test_c4_switching_equivalence(criterion):
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 257))
        q = float(rng.uniform(0.01, 0.99))
        mu = rng.normal(0, rng.uniform(0.5, 6), n) * (rng.random(n) < rng.uniform(0, 0.5))
        y = mu + rng.standard_normal(n)
        b = FdrBoundary(n, q)
        s = select_penalized(y, b, 2).objective_trace
        pad = np.concatenate(([np.inf], s, [np.inf]))
        minima = [k for k in range(n + 1) if pad[k + 1] <= pad[k] and pad[k + 1] <= pad[k + 2]]
        mismatches += select_step_up(y, b).k_hat != max(minima)
        mismatches += select_step_down(y, b).k_hat != min(minima)
    criterion("4 switching equivalence", mismatches == 0, f"{mismatches} mismatches in 10000 instances")


def test_c5_quantile_brackets(criterion):
    etas = np.logspace(-300, -2, 200)
    diags = [quantile_diagnostics(e) for e in etas]
    r1 = np.array([d.r1 for d in diags])
    r2 = np.array([d.r2 for d in diags])
    v = np.linspace(1, 40, 4000)
    log_tail, log_dens = log_upper_tail(v), log_phi(v)
    sandwich = np.all(log_dens - np.log(2 * v) <= log_tail) and np.all(log_tail <= log_dens - np.log(v))
    global_bound = np.all(np.log(2) + log_tail <= -0.5 * v * v)
    ok = bool(np.all((r1 >= 0) & (r1 <= 1.5)) and np.all((r2 >= 1.8) & (r2 <= 3)) and sandwich and global_bound)
    detail = f"r1 in [{r1.min():.3f}, {r1.max():.3f}], r2 in [{r2.min():.3f}, {r2.max():.3f}], sandwich {sandwich}, global {global_bound}"
    criterion("5 quantile brackets and tail bounds", ok, detail)


def test_c6_kernel_agreement(criterion):
    ts = (0.5, 1.0, 2.0, 3.0, 4.0)
    mus = (0.0, 0.5, 1.5, 3.0, 5.0)
    z = replicate_normals(6, 0, 1_000_000)
    xi_worst = risk_worst = 0.0
    for t in ts:
        for mu in mus:
            x = mu + z
            sample = z * (np.where(np.abs(x) >= t, x, 0.0) - mu)
            se = sample.std(ddof=1) / np.sqrt(z.size)
            xi_worst = max(xi_worst, abs(sample.mean() - covariance_kernel_xi(t, mu)) / se)
            n = 1000
            rep = mc_risk_fixed(Configuration(np.full(n, mu), "user_file"), t, 2.0, 1000, seed=61)
            exact = n * hard_risk_exact(t, mu, 2.0).total
            risk_worst = max(risk_worst, abs(rep.mean_loss - exact) / rep.std_error)
    identity = max(abs(hard_risk_exact(t, 0, 2).total - covariance_kernel_xi(t, 0)) for t in np.linspace(0.1, 8, 80))
    ok = xi_worst <= 4 and risk_worst <= 3 and identity <= 1e-12
    detail = f"xi max {xi_worst:.2f} SE, risk max {risk_worst:.2f} SE, identity gap {identity:.1e}"
    criterion("6 kernel agreement", ok, detail)


def test_c7_detection_machinery(criterion):
    rng = np.random.default_rng(7)
    worst_fd = 0.0
    for _ in range(100):
        n = int(rng.integers(20, 2000))
        b = FdrBoundary(n, float(rng.uniform(0.01, 0.9)))
        mu = rng.normal(0, rng.uniform(0.5, 6), n) * (rng.random(n) < 0.2)
        k = float(rng.uniform(0.5, n - 1))
        h = 1e-3 * min(k, 1.0)
        fd = (exceedance_mean(b, mu, k + h) - exceedance_mean(b, mu, k - h)) / (2 * h)
        worst_fd = max(worst_fd, abs(exceedance_mean_derivative(b, mu, k) / fd - 1))
    null_gap = max(
        abs(exceedance_mean(FdrBoundary(n, q), np.zeros(n), k) / (q * k) - 1)
        for n, q in [(10, 0.1), (1000, 0.3), (65536, 0.05)]
        for k in np.linspace(0.5, n, 25)
    )
    b = FdrBoundary(1000, 0.2)
    g = np.array([bi_threshold(b, 5, 50, p) for p in np.linspace(0.01, 0.999, 300)])
    min_second = np.diff(g, 2).min()
    worst_res = 0.0
    for _ in range(50):
        n = int(rng.integers(10, 5000))
        b = FdrBoundary(n, float(rng.uniform(0.01, 0.9)))
        mu = rng.normal(0, 4, n) * (rng.random(n) < 0.05)
        k = mean_discovery_number(b, mu)
        if k > 0:
            worst_res = max(worst_res, abs(exceedance_mean(b, mu, k) - k) / max(1, k))
    ok = worst_fd <= 1e-5 and null_gap <= 1e-10 and min_second >= -1e-9 and worst_res <= 1e-8
    detail = (f"derivative rel err {worst_fd:.1e}, null gap {null_gap:.1e}, "
              f"min second difference {min_second:.1e}, root residual {worst_res:.1e}")
    criterion("7 detection machinery", ok, detail)


def test_c8_reference_thresholds(criterion):
    n = 10_000
    t_quarter, t_half = tstar(0.5, n), tstar(1.0, n)
    t12 = FdrBoundary(n, 0.05).threshold_at(12)
    ok = abs(t_quarter - 3.72) <= 0.005 and abs(t_half - 3.03) <= 0.005 and abs(t12 - 4.02) <= 0.01
    criterion("8 reference thresholds", ok, f"t_1/4 {t_quarter:.4f}, t_1/2 {t_half:.4f}, t_12 {t12:.4f}")


def test_c9_sandwich(criterion):
    n, q, reps = 10_000, 0.05, 10_000
    b = FdrBoundary(n, q)
    mu = np.zeros(n)
    mu[:10] = 5.21
    bounds = discovery_bounds(b, ParameterBall(L0, 0.001, n), mu)
    inside = 0
    for i in range(reps):
        a = np.sort(np.abs(mu + replicate_normals(9, i, n)))[::-1]
        kg, kf = step_down_index(a, b.thresholds), step_up_index(a, b.thresholds)
        inside += bounds.k_minus <= kg <= kf <= bounds.k_plus
    frac = inside / reps
    detail = f"{frac:.4f} inside [{bounds.k_minus:.2f}, {bounds.k_plus:.2f}], alpha_n {bounds.alpha_n:.3f}"
    criterion("9 discovery sandwich", frac > 0.99, detail)


def test_monotone_in_q_pattern(ratio_table, criterion):
    parts, ok = [], True
    for n in (1024, 65536):
        low, high = _ratios(ratio_table[n][0.5]), _ratios(ratio_table[n][0.99])
        growth = [h / l - 1 for h, l in zip(high, low)]
        ok &= all(g > 0.5 for g in growth)
        parts.append(f"n={n}: +{min(growth):.0%}")
    criterion("monotone-in-q risk pattern (q=0.99 vs 0.5 > +50%)", bool(ok), ", ".join(parts))

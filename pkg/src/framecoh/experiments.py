"""Seeded Monte Carlo experiments reproducing the library's headline claims.

Every experiment derives its per-trial seeds from a single base seed through
:func:`trial_seed` (two splitmix64 rounds, frozen), so runs are reproducible
byte-for-byte, rows are emitted sorted by trial index, and trials could be
evaluated in any order without changing the output.  Probabilistic claims
are judged as ``empirical frequency >= stated level - slack``; the fixed
slack used by each gate is reported next to a 95% Wilson interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import bound_table
from .constructions import (
    CodeFrameSpec,
    GaussianFrameSpec,
    HarmonicFrameSpec,
    build_code_frame,
    build_gaussian,
    build_harmonic,
    xor_stationary_coherence,
)
from .equivalence import exhaustive_flip_oracle, linear_time_flip
from .frame import Frame, gram, spectral_norm
from .ost import (
    FlatAmplitudes,
    NoiseModel,
    SparseSignal,
    check_rsp_bounds,
    floor_sets,
    generate_problem,
    noise_floor_threshold,
    ost_recover,
    ost_threshold,
    snr_of,
    weak_rip_estimate,
)

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, trial_index: int) -> int:
    """Frozen per-trial seed derivation: splitmix64(base XOR splitmix64(index))."""
    return _splitmix64((base_seed & _MASK64) ^ _splitmix64(trial_index & _MASK64))


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% (default z) Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


@dataclass
class ExperimentReport:
    """CSV rows plus a human-readable summary and a single pass verdict."""

    experiment: str
    header: list
    rows: list
    summary: list = field(default_factory=list)
    passed: bool = False
    stats: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        lines = [",".join(self.header)]
        lines.extend(",".join(_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        lines.extend(self.summary)
        lines.append(f"RESULT: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _mu_nu(frame: Frame):
    """Worst-case and average coherence from one shared Gram evaluation."""
    g = gram(frame)
    absg = np.abs(g)
    np.fill_diagonal(absg, 0.0)
    off = g.sum(axis=1) - np.diag(g)
    return float(absg.max()), float(np.max(np.abs(off)) / (frame.cols - 1))


def run_gaussian_geometry(rows=512, cols=2048, trials=200, seed=1) -> ExperimentReport:
    """One-sided checks of the three normalized-Gaussian geometry bounds."""
    ln = math.log(cols)
    d_mu = math.sqrt(rows) - math.sqrt(12.0 * ln)
    d_nu = rows - math.sqrt(12.0 * rows * ln)
    d_sn = rows - math.sqrt(8.0 * rows * ln)
    if min(d_mu, d_nu, d_sn) <= 0:
        raise ValueError(f"geometry bounds are vacuous at M={rows}, N={cols}")
    bound_mu = math.sqrt(15.0 * ln) / d_mu
    bound_nu = math.sqrt(15.0 * ln) / d_nu
    bound_sn = (math.sqrt(rows) + math.sqrt(cols) + math.sqrt(2.0 * ln)) / math.sqrt(d_sn)

    out_rows = []
    hits = 0
    for i in range(trials):
        s = trial_seed(seed, i)
        frame = build_gaussian(GaussianFrameSpec(rows, cols, s))
        mu, nu = _mu_nu(frame)
        sn = spectral_norm(frame)
        ok = mu <= bound_mu and nu <= bound_nu and sn <= bound_sn
        hits += ok
        out_rows.append((i, s, mu, nu, sn, ok))

    freq = hits / trials
    level = 1.0 - 11.0 / cols
    slack = 0.05
    lo, hi = wilson_interval(hits, trials)
    regime_lo = 60.0 * ln
    regime_hi = (cols - 1) / (4.0 * ln)
    report = ExperimentReport(
        experiment="gaussian-geometry",
        header=["trial", "seed", "mu", "nu", "spectral_norm", "ok"],
        rows=out_rows,
        summary=[
            f"bounds: mu <= {bound_mu:.6g}, nu <= {bound_nu:.6g}, ||F||_2 <= {bound_sn:.6g}",
            f"regime arithmetic: 60 ln N = {regime_lo:.2f} <= M = {rows}: "
            f"{'yes' if regime_lo <= rows else 'NO'}; "
            f"M <= (N-1)/(4 ln N) = {regime_hi:.2f}: {'yes' if rows <= regime_hi else 'NO'} "
            "(both sides are not jointly satisfiable at desk scale)",
            f"joint frequency {freq:.4f} over {trials} trials; level 1 - 11/N = {level:.4f}, "
            f"fixed slack {slack}; Wilson 95% [{lo:.4f}, {hi:.4f}]",
        ],
        passed=freq >= level - slack,
        stats={"frequency": freq, "level": level, "slack": slack, "wilson": (lo, hi)},
    )
    return report


def run_harmonic_geometry(dft_size=1024, target_rows=64, trials=200, seed=1) -> ExperimentReport:
    """Unconditional tightness plus the three probabilistic harmonic checks."""
    n, m = dft_size, target_rows
    ln = math.log(n)
    bound_iii = math.sqrt(118.0 * (n - m) * ln / (m * n))
    out_rows = []
    hits = 0
    all_tight = True
    worst_tight = 0.0
    for i in range(trials):
        s = trial_seed(seed, i)
        frame, kept = build_harmonic(HarmonicFrameSpec(n, m, s))
        card = int(kept.size)
        sn2 = spectral_norm(frame) ** 2
        tight_err = abs(sn2 - n / card)
        worst_tight = max(worst_tight, tight_err)
        if tight_err > 1e-9:
            all_tight = False
        mu, nu = _mu_nu(frame)
        ok_i = 0.5 * m <= card <= 1.5 * m
        ok_ii = nu <= mu / math.sqrt(card)
        ok_iii = mu <= bound_iii
        ok = ok_i and ok_ii and ok_iii
        hits += ok
        out_rows.append((i, s, card, tight_err, mu, nu, ok_i, ok_ii, ok_iii, ok))

    freq = hits / trials
    level = 1.0 - 4.0 / n - 1.0 / n**2
    slack = 0.05
    lo, hi = wilson_interval(hits, trials)
    regime_ok = HarmonicFrameSpec(n, m, 0).regime_ok()
    report = ExperimentReport(
        experiment="harmonic-geometry",
        header=["trial", "seed", "n_rows", "tight_err", "mu", "nu", "i_ok", "ii_ok", "iii_ok", "ok"],
        rows=out_rows,
        summary=[
            f"tightness ||F||_2^2 = N/|rows| held in every trial: "
            f"{'yes' if all_tight else 'NO'} (worst deviation {worst_tight:.3g})",
            f"regime 16 ln N <= M <= N/3: {'yes' if regime_ok else 'NO'} "
            f"(16 ln N = {16 * ln:.2f}, M = {m})",
            f"joint frequency {freq:.4f} over {trials} trials; "
            f"level 1 - 4/N - 1/N^2 = {level:.6f}, fixed slack {slack}; "
            f"Wilson 95% [{lo:.4f}, {hi:.4f}]",
        ],
        passed=all_tight and freq >= level - slack,
        stats={"frequency": freq, "level": level, "all_tight": all_tight, "wilson": (lo, hi)},
    )
    return report


#: Above this many columns the XOR-stationary shortcut replaces the dense Gram.
_CODE_DENSE_LIMIT = 1 << 12


def run_code_geometry(cases=((4, 1), (5, 1), (6, 1), (6, 2)), seed=0) -> ExperimentReport:
    """Deterministic tightness and coherence checks for code-based frames."""
    out_rows = []
    all_ok = True
    for m, t in cases:
        spec = CodeFrameSpec(m, t)
        frame = build_code_frame(spec)
        sn2 = spectral_norm(frame) ** 2
        norm2_err = abs(sn2 - 2 ** (t * m))
        if frame.cols <= _CODE_DENSE_LIMIT:
            mu, nu = _mu_nu(frame)
        else:
            mu, nu = xor_stationary_coherence(frame)
        mu_bound = 1.0 / math.sqrt(2 ** (m - 2 * t - 1))
        nu_bound = mu / math.sqrt(2**m)
        # 1e-12 headroom covers float rounding only; the inequalities are exact
        ok = norm2_err <= 1e-9 and mu <= mu_bound + 1e-12 and nu <= nu_bound + 1e-12
        all_ok = all_ok and ok
        out_rows.append((m, t, frame.rows, frame.cols, norm2_err, mu, mu_bound, nu, nu_bound, ok))
    report = ExperimentReport(
        experiment="code-geometry",
        header=["m", "t", "rows", "cols", "norm2_err", "mu", "mu_bound", "nu", "nu_bound", "ok"],
        rows=out_rows,
        summary=[f"checked {len(out_rows)} (m, t) cases; every claim is deterministic"],
        passed=all_ok,
        stats={"cases": len(out_rows)},
    )
    return report


def run_flip_guarantee(
    rows=5,
    cols=50,
    trials=100,
    seed=1,
    oracle_rows=4,
    oracle_cols=16,
    oracle_trials=20,
) -> ExperimentReport:
    """Greedy-flip average-coherence guarantee plus an exhaustive-oracle check."""
    threshold = rows * rows + 3 * rows + 3
    out_rows = []
    greedy_ok = 0
    for i in range(trials):
        s = trial_seed(seed, i)
        frame = build_gaussian(GaussianFrameSpec(rows, cols, s))
        flipped, _ = linear_time_flip(frame)
        mu, nu = _mu_nu(flipped)
        bound = mu / math.sqrt(rows)
        ok = nu <= bound + 1e-12
        greedy_ok += ok
        out_rows.append(("greedy", i, s, mu, nu, bound, None, ok))

    oracle_ok = 0
    for i in range(oracle_trials):
        s = trial_seed(seed, trials + i)
        frame = build_gaussian(GaussianFrameSpec(oracle_rows, oracle_cols, s))
        flipped, _ = linear_time_flip(frame)
        mu, alg_nu = _mu_nu(flipped)
        _, _, min_nu = exhaustive_flip_oracle(frame)
        ok = min_nu <= alg_nu + 1e-9
        oracle_ok += ok
        out_rows.append(("oracle", i, s, mu, alg_nu, mu / math.sqrt(oracle_rows), min_nu, ok))

    passed = greedy_ok == trials and oracle_ok == oracle_trials
    report = ExperimentReport(
        experiment="flip-guarantee",
        header=["phase", "trial", "seed", "mu", "nu_flipped", "bound", "oracle_min_nu", "ok"],
        rows=out_rows,
        summary=[
            f"greedy guarantee nu <= mu/sqrt(M): {greedy_ok}/{trials} at M={rows}, N={cols} "
            f"(N >= M^2+3M+3 = {threshold}: {'yes' if cols >= threshold else 'NO'})",
            f"exhaustive minimum <= greedy value: {oracle_ok}/{oracle_trials} "
            f"at M={oracle_rows}, N={oracle_cols}",
        ],
        passed=passed,
        stats={"greedy_ok": greedy_ok, "oracle_ok": oracle_ok},
    )
    return report


def run_weak_rip(
    trials=10000,
    seed=1,
    orth_dim=256,
    orth_k=4,
    code_m=6,
    code_t=1,
    code_k=2,
) -> ExperimentReport:
    """Permutation-based energy preservation: orthonormal and code-based frames."""
    out_rows = []
    summary = []

    # orthonormal basis: energy is preserved exactly; delta stands in for 0
    # with just enough room for float rounding
    basis = Frame(np.eye(orth_dim), normalize=False)
    rng = np.random.default_rng(trial_seed(seed, 0))
    support = np.sort(rng.choice(orth_dim, orth_k, replace=False))
    x0 = SparseSignal(orth_dim, support, np.exp(2j * np.pi * rng.random(orth_k)))
    rate0 = weak_rip_estimate(basis, x0, delta=1e-12, trials=trials, seed=trial_seed(seed, 1))
    ok0 = rate0 == 0.0
    out_rows.append(("orthonormal", trials, int(round(rate0 * trials)), rate0, 0.0, 0.0, ok0))
    summary.append(f"orthonormal basis: {int(round(rate0 * trials))} violations in {trials} trials")

    # code-based frame with (K, delta) chosen to meet the stated regime
    spec = CodeFrameSpec(code_m, code_t)
    frame = build_code_frame(spec)
    n = frame.cols
    ln = math.log(n)
    mu, nu = _mu_nu(frame) if n <= _CODE_DENSE_LIMIT else xor_stationary_coherence(frame)
    if 2 * code_k * ln > frame.rows:
        raise ValueError("2 K ln N exceeds M; pick a smaller K")
    delta = 10.0 * mu * math.sqrt(2.0 * code_k * ln)  # equality in 2K ln N <= delta^2/(100 mu^2)
    rng = np.random.default_rng(trial_seed(seed, 2))
    support = np.sort(rng.choice(n, code_k, replace=False))
    x1 = SparseSignal(n, support, np.exp(2j * np.pi * rng.random(code_k)))
    rate1 = weak_rip_estimate(frame, x1, delta=delta, trials=trials, seed=trial_seed(seed, 3))
    bound = 4.0 * code_k / n**2
    k_viol = int(round(rate1 * trials))
    _, hi = wilson_interval(k_viol, trials)
    slack = hi - rate1
    ok1 = rate1 <= bound + slack
    out_rows.append(("code", trials, k_viol, rate1, bound, hi, ok1))
    scp1 = mu <= 1.0 / (164.0 * ln)
    summary.append(
        f"code frame (m={code_m}, t={code_t}): mu = {mu:.4f}, delta = {delta:.3f} "
        f"(regime-coupled), K = {code_k}; violation rate {rate1:.2e} vs "
        f"bound 4K/N^2 = {bound:.2e} + Wilson slack {slack:.2e}"
    )
    summary.append(
        f"note: mu <= 1/(164 ln N) = {1.0 / (164.0 * ln):.2e} is "
        f"{'met' if scp1 else 'NOT met (unattainable at desk scale; see README)'}"
    )

    report = ExperimentReport(
        experiment="weak-rip",
        header=["phase", "trials", "violations", "rate", "bound", "wilson_hi", "ok"],
        rows=out_rows,
        summary=summary,
        passed=ok0 and ok1,
        stats={"orthonormal_rate": rate0, "code_rate": rate1, "delta": delta, "mu": mu},
    )
    return report


def run_ost_recovery(
    rows=128,
    cols=512,
    k=8,
    sigma2=1.0,
    t_param=0.5,
    amp_factor=10.0,
    trials=200,
    seed=1,
    sanity_dim=128,
    sanity_trials=100,
) -> ExperimentReport:
    """Monte Carlo check of the OST support-containment + error-bound event."""
    frame = build_gaussian(GaussianFrameSpec(rows, cols, trial_seed(seed, 0)))
    mu, _ = _mu_nu(frame)
    sn = spectral_norm(frame)
    tau_sigma = noise_floor_threshold(sigma2, cols, t_param)
    alpha = amp_factor * tau_sigma
    # the self-interference floor is attainable for flat K-sparse signals only
    # when (20/t) mu sqrt(2 K ln N) < 1; report the arithmetic either way
    mu_floor_coeff = (20.0 / t_param) * mu * math.sqrt(2.0 * k * math.log(cols))
    law = FlatAmplitudes(alpha)

    out_rows = []
    hits = 0
    exact_count = 0
    khat_sizes = []
    for i in range(trials):
        x, y = generate_problem(
            frame,
            k,
            law,
            NoiseModel(sigma2, seed=trial_seed(seed, 2 * i + 2)),
            seed=trial_seed(seed, 2 * i + 1),
        )
        snr = snr_of(x, rows, sigma2)
        lam = ost_threshold(mu, rows, snr, sigma2, cols, t_param)
        res = ost_recover(frame, y, lam)
        floors = floor_sets(x, sigma2, mu, t_param)
        rsp = check_rsp_bounds(res, x, k, sigma2, cols, spectral_norm=sn, floors=floors)
        must_find = np.intersect1d(floors[0], floors[1])
        khat = res.support_estimate
        contained = bool(
            np.all(np.isin(must_find, khat)) and np.all(np.isin(khat, x.support))
        )
        ok = contained and rsp.support_bound_ok
        hits += ok
        exact = bool(khat.size == k and np.array_equal(khat, x.support))
        exact_count += exact
        khat_sizes.append(khat.size)
        out_rows.append((i, k, khat.size, exact, res.l2_error, res.bound_rhs, ok))

    freq = hits / trials
    level = 1.0 - 10.0 / cols
    slack = 0.05
    lo, hi = wilson_interval(hits, trials)

    # noiseless orthonormal sanity: any threshold below the smallest magnitude
    # recovers the signal exactly
    basis = Frame(np.eye(sanity_dim), normalize=False)
    sanity_ok = 0
    for i in range(sanity_trials):
        x, y = generate_problem(
            basis,
            min(k, sanity_dim),
            FlatAmplitudes(1.0),
            NoiseModel(0.0, seed=0),
            seed=trial_seed(seed ^ 0xABCD, i),
        )
        res = ost_recover(basis, y, lam=0.5)
        if np.array_equal(res.support_estimate, x.support) and np.linalg.norm(
            x.dense() - res.signal_estimate
        ) <= 1e-12 * x.norm():
            sanity_ok += 1

    regime_limit = cols / ((37.0 * math.e) ** 2 * sn**2 * math.log(cols))
    report = ExperimentReport(
        experiment="ost-recovery",
        header=["trial", "K", "|Khat|", "exact_support", "l2_error", "bound_rhs", "ok"],
        rows=out_rows,
        summary=[
            f"frame mu = {mu:.4f}, ||F||_2 = {sn:.4f}; noise floor threshold {tau_sigma:.3f}, "
            f"flat amplitude alpha = {alpha:.3f} ({amp_factor:g} x noise floor)",
            f"self-interference floor attainable for flat K-sparse signals iff "
            f"(20/t) mu sqrt(2 K ln N) < 1; here {mu_floor_coeff:.2f} "
            f"{'< 1: attainable' if mu_floor_coeff < 1 else '>= 1: NOT attainable at desk scale'} "
            "(the prescribed threshold formula is conservative; see README)",
            f"mean |Khat| = {np.mean(khat_sizes):.2f}; exact support recovered in "
            f"{exact_count}/{trials} trials (informational)",
            f"sparsity regime K <= N/(c1^2 ||F||_2^2 ln N) = {regime_limit:.4f}: "
            f"{'yes' if k <= regime_limit else 'NO (desk-scale constants; documented)'}",
            f"joint frequency {freq:.4f} over {trials} trials; level 1 - 10/N = {level:.4f}, "
            f"fixed slack {slack}; Wilson 95% [{lo:.4f}, {hi:.4f}]",
            f"noiseless orthonormal sanity: exact recovery in {sanity_ok}/{sanity_trials}",
        ],
        passed=(freq >= level - slack) and sanity_ok == sanity_trials,
        stats={
            "frequency": freq,
            "level": level,
            "sanity_ok": sanity_ok,
            "mu": mu,
            "mean_khat": float(np.mean(khat_sizes)),
        },
    )
    return report


def run_bounds_figure(spatial_dim=3, n_min=None, n_max=55) -> ExperimentReport:
    """Emit the coherence-bound comparison table and check its ordering."""
    if n_min is None:
        n_min = max(spatial_dim, 2)
    table = bound_table(spatial_dim, range(n_min, n_max + 1))
    rows = list(table.rows())
    summary = []
    passed = True
    if spatial_dim == 3:
        margins = [max(w, r, d) - c for (_, w, c, r, d) in rows]
        passed = all(mg > 0 for mg in margins)
        summary.append(
            "M=3 ordering max(welch, real, three_d) > complex holds at every N: "
            f"{'yes' if passed else 'NO'} (min margin {min(margins):.4g})"
        )
    elif spatial_dim == 2:
        worst = max(abs(r - math.cos(math.pi / n)) for (n, _, _, r, _) in rows)
        passed = worst <= 1e-12
        summary.append(f"M=2 reduction to cos(pi/N): worst deviation {worst:.3g}")
    else:
        summary.append("no ordering claim checked for this M; table emitted")
    report = ExperimentReport(
        experiment="bounds-figure",
        header=table.CSV_HEADER.split(","),
        rows=rows,
        summary=summary,
        passed=passed,
        stats={"n_rows": len(rows)},
    )
    return report


RUNNERS = {
    "gaussian-geometry": run_gaussian_geometry,
    "harmonic-geometry": run_harmonic_geometry,
    "code-geometry": run_code_geometry,
    "flip-guarantee": run_flip_guarantee,
    "weak-rip": run_weak_rip,
    "ost-recovery": run_ost_recovery,
    "bounds-figure": run_bounds_figure,
}


@dataclass
class ExperimentConfig:
    """Experiment id plus keyword parameters and an optional CSV output path."""

    experiment: str
    params: dict = field(default_factory=dict)
    output: str | None = None

    def run(self) -> ExperimentReport:
        return run_experiment(self.experiment, **self.params)


def run_experiment(name: str, **params) -> ExperimentReport:
    if name not in RUNNERS:
        known = ", ".join(sorted(RUNNERS))
        raise ValueError(f"unknown experiment {name!r}; expected one of: {known}")
    return RUNNERS[name](**params)

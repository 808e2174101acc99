"""The three frame families: normalized Gaussian, random harmonic, code-based.

Every construction is deterministic given its spec (including seeds), and
each spec exposes a ``regime_ok`` flag reporting whether the parameters sit
inside the regime assumed by the corresponding probabilistic geometry
statement.  The flag is informational, never a precondition.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .frame import Frame
from .gf2m import GF2m, least_irreducible

#: Hard cap on the number of code-frame columns (2^((t+1)m)).
MAX_CODE_COLUMNS = 1 << 24
#: Additional cap on total entries so a build cannot exhaust memory.
MAX_CODE_ENTRIES = 1 << 27

_RESAMPLE_LIMIT = 100


@dataclass(frozen=True)
class GaussianFrameSpec:
    """Normalized Gaussian frame: i.i.d. N(0,1) entries, columns rescaled."""

    rows: int
    cols: int
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1:
            raise ValueError("rows must be >= 1")
        if self.cols < 2:
            raise ValueError("cols must be >= 2")

    def regime_ok(self) -> bool:
        """60 ln N <= M <= (N-1)/(4 ln N), the probabilistic-geometry regime."""
        ln = math.log(self.cols)
        return 60.0 * ln <= self.rows <= (self.cols - 1) / (4.0 * ln)


def build_gaussian(spec: GaussianFrameSpec) -> Frame:
    """Draw the seeded Gaussian matrix and normalize each column.

    A column whose norm falls below 1e-12 (never observed in practice) is
    resampled from the same generator, with a warning.
    """
    rng = np.random.default_rng(spec.seed)
    g = rng.standard_normal((spec.rows, spec.cols))
    for _ in range(_RESAMPLE_LIMIT):
        tiny = np.flatnonzero(np.linalg.norm(g, axis=0) < 1e-12)
        if tiny.size == 0:
            break
        warnings.warn(f"resampling {tiny.size} near-zero Gaussian column(s)", RuntimeWarning)
        g[:, tiny] = rng.standard_normal((spec.rows, tiny.size))
    return Frame(g)


@dataclass(frozen=True)
class HarmonicFrameSpec:
    """Random harmonic frame: Bernoulli(M/N) row selection from the N-point DFT."""

    dft_size: int
    target_rows: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.target_rows <= self.dft_size:
            raise ValueError("need 1 <= target_rows <= dft_size")

    def regime_ok(self) -> bool:
        """16 ln N <= M <= N/3, the probabilistic-geometry regime."""
        return 16.0 * math.log(self.dft_size) <= self.target_rows <= self.dft_size / 3.0


def harmonic_frame_from_rows(dft_size: int, rows) -> Frame:
    """Frame built from an explicit set of DFT rows, columns normalized.

    The row-k, column-l entry of the non-normalized DFT is
    exp(2*pi*i*k*l/N); the product k*l is reduced mod N in exact integer
    arithmetic before the complex exponential, so phases stay accurate for
    large N.
    """
    rows = np.asarray(sorted(set(int(r) for r in np.asarray(rows).ravel())), dtype=np.int64)
    if rows.size == 0:
        raise ValueError("row selection must be nonempty")
    if rows[0] < 0 or rows[-1] >= dft_size:
        raise ValueError(f"row indices must lie in [0, {dft_size})")
    cols = np.arange(dft_size, dtype=np.int64)
    phase = (rows[:, None] * cols[None, :]) % dft_size
    u = np.exp(2j * np.pi * phase / dft_size)
    # every entry has modulus 1, so normalization just divides by sqrt(#rows)
    return Frame(u / math.sqrt(rows.size), normalize=False)


def build_harmonic(spec: HarmonicFrameSpec) -> tuple[Frame, np.ndarray]:
    """Sample the row set, build the frame, and return both.

    An empty Bernoulli selection is resampled with the seed incremented,
    with a warning, so Monte Carlo loops never abort.
    """
    p = spec.target_rows / spec.dft_size
    seed = spec.seed
    for _ in range(_RESAMPLE_LIMIT):
        rng = np.random.default_rng(seed)
        keep = np.flatnonzero(rng.random(spec.dft_size) < p)
        if keep.size:
            return harmonic_frame_from_rows(spec.dft_size, keep), keep
        warnings.warn(
            f"empty harmonic row selection for seed {seed}; retrying with seed {seed + 1}",
            RuntimeWarning,
        )
        seed += 1
    raise RuntimeError("row selection stayed empty after 100 reseeds")


@dataclass(frozen=True)
class CodeFrameSpec:
    """2^m x 2^((t+1)m) frame with entries +/- 2^(-m/2) from GF(2^m) traces."""

    m: int
    t: int
    poly: int | None = None  # irreducible modulus; None selects the frozen default

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.t < 1:
            raise ValueError("t must be >= 1")

    @property
    def rows(self) -> int:
        return 1 << self.m

    @property
    def cols(self) -> int:
        return 1 << ((self.t + 1) * self.m)

    def modulus(self) -> int:
        return self.poly if self.poly is not None else least_irreducible(self.m)


def build_code_frame(spec: CodeFrameSpec) -> Frame:
    """Evaluate the trace sign pattern over all rows x and column tuples.

    Rows are indexed by the field elements x = 0 .. 2^m - 1; columns by
    (t+1)-tuples alpha encoded as c = sum_i alpha_i * 2^(i*m), so alpha_0
    varies fastest.  The sign of entry (x, c) is
    (-1)^Tr(alpha_0*x + sum_{i>=1} alpha_i * x^(2^i + 1)).
    """
    n_cols = spec.cols
    if n_cols > MAX_CODE_COLUMNS:
        raise ValueError(
            f"code frame needs {n_cols} columns; guard allows at most {MAX_CODE_COLUMNS}"
        )
    n_entries = spec.rows * n_cols
    if n_entries > MAX_CODE_ENTRIES:
        raise ValueError(
            f"code frame needs {n_entries} entries; guard allows at most {MAX_CODE_ENTRIES}"
        )
    field = GF2m(spec.m, spec.modulus())
    size = field.size
    bil = field.bilinear_trace_table  # bil[a, b] = Tr(a*b)

    # row-indexed tables of x^(2^i + 1) for i = 1 .. t
    x = np.arange(size, dtype=np.int64)
    powers = [field.pow_2k_plus_1(x, i) for i in range(1, spec.t + 1)]

    col = np.arange(n_cols, dtype=np.int64)
    mask = size - 1
    alphas = [(col >> (i * spec.m)) & mask for i in range(spec.t + 1)]

    scale = 2.0 ** (-spec.m / 2.0)
    data = np.empty((size, n_cols), dtype=np.float64)
    for xv in range(size):
        bits = bil[alphas[0], xv].copy()
        for i in range(1, spec.t + 1):
            bits ^= bil[alphas[i], powers[i - 1][xv]]
        data[xv] = np.where(bits, -scale, scale)
    # column norms: 2^m equal squares summing to 1 up to one rounding of scale^2
    return Frame(data, normalize=False)


def xor_stationary_coherence(frame: Frame) -> tuple[float, float]:
    """(mu, nu) for a frame whose Gram depends only on the XOR of indices.

    Code-based frames have <f_a, f_b> = w(a XOR b) with w the inner product
    against column zero, so the full N x N Gram never needs to be formed:
    mu is the largest |w(c)| over c != 0 and every Gram row sums to the same
    value sum_{c != 0} w(c).  Validated against the generic operations on
    small instances in the test suite.
    """
    w = frame.data.T @ frame.data[:, 0]
    n = frame.cols
    mu = float(np.max(np.abs(w[1:])))
    nu = float(abs(w.sum() - w[0]) / (n - 1))
    return mu, nu

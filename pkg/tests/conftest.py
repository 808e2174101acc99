"""Shared helpers for the test suite."""
import numpy as np

from framecoh import Frame


def random_frame(m, n, seed, complex_=False):
    """Random unit-norm frame with a fixed seed."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    if complex_:
        a = a + 1j * rng.standard_normal((m, n))
    return Frame(a)


def mercedes_frame():
    """Three unit vectors in the plane at 90, 210, and 330 degrees."""
    ang = np.deg2rad([90.0, 210.0, 330.0])
    return Frame(np.vstack([np.cos(ang), np.sin(ang)]))


def tetrahedron_frame():
    """Four unit vectors in R^3 with pairwise inner products -1/3."""
    v = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
    ).T / np.sqrt(3.0)
    return Frame(v, normalize=False)

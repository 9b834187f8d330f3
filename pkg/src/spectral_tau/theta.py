"""Riemann theta function as the lattice sum with the e^(nBn/2 + nu) convention.

theta(u) = sum over n in Z^g of exp( <n, B n>/2 + <n, u> ), which converges
for Re(B) negative definite (the a-periods are normalized to 2 pi i).
Partial derivatives insert monomial factors n_{i1}...n_{iN} termwise;
logarithmic derivatives are assembled by the set-partition expansion.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


class ThetaError(Exception):
    pass


def _lattice(g: int, radius: int) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(-radius, radius + 1)] * g), indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, g).astype(float)


def _raw_values(u: np.ndarray, b: np.ndarray, derivs, radius: int) -> dict:
    n = _lattice(len(u), radius)
    expo = 0.5 * np.einsum("ki,ij,kj->k", n, b, n) + n @ u
    # clip the real part to dodge overflow warnings on hopeless radii
    terms = np.exp(np.clip(expo.real, -745.0, 700.0) + 1j * expo.imag)
    out = {}
    for d in derivs:
        factor = np.ones(len(n))
        for idx in d:
            factor = factor * n[:, idx]
        out[d] = complex(np.sum(factor * terms))
    return out


def theta_with_derivatives(u, ctx_or_b, derivs=((),), radius: int | None = None,
                           radius_cap: int = 64) -> dict:
    """Evaluate theta and the requested derivative multi-indices at once.

    The truncation radius grows until two successive evaluations agree to
    1e-12 relative on every requested value; exceeding the cap raises (the
    curve is too degenerate for the lattice sum to converge usefully).
    """
    b = getattr(ctx_or_b, "b_matrix", ctx_or_b)
    radius_cap = getattr(ctx_or_b, "lattice_radius", radius_cap)
    b = np.asarray(b, dtype=complex)
    u = np.asarray(u, dtype=complex)
    derivs = [tuple(d) for d in derivs]
    if () not in derivs:
        derivs = [()] + derivs
    if radius is not None:
        return _raw_values(u, b, derivs, radius)
    r = 8
    prev = _raw_values(u, b, derivs, r)
    while r <= radius_cap:
        r += 4
        cur = _raw_values(u, b, derivs, r)
        scale = max(abs(cur[()]), 1e-300)
        if all(abs(cur[d] - prev[d]) <= 1e-12 * max(scale, abs(cur[d])) for d in derivs):
            return cur
        prev = cur
    raise ThetaError("lattice sum too slow; curve too degenerate")


def theta(u, ctx_or_b, derivative=()) -> complex:
    return theta_with_derivatives(u, ctx_or_b, [tuple(derivative)])[tuple(derivative)]


@lru_cache(maxsize=None)
def _set_partitions(n: int):
    """All partitions of range(n) as tuples of blocks (tuples of indices)."""
    if n == 0:
        return ((),)
    out = []
    for sub in _set_partitions(n - 1):
        last = n - 1
        out.append(sub + ((last,),))
        for i, block in enumerate(sub):
            out.append(sub[:i] + (block + (last,),) + sub[i + 1:])
    return tuple(out)


def log_theta_derivatives(u, ctx_or_b, indices) -> complex:
    """d^N log theta / du_{i1}..du_{iN} via the set-partition expansion.

    Raises when theta(u) is too small (the point sits on the theta divisor).
    """
    indices = tuple(int(i) for i in indices)
    n = len(indices)
    if n == 0:
        raise ThetaError("need at least one derivative index")
    needed = set()
    for part in _set_partitions(n):
        for block in part:
            needed.add(tuple(sorted(indices[i] for i in block)))
    values = theta_with_derivatives(u, ctx_or_b, sorted(needed))
    t0 = values[()]
    if abs(t0) < 1e-10:
        raise ThetaError("point on theta divisor; logarithmic derivatives blow up")
    total = 0j
    for part in _set_partitions(n):
        k = len(part)
        coeff = (-1) ** (k - 1) * _factorial(k - 1)
        prod = 1.0 + 0j
        for block in part:
            key = tuple(sorted(indices[i] for i in block))
            prod *= values[key] / t0
        total += coeff * prod
    return complex(total)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def reduce_mod_lattice(u, b) -> np.ndarray:
    """Translate u by 2 pi i Z^g + B Z^g into a bounded fundamental region."""
    u = np.asarray(u, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = np.linalg.solve(b.real, u.real)
    n = np.round(n)
    u = u - b @ n
    m = np.round(u.imag / (2 * np.pi))
    return u - 2j * np.pi * m


def half_period_shifts(b) -> list[tuple[tuple, np.ndarray]]:
    """All 2^(2g) shifts pi*i*m + B*n/2 for m, n in {0,1}^g, labelled."""
    b = np.asarray(b, dtype=complex)
    g = b.shape[0]
    out = []
    for m in itertools.product((0, 1), repeat=g):
        for n in itertools.product((0, 1), repeat=g):
            shift = 1j * np.pi * np.array(m, dtype=float) + b @ np.array(n, dtype=float) / 2
            out.append(((m, n), shift))
    return out

"""Special functions and exact combinatorics.

All polynomial families are evaluated by their three-term recurrences and
accept either scalars or numpy arrays for the argument.  Integer tables
(factorials, binomials, Stirling numbers of the second kind) are exact
Python integers.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BoundsError

N_MAX = 64


def _check_order(n: int, n_max: int = N_MAX) -> None:
    if n < 0:
        raise BoundsError(f"order must be non-negative, got {n}")
    if n > n_max:
        raise BoundsError(f"order {n} exceeds n_max={n_max}")


def _as_value(z):
    if np.ndim(z) == 0:
        return complex(z) if isinstance(z, complex) or np.iscomplexobj(z) else float(z)
    return np.asarray(z)


def hermite_all(n: int, z, n_max: int = N_MAX) -> list:
    """Return ``[H_0(z), ..., H_n(z)]`` (physicists' convention)."""
    _check_order(n, n_max)
    z = _as_value(z)
    h = [z * 0 + 1]
    if n == 0:
        return h
    h.append(2 * z)
    for k in range(1, n):
        h.append(2 * z * h[k] - 2 * k * h[k - 1])
    return h


def hermite(n: int, z, n_max: int = N_MAX):
    """Physicists' Hermite polynomial H_n(z) for real or complex z."""
    return hermite_all(n, z, n_max)[n]


def homogeneous_hermite_all(n: int, y, s: float, normalized: bool = False) -> list:
    """Return ``s**(k/2) * H_k(y / sqrt(s))`` for k = 0..n (divided by sqrt(k!) if ``normalized``).

    A polynomial in y and s, so it stays finite as s -> 0, where it tends to
    (2y)^k.  Recurrence: u_{k+1} = 2y u_k - 2k s u_{k-1}.
    """
    if n < 0:
        raise BoundsError(f"order must be non-negative, got {n}")
    y = _as_value(y)
    u = [y * 0 + 1]
    if n == 0:
        return u
    u.append(2 * y * u[0])
    for k in range(1, n):
        if normalized:
            u.append((2 * y * u[k] - 2 * math.sqrt(k) * s * u[k - 1]) / math.sqrt(k + 1))
        else:
            u.append(2 * y * u[k] - 2 * k * s * u[k - 1])
    return u


def laguerre(m: int, x, n_max: int = N_MAX):
    """Laguerre polynomial L_m(x)."""
    _check_order(m, n_max)
    x = _as_value(x)
    prev, cur = x * 0 + 1, 1 - x
    if m == 0:
        return prev
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def legendre(m: int, z, n_max: int = N_MAX):
    """Legendre polynomial P_m(z) via Bonnet's recurrence; complex z allowed."""
    _check_order(m, n_max)
    z = _as_value(z)
    prev, cur = z * 0 + 1, z
    if m == 0:
        return prev
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1) * z * cur - k * prev) / (k + 1)
    return cur


def pochhammer_half(k: int) -> float:
    """Rising factorial (1/2)_k = prod_{j<k} (1/2 + j)."""
    if k < 0:
        raise BoundsError(f"k must be non-negative, got {k}")
    out = 1.0
    for j in range(k):
        out *= 0.5 + j
    return out


@lru_cache(maxsize=None)
def _stirling2_row(r: int) -> tuple[int, ...]:
    if r == 0:
        return (1,)
    prev = _stirling2_row(r - 1)
    row = [0] * (r + 1)
    for k in range(1, r + 1):
        left = prev[k] if k < len(prev) else 0
        row[k] = k * left + prev[k - 1]
    return tuple(row)


def stirling2(r: int, k: int, n_max: int = N_MAX) -> int:
    """Stirling number of the second kind S2(r, k), exact."""
    _check_order(r, n_max)
    if k < 0 or k > r:
        raise BoundsError(f"need 0 <= k <= r, got r={r}, k={k}")
    return _stirling2_row(r)[k]


class CombinatoricCache:
    """Read-only exact tables of factorials, binomials and S2 up to ``n_max``.

    Built eagerly in ``__init__``; safe to share between threads.
    """

    def __init__(self, n_max: int = N_MAX):
        self.n_max = n_max
        self.factorials = tuple(math.factorial(n) for n in range(n_max + 1))
        self.binomials = tuple(
            tuple(math.comb(n, k) for k in range(n + 1)) for n in range(n_max + 1)
        )
        self.stirling2 = tuple(_stirling2_row(r) for r in range(n_max + 1))

    def factorial(self, n: int) -> int:
        _check_order(n, self.n_max)
        return self.factorials[n]

    def comb(self, n: int, k: int) -> int:
        _check_order(n, self.n_max)
        if k < 0 or k > n:
            return 0
        return self.binomials[n][k]

    def s2(self, r: int, k: int) -> int:
        _check_order(r, self.n_max)
        if k < 0 or k > r:
            return 0
        return self.stirling2[r][k]

    def bell(self, r: int) -> int:
        return sum(self.stirling2[r])


COMBINATORICS = CombinatoricCache()

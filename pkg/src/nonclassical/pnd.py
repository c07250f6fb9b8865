"""Photon-number distributions, Klyshko's criterion and the eta parameter."""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, UndefinedWitnessError
from .moments import canonical
from .specfun import homogeneous_hermite_all
from .states import StateSpec, _degenerate_check, inverse_norm_squared


@dataclass(frozen=True)
class PhotonNumberDistribution:
    spec: StateSpec
    probabilities: np.ndarray
    tail_mass: float

    @property
    def n_report(self) -> int:
        return len(self.probabilities) - 1

    def __getitem__(self, n: int) -> float:
        return float(self.probabilities[n])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rec = self.spec.to_record()
        w.writerow(["# " + " ".join(f"{k}={v}" for k, v in rec.items())])
        w.writerow(["n", "P_n"])
        for n, p in enumerate(self.probabilities):
            w.writerow([n, repr(float(p))])
        return buf.getvalue()


def _scs_weights(spec: StateSpec, count: int) -> np.ndarray:
    """|<k|alpha, z>|^2 for k < count; reduces to Poisson weights at r = 0."""
    r, phi = spec.r, spec.phi
    beta = spec.beta
    t = math.tanh(r)
    env = math.exp(-abs(beta) ** 2 - (cmath.exp(-1j * phi) * beta * beta).real * t) / math.cosh(r)
    # H_k(-i beta e^{-i phi/2} / sqrt(sinh 2r)) (tanh r / 2)^{k/2} / sqrt(k!)
    y = -0.5j * beta * cmath.exp(-0.5j * phi) / math.cosh(r)
    u = homogeneous_hermite_all(count - 1, y, t / 2.0, normalized=True)
    return env * np.abs(np.array(u, dtype=complex)) ** 2


def pnd(spec: StateSpec, n_max: int | None = None, tail_tol: float = 1e-10,
        max_report: int = 4096) -> PhotonNumberDistribution:
    """P_n for n = 0..n_max from the closed form.

    Without ``n_max`` the range starts at the oracle's cutoff heuristic and is
    doubled until the missing mass is at most ``tail_tol``.

    For addition P_n = N^2 n!/(n-m)! |<n-m|alpha,z>|^2 and vanishes for n < m;
    for subtraction P_n = N^2 (n+m)!/n! |<n+m|alpha,z>|^2 (Hermite order n+m).
    """
    from .oracle import default_cutoff

    if n_max is None:
        n = default_cutoff(spec)
        while True:
            dist = pnd(spec, n)
            if dist.tail_mass <= tail_tol or 2 * n > max_report:
                return dist
            n *= 2
    spec = canonical(spec)
    n_max = int(n_max)
    if n_max < 0:
        raise BoundsError("n_max must be non-negative")
    m = spec.m
    inv = inverse_norm_squared(spec)
    _degenerate_check(spec, inv)
    probs = np.zeros(n_max + 1)
    if spec.is_add:
        w = _scs_weights(spec, n_max + 1)
        for n in range(m, n_max + 1):
            probs[n] = math.perm(n, m) * w[n - m] / inv
    else:
        w = _scs_weights(spec, n_max + m + 1)
        for n in range(n_max + 1):
            probs[n] = math.perm(n + m, m) * w[n + m] / inv
    tail = max(0.0, 1.0 - math.fsum(probs))
    return PhotonNumberDistribution(spec, probs, tail)


def klyshko(dist: PhotonNumberDistribution, n: int) -> float:
    """B(n) = (n+2) P_n P_{n+2} - (n+1) P_{n+1}^2; zero for every n on coherent states."""
    if n < 0 or n + 2 > dist.n_report:
        raise BoundsError(f"need 0 <= n and n+2 <= {dist.n_report}, got n={n}")
    P = dist.probabilities
    return float((n + 2) * P[n] * P[n + 2] - (n + 1) * P[n + 1] ** 2)


def eta(dist: PhotonNumberDistribution) -> float:
    """P_1 / (1 - P_0 - P_1): single-photon pulses per multi-photon pulse."""
    P0, P1 = dist[0], dist[1]
    den = 1.0 - P0 - P1
    if den <= 1e-15:
        raise UndefinedWitnessError("eta undefined: state supported on n <= 1", P0=P0, P1=P1)
    return P1 / den

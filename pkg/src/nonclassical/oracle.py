"""Brute-force reference in a truncated Fock basis.

States are built as dense vectors by exponentiating the truncated displacement
and squeeze generators and applying a^m or a^dagger^m.  Every observable is
then plain linear algebra on that vector; nothing here touches the closed
forms in :mod:`states`, :mod:`moments`, :mod:`pnd` or :mod:`wigner`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BoundsError, ConvergenceError, DegenerateStateError, TruncationWarning
from .states import StateSpec

TAIL_TOL = 1e-12
MAX_SQUARINGS = 60
_THETA = 0.5  # scaled 1-norm bound before the Taylor series


class Label(enum.Enum):
    ANNIHILATE = "annihilate"
    CREATE = "create"
    DISPLACE = "displace"
    SQUEEZE = "squeeze"
    QUADRATURE = "quadrature"
    PARITY = "parity"
    CUSTOM = "custom"


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    label: Label = Label.CUSTOM

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.matrix @ other.matrix)
        return self.matrix @ other


@dataclass(frozen=True)
class FockVector:
    amplitudes: np.ndarray
    norm_squared: float = 1.0  # squared norm before normalisation

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def cutoff(self) -> int:
        return len(self.amplitudes) - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tail_mass(self, fraction: float = 0.9) -> float:
        start = int(math.floor(fraction * self.cutoff)) + 1
        return float(np.sum(self.probabilities()[start:]))


def annihilation(cutoff: int) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1),
                          Label.ANNIHILATE)


def creation(cutoff: int) -> OperatorMatrix:
    return OperatorMatrix(annihilation(cutoff).matrix.conj().T, Label.CREATE)


def quadrature(cutoff: int) -> OperatorMatrix:
    a = annihilation(cutoff).matrix
    return OperatorMatrix((a + a.conj().T) / math.sqrt(2.0), Label.QUADRATURE)


def parity(cutoff: int) -> OperatorMatrix:
    return OperatorMatrix(np.diag((-1.0) ** np.arange(cutoff + 1)), Label.PARITY)


def matrix_exponential(op: OperatorMatrix | np.ndarray, label: Label = Label.CUSTOM,
                       max_squarings: int = MAX_SQUARINGS) -> OperatorMatrix:
    """exp(M) by scaling and squaring around a truncated Taylor series."""
    M = op.matrix if isinstance(op, OperatorMatrix) else np.asarray(op, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    n = M.shape[0]
    norm = float(np.max(np.sum(np.abs(M), axis=0))) if n else 0.0
    s = 0 if norm <= _THETA else int(math.ceil(math.log2(norm / _THETA)))
    if s > max_squarings:
        raise ConvergenceError(f"1-norm {norm:.3g} needs {s} squarings (> {max_squarings})")
    A = M / (2.0 ** s)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 60):
        term = term @ A / k
        result = result + term
        # terms decay at least like THETA^k / k!; stop when below the residual target
        if np.max(np.abs(term)) <= 1e-17 * max(1.0, np.max(np.abs(result))):
            break
    else:
        raise ConvergenceError("Taylor series did not converge")
    for _ in range(s):
        result = result @ result
    return OperatorMatrix(result, label)


def displacement(alpha: complex, cutoff: int) -> OperatorMatrix:
    return _displacement_cached(complex(alpha), cutoff)


@lru_cache(maxsize=96)
def _displacement_cached(alpha: complex, cutoff: int) -> OperatorMatrix:
    a = annihilation(cutoff).matrix
    return matrix_exponential(alpha * a.conj().T - alpha.conjugate() * a, Label.DISPLACE)


def squeeze(z: complex, cutoff: int) -> OperatorMatrix:
    a = annihilation(cutoff).matrix
    ad = a.conj().T
    return matrix_exponential(0.5 * z * (ad @ ad) - 0.5 * z.conjugate() * (a @ a), Label.SQUEEZE)


def default_cutoff(spec: StateSpec) -> int:
    """Starting cutoff: Gaussian tails in n are governed by |alpha| e^r."""
    width = abs(spec.alpha) * math.exp(spec.r) + math.sqrt(spec.m) + 3.0
    return max(32, int(math.ceil(4.0 * width * width)))


@lru_cache(maxsize=256)
def _band_weights(k: int, n: int) -> np.ndarray:
    """sqrt(j (j-1) ... (j-k+1)) for j = k..n-1: entries of a^dagger^k below the diagonal."""
    j = np.arange(k, n, dtype=float)
    w = np.ones_like(j)
    for i in range(k):
        w *= j - i
    w = np.sqrt(w)
    w.setflags(write=False)
    return w


def _ladder_terms(v: np.ndarray, coeffs) -> np.ndarray:
    """Apply sum_d c_d L_d to v, where L_d = a^dagger^d for d > 0 and a^|d| for d < 0.

    Works column-wise on 2-D input.
    """
    n = v.shape[0]
    out = np.zeros_like(v)
    for d, c in coeffs.items():
        k = abs(d)
        if k == 0:
            out += c * v
            continue
        if k >= n:
            continue
        w = _band_weights(k, n)
        if v.ndim > 1:
            w = w[:, None]
        if d > 0:
            out[k:] += (c * w) * v[:-k]
        else:
            out[:-k] += (c * w) * v[k:]
    return out


def expm_action(coeffs, v: np.ndarray, theta: float = 4.0) -> np.ndarray:
    """exp(G) v for a banded ladder-operator generator G, without forming exp(G).

    Same scaled Taylor scheme as :func:`matrix_exponential`, applied to a vector:
    G is split into s steps of 1-norm at most ``theta``.
    """
    v = np.array(v, dtype=complex)
    n = v.shape[0]
    norm = sum(abs(c) * math.sqrt(float(np.prod([n - i for i in range(abs(d))])))
               for d, c in coeffs.items())
    s = max(1, int(math.ceil(norm / theta)))
    bands = []
    for d, c in coeffs.items():
        k = abs(d)
        if c == 0 or k >= n:
            continue
        w = _band_weights(k, n) * (c / s) if k else np.full(n, c / s)
        if v.ndim > 1:
            w = w[:, None]
        dst, src = (slice(k, n), slice(0, n - k)) if d >= 0 else (slice(0, n - k), slice(k, n))
        bands.append((dst, src, w))
    term = np.empty_like(v)
    nxt = np.empty_like(v)
    for _ in range(s):
        np.copyto(term, v)
        scale = max(1.0, float(np.abs(v).max()))
        for k in range(1, 100):
            nxt.fill(0.0)
            for dst, src, w in bands:
                nxt[dst] += w * term[src]
            nxt *= 1.0 / k
            v += nxt
            term, nxt = nxt, term
            if k >= 8 and float(np.abs(term).max()) <= 1e-17 * scale:
                break
        else:
            raise ConvergenceError("Taylor action did not converge")
    return v


def _displacement_coeffs(alpha: complex) -> dict:
    return {1: alpha, -1: -alpha.conjugate()}


def _squeeze_coeffs(z: complex) -> dict:
    return {2: 0.5 * z, -2: -0.5 * z.conjugate()}


def apply_displacement(alpha: complex, v: np.ndarray) -> np.ndarray:
    return expm_action(_displacement_coeffs(complex(alpha)), v)


@lru_cache(maxsize=64)
def _scs_vector(alpha: complex, z: complex, cutoff: int, method: str) -> np.ndarray:
    if method == "matrix":
        v = squeeze(z, cutoff).matrix[:, 0]
        v = displacement(alpha, cutoff) @ v
    else:
        vac = np.zeros(cutoff + 1, dtype=complex)
        vac[0] = 1.0
        v = expm_action(_displacement_coeffs(alpha), expm_action(_squeeze_coeffs(z), vac))
    v.setflags(write=False)
    return v


def _raw_state(spec: StateSpec, cutoff: int, method: str = "action") -> np.ndarray:
    v = np.array(_scs_vector(spec.alpha, spec.z, cutoff, method))
    op = {1: 1.0} if spec.is_add else {-1: 1.0}
    for _ in range(spec.m):
        v = _ladder_terms(v, op)
    return v


def build_state(spec: StateSpec, cutoff: int | None = None, adaptive: bool = True,
                tol: float = 1e-10, max_cutoff: int = 4096,
                method: str = "action") -> FockVector:
    """Normalised a^dagger^m D S |0> (or a^m ...) in a truncated basis.

    With ``adaptive`` the cutoff is doubled until the amplitudes and the
    squared norm stop moving by more than ``tol``.  ``method="matrix"`` forms
    the full exponential matrices instead of applying them to the vacuum.
    """
    if method not in ("action", "matrix"):
        raise ValueError(f"unknown method {method!r}")
    n = default_cutoff(spec) if cutoff is None else int(cutoff)
    raw = _raw_state(spec, n, method)
    if adaptive:
        while True:
            n2 = 2 * n
            if n2 > max_cutoff:
                raise ConvergenceError(f"cutoff exceeded {max_cutoff} for {spec}")
            raw2 = _raw_state(spec, n2, method)
            na, nb = np.vdot(raw, raw).real, np.vdot(raw2, raw2).real
            diff = np.max(np.abs(raw2[: n + 1] - raw)) if n else 0.0
            raw, n = raw2, n2
            if diff <= tol * max(1.0, math.sqrt(nb)) and abs(nb - na) <= tol * max(1.0, nb):
                break
    norm2 = float(np.vdot(raw, raw).real)
    if not norm2 > 1e-300:
        raise DegenerateStateError(f"{spec}: a^{spec.m} annihilates the state")
    state = FockVector(raw / math.sqrt(norm2), norm2)
    tail = state.tail_mass()
    if tail > TAIL_TOL:
        warnings.warn(f"{spec}: tail mass {tail:.2e} above {TAIL_TOL:.0e} at cutoff {n}",
                      TruncationWarning, stacklevel=2)
    return state


def fock_state(k: int, cutoff: int) -> FockVector:
    v = np.zeros(cutoff + 1, dtype=complex)
    v[k] = 1.0
    return FockVector(v)


def _apply_annihilation(v: np.ndarray, times: int) -> np.ndarray:
    sq = np.sqrt(np.arange(1, len(v), dtype=float))
    for _ in range(times):
        out = np.zeros_like(v)
        out[:-1] = sq * v[1:]
        v = out
    return v


def oracle_moment(state: FockVector, p: int, q: int) -> complex:
    """<a^dagger^p a^q> = <a^p psi | a^q psi>."""
    if p < 0 or q < 0:
        raise BoundsError("moment orders must be non-negative")
    if p + q > state.cutoff // 2:
        raise BoundsError(f"p+q={p + q} exceeds cutoff/2={state.cutoff // 2}")
    v = state.amplitudes
    return complex(np.vdot(_apply_annihilation(v, p), _apply_annihilation(v, q)))


def oracle_quadrature_moment(state: FockVector, n: int) -> float:
    """Central moment <(X - <X>)^n> with X = (a + a^dagger)/sqrt 2."""
    if n % 2 or n < 0:
        raise ValueError(f"quadrature moment order must be even, got {n}")
    if n > 8:
        raise BoundsError(f"order {n} > 8")
    X = quadrature(state.cutoff).matrix
    v = state.amplitudes
    mean = np.vdot(v, X @ v).real
    w = v
    for _ in range(n):
        w = X @ w - mean * w
    return float(np.vdot(v, w).real)


def _support(state: FockVector, eps: float = 1e-14) -> int:
    idx = np.nonzero(np.abs(state.amplitudes) > eps)[0]
    return int(idx[-1]) if len(idx) else 0


def _wigner_dimension(state: FockVector, radius: float) -> int:
    # room for the displaced support: a shift by |gamma| reaches about (|gamma| + 3)^2 quanta further
    return _support(state) + int(math.ceil(4.0 * (radius + 3.0) ** 2))


def _padded(state: FockVector, dim: int) -> np.ndarray:
    v = np.zeros(dim + 1, dtype=complex)
    k = min(dim, state.cutoff) + 1
    v[:k] = state.amplitudes[:k]
    return v


def oracle_wigner(state: FockVector, gamma: complex) -> float:
    """W(gamma) = (2/pi) sum_k (-1)^k |<k| D(gamma)^dagger |psi>|^2."""
    gamma = complex(gamma)
    if abs(gamma) ** 2 > state.cutoff:
        raise BoundsError(f"|gamma|={abs(gamma):.3g} too large for cutoff {state.cutoff}")
    dim = _wigner_dimension(state, abs(gamma))
    w = apply_displacement(-gamma, _padded(state, dim))
    par = (-1.0) ** np.arange(dim + 1)
    return float(2.0 / math.pi * np.sum(par * np.abs(w) ** 2))


def _axis_sweep(v: np.ndarray, points: np.ndarray, unit: complex) -> list[np.ndarray]:
    """[D(-unit * t) v for t in points]; commuting displacements are chained.

    The chain starts at the point nearest the origin and runs outward both
    ways, so no step is longer than the largest gap between points.
    """
    out = [None] * len(points)
    if not len(points):
        return out
    i0 = int(np.argmin(np.abs(points)))
    out[i0] = apply_displacement(-unit * points[i0], v)
    for i in range(i0 + 1, len(points)):
        out[i] = apply_displacement(-unit * (points[i] - points[i - 1]), out[i - 1])
    for i in range(i0 - 1, -1, -1):
        out[i] = apply_displacement(-unit * (points[i] - points[i + 1]), out[i + 1])
    return out


def oracle_wigner_grid(state: FockVector, xs, ps) -> np.ndarray:
    """W on the grid gamma = (x + i p)/sqrt 2; returns shape (len(xs), len(ps)).

    D(u + iv) equals D(iv) D(u) up to a phase, and displacements along one axis
    commute, so each axis is swept with short chained steps.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    radius = math.hypot(np.max(np.abs(xs)), np.max(np.abs(ps))) / math.sqrt(2.0)
    if radius ** 2 > state.cutoff:
        raise BoundsError(f"grid radius {radius:.3g} too large for cutoff {state.cutoff}")
    dim = _wigner_dimension(state, radius)
    par = (-1.0) ** np.arange(dim + 1)
    cols = np.stack(_axis_sweep(_padded(state, dim), xs / math.sqrt(2.0), 1.0), axis=1)
    out = np.empty((len(xs), len(ps)))
    for j, w in enumerate(_axis_sweep(cols, ps / math.sqrt(2.0), 1j)):
        out[:, j] = 2.0 / math.pi * (par @ np.abs(w) ** 2)
    return out

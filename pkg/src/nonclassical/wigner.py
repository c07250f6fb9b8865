"""Closed-form Wigner functions and the nonclassical volume.

Phase-space convention: gamma = (x + i p)/sqrt 2, d^2 gamma = dx dp / 2, and
W integrates to one over d^2 gamma.  A coherent state |alpha> has
W = (2/pi) exp(-2 |gamma - alpha|^2).
"""

from __future__ import annotations

import csv
import io
import math
import struct
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegenerateStateError
from .moments import canonical
from .specfun import homogeneous_hermite_all, laguerre
from .states import StateSpec, _degenerate_check, _hyperbolic, inverse_norm_squared

CONVENTION = "gamma = (x + i p)/sqrt(2); d^2gamma = dx dp / 2"
BINARY_MAGIC = b"WGRD"
_HEADER = struct.Struct("<4sII4d")
GL_DEGREE = 8


def wigner_r0(spec: StateSpec, gamma):
    """W at r = 0: coherent Gaussian times (-1)^m L_m(|2 gamma - alpha|^2) / L_m(-|alpha|^2) when adding.

    Independent of the general form; used as a reduction check.
    """
    spec = canonical(spec)
    g = np.asarray(gamma, dtype=complex)
    a = spec.alpha
    base = 2.0 / math.pi * np.exp(-2.0 * np.abs(g - a) ** 2)
    if spec.is_add:
        m = spec.m
        base = base * (-1) ** m * laguerre(m, np.abs(2.0 * g - a) ** 2) / laguerre(m, -abs(a) ** 2)
    elif spec.m and a == 0:
        raise DegenerateStateError(f"{spec}: subtraction from vacuum")
    return float(base) if np.ndim(gamma) == 0 else base


def wigner_closed(spec: StateSpec, gamma):
    """W(gamma) as the squeezed-coherent Wigner function times a polynomial factor.

    Accepts a scalar or an array of complex phase-space points.
    """
    spec = canonical(spec)
    inv = inverse_norm_squared(spec)
    _degenerate_check(spec, inv)
    scalar = np.ndim(gamma) == 0
    g = np.asarray(gamma, dtype=complex)
    m, r, phi = spec.m, spec.r, spec.phi
    ch, sh = math.cosh(r), math.sinh(r)
    beta = spec.beta
    em, ep = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    gc = np.conj(g)
    w_scs = 2.0 / math.pi * np.exp(-2.0 * np.abs(g * ch - gc * np.exp(1j * phi) * sh - beta) ** 2)
    if m == 0:
        return float(w_scs) if scalar else w_scs
    sh2 = math.sinh(2 * r)
    if spec.is_add:
        b = em * (2 * g * ch * ch - beta * ch) - ep * (gc * sh2 - beta.conjugate() * sh)
    else:
        b = em * (beta * ch - 2 * g * sh * sh) - ep * (beta.conjugate() * sh - gc * sh2)
    # H_k(-i b / sqrt(sinh 2r)) with its (sinh(2r)/4)^{k/2} factor folded in
    u = homogeneous_hermite_all(m, -0.5j * b, sh2 / 4.0)
    c = -_hyperbolic(spec.op, r)
    acc = np.zeros(g.shape)
    for l in range(m + 1):
        acc = acc + (c ** l * math.perm(m, l) ** 2 / math.factorial(l)) * np.abs(u[m - l]) ** 2
    out = w_scs * acc / inv
    return float(out) if scalar else out


def wigner_xp(spec: StateSpec, x, p):
    """W at (x, p) with gamma = (x + i p)/sqrt 2 (broadcasting)."""
    x, p = np.asarray(x, dtype=float), np.asarray(p, dtype=float)
    return wigner_closed(spec, (x + 1j * p) / math.sqrt(2.0))


@dataclass
class WignerGrid:
    """W sampled at x_i (rows) and p_j (columns) on inclusive linspace grids."""

    spec: StateSpec | None
    x_range: tuple[float, float]
    p_range: tuple[float, float]
    values: np.ndarray
    convention_note: str = CONVENTION

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def np(self) -> int:
        return self.values.shape[1]

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(*self.x_range, self.nx)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(*self.p_range, self.np)

    def integral(self) -> float:
        """Midpoint-rule integral of W over d^2 gamma, one cell per node."""
        dx = (self.x_range[1] - self.x_range[0]) / max(self.nx - 1, 1)
        dp = (self.p_range[1] - self.p_range[0]) / max(self.np - 1, 1)
        return float(math.fsum(self.values.ravel()) * dx * dp / 2.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.spec is not None:
            w.writerow(["# " + " ".join(f"{k}={v}" for k, v in self.spec.to_record().items())])
        w.writerow(["# " + self.convention_note])
        w.writerow(["x", "p", "W"])
        for i, x in enumerate(self.xs):
            for j, p in enumerate(self.ps):
                w.writerow([repr(float(x)), repr(float(p)), repr(float(self.values[i, j]))])
        return buf.getvalue()

    def to_bytes(self) -> bytes:
        """magic, nx, np (uint32), x0, x1, p0, p1 (float64), then row-major float64 values."""
        head = _HEADER.pack(BINARY_MAGIC, self.nx, self.np, *self.x_range, *self.p_range)
        return head + np.ascontiguousarray(self.values, dtype="<f8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, spec: StateSpec | None = None) -> "WignerGrid":
        magic, nx, np_, x0, x1, p0, p1 = _HEADER.unpack_from(data)
        if magic != BINARY_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        vals = np.frombuffer(data, dtype="<f8", offset=_HEADER.size, count=nx * np_)
        return cls(spec, (x0, x1), (p0, p1), vals.reshape(nx, np_).copy())


def default_ranges(spec: StateSpec) -> tuple[tuple[float, float], tuple[float, float]]:
    """Square around the state's centre wide enough for the default integral check."""
    cx, cp = math.sqrt(2.0) * spec.alpha.real, math.sqrt(2.0) * spec.alpha.imag
    half = 3.0 * math.exp(spec.r) * math.sqrt(spec.m + 1) + 2.0
    return (cx - half, cx + half), (cp - half, cp + half)


def wigner_grid(spec: StateSpec, x_range=None, p_range=None, nx: int = 101,
                np_: int = 101) -> WignerGrid:
    if x_range is None or p_range is None:
        dx, dp = default_ranges(spec)
        x_range = x_range or dx
        p_range = p_range or dp
    xs = np.linspace(*x_range, nx)
    ps = np.linspace(*p_range, np_)
    vals = wigner_xp(spec, xs[:, None], ps[None, :])
    return WignerGrid(spec, tuple(map(float, x_range)), tuple(map(float, p_range)),
                      np.asarray(vals, dtype=float))


@dataclass
class NonclassicalVolumeResult:
    delta: float
    integration_radius: float
    estimated_tail: float
    refinement_levels: int
    panels: int = 0
    integral: float = 1.0
    history: list = field(default_factory=list)


_OFFSETS = np.array([(0, 0), (1, 0), (0, 1), (1, 1)], dtype=float)


def _cell_sums(spec, x0, p0, h, degree=GL_DEGREE, chunk=2048):
    """Tensor Gauss-Legendre (integral |W|, integral W) over squares [x0, x0+h] x [p0, p0+h]."""
    t, w = np.polynomial.legendre.leggauss(degree)
    t, w = 0.5 * (t + 1.0), 0.5 * w
    ww = w[:, None] * w[None, :]
    out_abs = np.empty(len(x0))
    out_w = np.empty(len(x0))
    for start in range(0, len(x0), chunk):
        sl = slice(start, start + chunk)
        X = x0[sl, None] + h[sl, None] * t[None, :]
        P = p0[sl, None] + h[sl, None] * t[None, :]
        V = wigner_xp(spec, X[:, :, None], P[:, None, :])
        area = h[sl] ** 2 / 2.0  # d^2 gamma = dx dp / 2
        out_abs[sl] = np.einsum("cij,ij->c", np.abs(V), ww) * area
        out_w[sl] = np.einsum("cij,ij->c", V, ww) * area
    return out_abs, out_w


class _Cells:
    """Leaf squares with their one-panel and four-panel rule values."""

    def __init__(self, spec, x0, p0, h, whole_abs=None, whole_w=None):
        self.spec = spec
        self.x0, self.p0, self.h = x0, p0, h
        if whole_abs is None:
            whole_abs, whole_w = _cell_sums(spec, x0, p0, h)
        self.whole_abs, self.whole_w = whole_abs, whole_w
        hc = np.repeat(h / 2.0, 4)
        cx = np.repeat(x0, 4) + np.tile(_OFFSETS[:, 0], len(x0)) * hc
        cp = np.repeat(p0, 4) + np.tile(_OFFSETS[:, 1], len(x0)) * hc
        ca, cw = _cell_sums(spec, cx, cp, hc)
        self.child = (cx, cp, hc, ca, cw)
        self.sub_abs = ca.reshape(-1, 4).sum(axis=1)
        self.sub_w = cw.reshape(-1, 4).sum(axis=1)
        self.err = np.abs(self.sub_abs - self.whole_abs) + np.abs(self.sub_w - self.whole_w)

    def split(self, mask: np.ndarray) -> "_Cells":
        """Replace the masked leaves by their children."""
        keep = ~mask
        cmask = np.repeat(mask, 4)
        cx, cp, hc, ca, cw = self.child
        new = _Cells.__new__(_Cells)
        fresh = _Cells(self.spec, cx[cmask], cp[cmask], hc[cmask], ca[cmask], cw[cmask])
        new.spec = self.spec
        for name in ("x0", "p0", "h", "whole_abs", "whole_w", "sub_abs", "sub_w", "err"):
            setattr(new, name, np.concatenate([getattr(self, name)[keep], getattr(fresh, name)]))
        new.child = tuple(np.concatenate([c[cmask.__invert__()], f])
                          for c, f in zip(self.child, fresh.child))
        return new


def _square(spec, cx, cp, half, panels) -> _Cells:
    h = 2.0 * half / panels
    edges = np.arange(panels) * h
    X, P = np.meshgrid(cx - half + edges, cp - half + edges, indexing="ij")
    return _Cells(spec, X.ravel(), P.ravel(), np.full(X.size, h))


def nonclassical_volume(spec: StateSpec, tol: float = 1e-6, max_levels: int = 60,
                        initial_panels: int = 8, time_budget: float | None = None
                        ) -> NonclassicalVolumeResult:
    """delta = (integral |W| - 1)/2 by adaptive tensor-product Gauss-Legendre.

    Evaluated as (integral |W| - integral W)/2, which equals the definition
    because W integrates to one; |1 - integral W| is the tail estimate.  The
    square grows while the tail estimate exceeds ``tol``.  Inside it, panels
    are split in four wherever the one-panel and four-panel rules disagree,
    largest disagreements first, until the summed disagreement and the change
    in delta both fall below ``tol``.  Only panels crossing the zero set of W
    (where |W| has a kink) need deep refinement.
    """
    if tol < 1e-6:
        raise ValueError("tol must be >= 1e-6")
    spec_c = canonical(spec)
    _degenerate_check(spec_c, inverse_norm_squared(spec_c))
    cx, cp = math.sqrt(2.0) * spec.alpha.real, math.sqrt(2.0) * spec.alpha.imag
    half = math.sqrt(2.0) * abs(spec.beta) + 4.0 * math.exp(spec.r) * math.sqrt(spec.m + 1)
    cells = _square(spec, cx, cp, half, initial_panels)
    prev = None
    history = []
    t0 = time.perf_counter()
    for level in range(1, max_levels + 1):
        i_abs, i_w = math.fsum(cells.sub_abs), math.fsum(cells.sub_w)
        delta = 0.5 * (i_abs - i_w)
        tail = abs(1.0 - i_w)
        err = math.fsum(cells.err)
        history.append((half, len(cells.h), delta, tail))
        if tail >= tol and err < tol:
            # resolved but still missing mass: the square is too small
            half *= 1.5
            cells = _square(spec, cx, cp, half, initial_panels)
            prev = None
            continue
        if prev is not None and abs(delta - prev) < tol and err < tol:
            value = 0.0 if abs(delta) < tol else max(delta, 0.0)
            return NonclassicalVolumeResult(value, half, tail, level, len(cells.h), i_w, history)
        if time_budget is not None and time.perf_counter() - t0 > time_budget:
            break
        order = np.argsort(cells.err)[::-1]
        cum = np.cumsum(cells.err[order])
        count = int(np.searchsorted(cum, 0.8 * cum[-1])) + 1
        mask = np.zeros(len(cells.h), dtype=bool)
        mask[order[:count]] = True
        cells = cells.split(mask)
        prev = delta
    estimates = [h[2] for h in history[-2:]]
    raise ConvergenceError(f"nonclassical volume did not converge for {spec}", estimates)

"""Normally ordered moments <a^dagger^p a^q> from closed forms."""

from __future__ import annotations

import cmath
import logging
import math
import threading

from .errors import BoundsError
from .specfun import COMBINATORICS, homogeneous_hermite_all
from .states import (
    StateSpec,
    _degenerate_check,
    _hermite_scale,
    _hyperbolic,
    inverse_norm_squared,
)

log = logging.getLogger(__name__)

MAX_ORDER = 12
CANCELLATION_LIMIT = 1e8


def _fsum_complex(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _check(spec: StateSpec, p: int, q: int, max_order: int) -> None:
    if p < 0 or q < 0:
        raise BoundsError("moment orders must be non-negative")
    if p > max_order or q > max_order:
        raise BoundsError(f"order ({p},{q}) exceeds max_order={max_order}")


def canonical(spec: StateSpec) -> StateSpec:
    """With m = 0 both operations give the bare squeezed coherent state; use one path."""
    if spec.m == 0 and spec.is_add:
        return spec.with_(op="sub")
    return spec


def moment_r0(spec: StateSpec, p: int, q: int) -> complex:
    """<a^dag^p a^q> at r = 0 from the coherent / photon-added coherent family.

    Independent of the general sum; used as a reduction check.
    """
    a, ac = spec.alpha, spec.alpha.conjugate()
    r0 = spec.with_(r=0.0)
    inv = inverse_norm_squared(r0)
    _degenerate_check(r0, inv)
    if not spec.is_add or spec.m == 0:
        return ac ** p * a ** q
    m = spec.m
    terms = []
    # <alpha| a^m a^dag^p a^q a^dag^m |alpha>, each a^k a^dag^l brought to normal order
    for j in range(min(q, m) + 1):
        cj = math.comb(q, j) * math.perm(m, j)
        for k in range(min(p, m) + 1):
            ck = math.comb(p, k) * math.perm(m, k)
            for i in range(min(m - k, m - j) + 1):
                ci = math.comb(m - k, i) * math.perm(m - j, i)
                terms.append(cj * ck * ci * a ** (q - j + m - k - i) * ac ** (p - k + m - j - i))
    return _fsum_complex(terms) / inv


def _moment_terms(spec: StateSpec, p: int, q: int, printed: bool = False) -> list[complex]:
    """Summands of <a^dag^p a^q>.

    ``printed=True`` reproduces the published variant for comparison only: for
    addition it is the complex conjugate of the moment; for subtraction the
    i-powers and the Hermite arguments are swapped while the phi phase is kept.
    """
    m = spec.m
    y, s = _hermite_scale(spec)
    c = _hyperbolic(spec.op, spec.r)
    # index m+p-... pairs with conj(A); pairing it with A gives conj(<a^dag^p a^q>)
    phase = cmath.exp(-0.5j * spec.phi * (p - q)) * (1j) ** p * (-1j) ** q
    inv = inverse_norm_squared(spec)
    _degenerate_check(spec, inv)
    jmax = min(p, q) if spec.is_add else 0
    top = m + max(p, q)
    up, uq = homogeneous_hermite_all(top, y.conjugate(), s), homogeneous_hermite_all(top, y, s)
    if printed:
        up, uq = uq, up
        phase = phase.conjugate() if spec.is_add else (
            cmath.exp(-0.5j * spec.phi * (p - q)) * (-1j) ** p * (1j) ** q)
    terms = []
    for j in range(jmax + 1):
        P, Q = m + p - j, m + q - j
        cj = (-1) ** j * COMBINATORICS.comb(p, j) * math.perm(q, j)
        pref = phase * cj / inv
        for l in range(min(P, Q) + 1):
            cl = math.perm(P, l) * math.perm(Q, l)
            terms.append(pref * (cl * c ** l / math.factorial(l)) * up[P - l] * uq[Q - l])
    return terms


def moment_with_diagnostics(spec: StateSpec, p: int, q: int,
                            max_order: int = MAX_ORDER) -> tuple[complex, float]:
    """Return ``(<a^dag^p a^q>, cancellation ratio)``.

    The ratio is the largest summand magnitude over the result magnitude; above
    ``CANCELLATION_LIMIT`` the value should not be trusted to full precision.
    """
    _check(spec, p, q, max_order)
    terms = _moment_terms(canonical(spec), p, q)
    value = _fsum_complex(terms)
    biggest = max((abs(t) for t in terms), default=0.0)
    ratio = biggest / abs(value) if value != 0 else (math.inf if biggest > 0 else 1.0)
    if p == q:
        value = complex(value.real, 0.0)
    return value, ratio


def moment(spec: StateSpec, p: int, q: int, max_order: int = MAX_ORDER) -> complex:
    """<a^dagger^p a^q> for the normalised state."""
    value, ratio = moment_with_diagnostics(spec, p, q, max_order)
    if ratio > CANCELLATION_LIMIT and abs(value) > 1e-300:
        log.warning("%s: moment (%d,%d) lost ~%.0f digits to cancellation",
                    spec, p, q, math.log10(ratio))
    return value


def diagonal_moment(spec: StateSpec, p: int, max_order: int = MAX_ORDER) -> float:
    """<a^dagger^p a^p> written purely through normalisation constants."""
    _check(spec, p, p, max_order)
    spec = canonical(spec)
    m = spec.m
    inv_m = inverse_norm_squared(spec)
    _degenerate_check(spec, inv_m)
    if not spec.is_add:
        return inverse_norm_squared(spec, m + p) / inv_m
    terms = [(-1) ** j * COMBINATORICS.comb(p, j) * math.perm(p, j)
             * inverse_norm_squared(spec, m - j + p) for j in range(p + 1)]
    return math.fsum(terms) / inv_m


class MomentTable:
    """Lazily filled, memoised table of moments for one state.

    ``source`` overrides the closed form, e.g. to feed oracle moments through
    the same witness code.  Inserts are serialised by a lock, so the table can
    be shared between threads.
    """

    def __init__(self, spec: StateSpec, max_order: int = MAX_ORDER, source=None,
                 diagonal_source=None):
        self.spec = spec
        self.max_order = max_order
        self._source = source
        self._diagonal_source = diagonal_source
        self._entries: dict[tuple[int, int], complex] = {}
        self._diag: dict[int, float] = {}
        self._lock = threading.Lock()
        if source is None:
            _degenerate_check(spec, inverse_norm_squared(spec))

    @classmethod
    def from_oracle(cls, state, spec: StateSpec | None = None, max_order: int = MAX_ORDER):
        from .oracle import oracle_moment

        return cls(spec, max_order, source=lambda p, q: oracle_moment(state, p, q),
                   diagonal_source=lambda p: oracle_moment(state, p, p).real)

    def __call__(self, p: int, q: int) -> complex:
        return self.entry(p, q)

    def entry(self, p: int, q: int) -> complex:
        key = (p, q)
        value = self._entries.get(key)
        if value is not None:
            return value
        if p > self.max_order or q > self.max_order:
            raise BoundsError(f"order ({p},{q}) exceeds max_order={self.max_order}")
        if (q, p) in self._entries:
            value = self._entries[(q, p)].conjugate()
        elif p == 0 and q == 0:
            value = 1.0 + 0.0j
        elif self._source is not None:
            value = complex(self._source(p, q))
        else:
            value = moment(self.spec, p, q, self.max_order)
        with self._lock:
            return self._entries.setdefault(key, value)

    def diagonal(self, p: int) -> float:
        """<a^dagger^p a^p> (real)."""
        value = self._diag.get(p)
        if value is not None:
            return value
        if p == 0:
            value = 1.0
        elif self._diagonal_source is not None:
            value = float(self._diagonal_source(p))
        elif self._source is not None:
            value = self.entry(p, p).real
        else:
            value = diagonal_moment(self.spec, p, self.max_order)
        with self._lock:
            return self._diag.setdefault(p, value)

    @property
    def mean_photon_number(self) -> float:
        return self.diagonal(1)

    def snapshot(self) -> dict[tuple[int, int], complex]:
        with self._lock:
            return dict(self._entries)

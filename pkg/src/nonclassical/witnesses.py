"""Moment-based nonclassicality witnesses.

Every function takes a :class:`~nonclassical.moments.MomentTable`, so the same
code runs on closed-form moments and on oracle moments.  Negative values
signal nonclassicality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BoundsError, UndefinedWitnessError
from .moments import MomentTable
from .specfun import COMBINATORICS, pochhammer_half
from .states import RECORD_FIELDS, StateSpec

BOUNDARY_TOL = 1e-12
DEFAULT_HOA_ORDERS = (2, 3, 4)
DEFAULT_HOSPS_ORDERS = (2, 3, 4)
DEFAULT_HM_ORDERS = (2, 4, 6)


def mandel_q(table: MomentTable) -> float:
    n = table.mean_photon_number
    if n <= 1e-300:
        raise UndefinedWitnessError("Mandel Q undefined for zero mean photon number", mean=n)
    return table.diagonal(2) / n - n


def hoa(table: MomentTable, n: int) -> float:
    """D(n-1) = <a^dag^n a^n> - <a^dag a>^n."""
    if n < 2:
        raise BoundsError(f"antibunching order needs n >= 2, got {n}")
    return table.diagonal(n) - table.mean_photon_number ** n


def hosps(table: MomentTable, n: int) -> float:
    """d(n-1), the Stirling-number form of higher-order sub-Poissonian statistics.

    The r = 0 terms (k from 1) vanish identically and are skipped.  For n = 2
    the sum collapses to D(1).
    """
    if n < 2:
        raise BoundsError(f"sub-Poissonian order needs n >= 2, got {n}")
    N = table.mean_photon_number
    terms = []
    for r in range(1, n + 1):
        w = COMBINATORICS.comb(n, r) * (-1) ** r
        for k in range(1, r + 1):
            c = w * COMBINATORICS.s2(r, k)
            terms.append(c * table.diagonal(k) * N ** (n - r))
            terms.append(-c * N ** (k + n - r))
    return math.fsum(terms)


def _det3(M) -> float:
    (a, b, c), (d, e, f), (g, h, i) = M
    return math.fsum([a * e * i, b * f * g, c * d * h, -c * e * g, -b * d * i, -a * f * h])


def agarwal_determinants(table: MomentTable) -> tuple[float, float]:
    """(det m3, det mu3) with m_k = <a^dag^k a^k> and mu_k = <(a^dag a)^k>."""
    m = [table.diagonal(k) for k in range(5)]
    mu = [math.fsum(COMBINATORICS.s2(k, j) * m[j] for j in range(k + 1)) for k in range(5)]
    hankel = lambda x: [[x[0], x[1], x[2]], [x[1], x[2], x[3]], [x[2], x[3], x[4]]]
    return _det3(hankel(m)), _det3(hankel(mu))


def agarwal_a3(table: MomentTable, rel_tol: float = 1e-12) -> float:
    det_m, det_mu = agarwal_determinants(table)
    den = det_mu - det_m
    scale = max(abs(det_m), abs(det_mu), 1e-300)
    if abs(den) <= rel_tol * scale or den == 0.0:
        raise UndefinedWitnessError("A3 denominator vanishes", det_m=det_m, det_mu=det_mu)
    return det_m / den


def hong_mandel_weight(i: int) -> int:
    """Normal-ordering weight of (a + a^dag)^{2i}: (2i)! / (2^i i!) = (2i-1)!!."""
    return math.factorial(2 * i) // (2 ** i * math.factorial(i))


def quadrature_central_moment(table: MomentTable, n: int) -> float:
    """<(X - <X>)^n> for X = (a + a^dag)/sqrt 2 from normally ordered moments."""
    if n % 2 or n < 0:
        raise ValueError(f"order must be even, got {n}")
    mean2 = 2.0 * table(0, 1).real  # <a + a^dag>
    terms = []
    for r in range(n + 1):
        outer = (-1) ** r * COMBINATORICS.comb(n, r) * mean2 ** (n - r)
        for i in range(r // 2 + 1):
            w = outer * hong_mandel_weight(i) * COMBINATORICS.comb(r, 2 * i)
            rest = r - 2 * i
            for k in range(rest + 1):
                terms.append(w * COMBINATORICS.comb(rest, k) * table(k, rest - k).real)
    return math.fsum(terms) / 2.0 ** (n / 2)


def hong_mandel(table: MomentTable, n: int) -> float:
    """S(n) = <(Delta X)^n> / (1/2)_{n/2} - 1; negative means n-th order squeezing."""
    if n % 2:
        raise ValueError(f"Hong-Mandel order must be even, got {n}")
    if not 2 <= n <= 8:
        raise BoundsError(f"Hong-Mandel order must lie in 2..8, got {n}")
    return quadrature_central_moment(table, n) / pochhammer_half(n // 2) - 1.0


@dataclass
class WitnessReport:
    """All moment witnesses of one state.

    ``D`` and ``d`` are keyed by the antibunching / sub-Poissonian order n-1
    (so ``D[1]`` is ordinary antibunching); ``S`` is keyed by the even
    quadrature order.  ``flags`` is True for strictly negative entries;
    entries within ``BOUNDARY_TOL`` of zero are listed in ``boundary``.
    """

    spec: StateSpec
    q_mandel: float | None
    D: dict[int, float]
    d: dict[int, float]
    A3: float | None
    S: dict[int, float]
    flags: dict[str, bool] = field(default_factory=dict)
    boundary: set[str] = field(default_factory=set)
    undefined: set[str] = field(default_factory=set)

    def values(self) -> dict[str, float | None]:
        out = {"Q": self.q_mandel}
        out.update({f"D{k}": v for k, v in self.D.items()})
        out.update({f"d{k}": v for k, v in self.d.items()})
        out["A3"] = self.A3
        out.update({f"S{k}": v for k, v in self.S.items()})
        return out

    def columns(self) -> list[str]:
        return list(RECORD_FIELDS) + list(self.values()) + ["nonclassical"]

    def row(self) -> dict:
        rec = self.spec.to_record()
        rec.update(self.values())
        rec["nonclassical"] = ";".join(k for k, f in self.flags.items() if f)
        return rec

    def to_json(self) -> dict:
        return {"spec": self.spec.to_record(), "witnesses": self.values(),
                "nonclassical": sorted(k for k, f in self.flags.items() if f),
                "boundary": sorted(self.boundary), "undefined": sorted(self.undefined)}


def report_columns(hoa_orders=DEFAULT_HOA_ORDERS, hosps_orders=DEFAULT_HOSPS_ORDERS,
                   hm_orders=DEFAULT_HM_ORDERS) -> list[str]:
    return (list(RECORD_FIELDS) + ["Q"] + [f"D{n - 1}" for n in hoa_orders]
            + [f"d{n - 1}" for n in hosps_orders] + ["A3"] + [f"S{n}" for n in hm_orders]
            + ["nonclassical"])


def witness_report(spec: StateSpec, table: MomentTable | None = None,
                   hoa_orders=DEFAULT_HOA_ORDERS, hosps_orders=DEFAULT_HOSPS_ORDERS,
                   hm_orders=DEFAULT_HM_ORDERS) -> WitnessReport:
    table = MomentTable(spec) if table is None else table
    undefined = set()
    try:
        q = mandel_q(table)
    except UndefinedWitnessError:
        q, undefined = None, {"Q"}
    try:
        a3 = agarwal_a3(table)
    except UndefinedWitnessError:
        a3 = None
        undefined.add("A3")
    rep = WitnessReport(
        spec=spec,
        q_mandel=q,
        D={n - 1: hoa(table, n) for n in hoa_orders},
        d={n - 1: hosps(table, n) for n in hosps_orders},
        A3=a3,
        S={n: hong_mandel(table, n) for n in hm_orders},
        undefined=undefined,
    )
    for name, value in rep.values().items():
        if value is None:
            continue
        if abs(value) < BOUNDARY_TOL:
            rep.boundary.add(name)
            rep.flags[name] = False
        else:
            rep.flags[name] = value < 0
    return rep

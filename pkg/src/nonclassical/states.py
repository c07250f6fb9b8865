"""State parameterisation and normalisation constants.

A photon-added (subtracted) squeezed coherent state is

    |psi> = N * (a^dagger)^m D(alpha) S(z) |0>     (resp. a^m in place of a^dagger^m)

with D(alpha) = exp(alpha a^dagger - alpha^* a), S(z) = exp(z a^dagger^2 / 2 - z^* a^2 / 2)
and z = r exp(i phi).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DegenerateStateError, SmallSqueezingError
from .specfun import COMBINATORICS, homogeneous_hermite_all, laguerre, legendre

EPS_R = 1e-6
TWO_PI = 2.0 * math.pi
PHI_DECIMALS = 12


class Operation(str, enum.Enum):
    ADD = "add"
    SUBTRACT = "sub"

    @classmethod
    def parse(cls, value) -> "Operation":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"add": cls.ADD, "+": cls.ADD, "added": cls.ADD,
                   "sub": cls.SUBTRACT, "subtract": cls.SUBTRACT, "-": cls.SUBTRACT,
                   "subtracted": cls.SUBTRACT}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown operation {value!r}; expected 'add' or 'sub'") from None


@dataclass(frozen=True)
class StateSpec:
    """Which state: operation, photon count m, displacement alpha, squeezing r e^{i phi}.

    ``phi`` is stored reduced to [0, 2 pi) and rounded to 12 decimals.
    """

    op: Operation
    m: int
    alpha: complex
    r: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "op", Operation.parse(self.op))
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "alpha", alpha)
        r = float(self.r)
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"r must be finite and >= 0, got {self.r}")
        object.__setattr__(self, "r", r)
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError("phi must be finite")
        # reduce to [0, 2 pi) and snap to a 1e-12 grid, so phi and phi + 2 pi
        # (which differ in their last bits after reduction) give the same state
        phi = round(phi % TWO_PI, PHI_DECIMALS)
        if phi >= TWO_PI:
            phi = 0.0
        object.__setattr__(self, "phi", phi + 0.0)

    @classmethod
    def polar(cls, op, m, alpha_mod, alpha_arg, r, phi=0.0) -> "StateSpec":
        return cls(op, m, cmath.rect(alpha_mod, alpha_arg), r, phi)

    @property
    def is_add(self) -> bool:
        return self.op is Operation.ADD

    @property
    def z(self) -> complex:
        return cmath.rect(self.r, self.phi)

    @property
    def beta(self) -> complex:
        """Displacement after commuting D(alpha) through S(z): D(alpha)S(z) = S(z)D(beta)."""
        r, a = self.r, self.alpha
        return a * math.cosh(r) - a.conjugate() * cmath.exp(1j * self.phi) * math.sinh(r)

    @property
    def small_r(self) -> bool:
        return self.r <= EPS_R

    def with_(self, **changes) -> "StateSpec":
        fields = dict(op=self.op, m=self.m, alpha=self.alpha, r=self.r, phi=self.phi)
        fields.update(changes)
        return StateSpec(**fields)

    def to_record(self) -> dict:
        return {"op": self.op.value, "m": self.m, "alpha_re": self.alpha.real,
                "alpha_im": self.alpha.imag, "r": self.r, "phi": self.phi}

    @classmethod
    def from_record(cls, rec) -> "StateSpec":
        return cls(rec["op"], int(rec["m"]),
                   complex(float(rec["alpha_re"]), float(rec["alpha_im"])),
                   float(rec["r"]), float(rec.get("phi", 0.0)))

    def __str__(self):
        return (f"{self.op.value}(m={self.m}, alpha={self.alpha.real:.6g}{self.alpha.imag:+.6g}j, "
                f"r={self.r:.6g}, phi={self.phi:.6g})")


RECORD_FIELDS = ("op", "m", "alpha_re", "alpha_im", "r", "phi")


@dataclass(frozen=True)
class HermiteArgument:
    """A = i alpha e^{-i phi/2} / sqrt(sinh 2r); ``regularized`` marks an r -> 0 stand-in."""

    value: complex
    regularized: bool = False


def hermite_argument(spec: StateSpec) -> HermiteArgument:
    if spec.small_r:
        raise SmallSqueezingError(f"r={spec.r} <= EPS_R={EPS_R}: A is not finite here")
    return HermiteArgument(_hermite_arg(spec.alpha, spec.r, spec.phi))


def _hermite_arg(alpha: complex, r: float, phi: float) -> complex:
    return 1j * alpha * cmath.exp(-0.5j * phi) / math.sqrt(math.sinh(2 * r))


def _hyperbolic(op: Operation, r: float) -> float:
    """coth r (added) or tanh r (subtracted) times sinh(2r)/2, i.e. cosh^2 r or sinh^2 r.

    The only difference between the added and subtracted sums.  Folding the
    sinh(2r)/2 in keeps the factor finite at r = 0.
    """
    return math.cosh(r) ** 2 if op is Operation.ADD else math.sinh(r) ** 2


def _hermite_scale(spec: StateSpec) -> tuple[complex, float]:
    """(A sqrt(s), s) with s = sinh(2r)/4: the homogeneous Hermite arguments.

    A sqrt(s) = i alpha e^{-i phi/2} / 2 stays finite as r -> 0, where A diverges.
    """
    return 0.5j * spec.alpha * cmath.exp(-0.5j * spec.phi), math.sinh(2 * spec.r) / 4.0


def inverse_norm_squared(spec: StateSpec, m: int | None = None) -> float:
    """<SCS| a^m a^dagger^m |SCS> (added) or <SCS| a^dagger^m a^m |SCS> (subtracted).

    This is N^{-2}.  ``m`` overrides ``spec.m`` so that ratios N(m)/N(m') can
    be formed without building new specs.  Evaluated with homogeneous Hermite
    polynomials, so r = 0 needs no special case.
    """
    m = spec.m if m is None else m
    y, s = _hermite_scale(spec)
    c = _hyperbolic(spec.op, spec.r)
    u = homogeneous_hermite_all(m, y, s)
    terms = []
    for l in range(m + 1):
        coeff = COMBINATORICS.comb(m, l) * math.perm(m, l)  # (m!)^2 / (l! ((m-l)!)^2)
        terms.append(coeff * c ** l * abs(u[m - l]) ** 2)
    return math.fsum(terms)


def _degenerate_check(spec: StateSpec, value: float) -> None:
    if not value > 0.0 or not math.isfinite(value):
        raise DegenerateStateError(
            f"{spec}: a^{spec.m} annihilates the squeezed coherent state (norm^2 = {value})")


def normalization(spec: StateSpec) -> float:
    """Normalisation constant N_+ or N_-."""
    inv = inverse_norm_squared(spec)
    _degenerate_check(spec, inv)
    return inv ** -0.5


def normalization_reductions(spec: StateSpec) -> float:
    """Normalisation from the reduced special-case formula.

    Families: r = 0 (photon-added coherent state, Laguerre form; or |alpha|^-m
    after subtraction) and alpha = 0 (squeezed vacuum, Legendre forms).  Used
    only as an independent consistency check of :func:`normalization`.
    """
    m, r = spec.m, spec.r
    if r == 0.0:
        x = abs(spec.alpha) ** 2
        if spec.is_add:
            return (math.factorial(m) * laguerre(m, -x)) ** -0.5
        if x == 0.0 and m > 0:
            raise DegenerateStateError(f"{spec}: subtraction from vacuum")
        return abs(spec.alpha) ** -m
    if spec.alpha == 0:
        if spec.is_add:
            return (math.factorial(m) * math.cosh(r) ** m * legendre(m, math.cosh(r))) ** -0.5
        # (-i sinh r)^m P_m(i sinh r) is real: P_m has the parity of m
        val = math.factorial(m) * ((-1j * math.sinh(r)) ** m * legendre(m, 1j * math.sinh(r)))
        return val.real ** -0.5
    raise ValueError(f"{spec} is not in a special-case family (needs r == 0 or alpha == 0)")

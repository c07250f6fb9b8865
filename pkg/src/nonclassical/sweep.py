"""Parameter sweeps and the figure presets.

A sweep fixes a state template and varies one or two parameters over
inclusive linspace grids (first axis outermost).  Rows come back in grid
order regardless of how many worker processes evaluate them.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegenerateStateError, UndefinedWitnessError
from .pnd import eta, klyshko, pnd
from .states import RECORD_FIELDS, StateSpec
from .wigner import nonclassical_volume, wigner_grid
from .witnesses import report_columns, witness_report

SWEEPABLE = ("m", "alpha_re", "alpha_im", "alpha_mod", "alpha_arg", "r", "phi")
QUANTITIES = ("witness", "klyshko", "volume", "wigner")
FORMATS = ("csv", "json")
KLYSHKO_N = 10


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.name!r}; choose from {', '.join(SWEEPABLE)}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"axis {self.name}: steps must be an integer >= 2")

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        """``name:start:stop:steps``; start and stop accept ``pi`` multiples such as ``2pi``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"sweep axis {text!r} is not name:start:stop:steps")
        return cls(parts[0], parse_number(parts[1]), parse_number(parts[2]), int(parts[3]))

    def values(self) -> list:
        vals = np.linspace(self.start, self.stop, int(self.steps))
        if self.name == "m":
            if not np.allclose(vals, np.round(vals)):
                raise ValueError("an m axis must land on integers")
            return [int(round(v)) for v in vals]
        return [float(v) for v in vals]

    def describe(self) -> str:
        return f"{self.name}={self.start!r}:{self.stop!r}:{self.steps}"


def parse_number(text: str) -> float:
    """Float, optionally times pi: '1.5', 'pi', '2pi', 'pi/3', '-pi/2'."""
    t = str(text).strip().lower().replace(" ", "")
    if "pi" not in t:
        return float(t)
    head, _, tail = t.partition("pi")
    coef = -1.0 if head == "-" else (1.0 if head in ("", "+") else float(head.rstrip("*")))
    div = float(tail[1:]) if tail.startswith("/") else 1.0
    if tail and not tail.startswith("/"):
        raise ValueError(f"cannot parse {text!r}")
    return coef * math.pi / div


def spec_from_params(params: dict) -> StateSpec:
    """StateSpec from flat parameters; alpha in polar or Cartesian form, not both."""
    polar = {"alpha_mod", "alpha_arg"} & params.keys()
    cart = {"alpha_re", "alpha_im"} & params.keys()
    if polar and cart:
        raise ValueError("give alpha either as alpha_mod/alpha_arg or as alpha_re/alpha_im")
    if polar:
        alpha = cmath.rect(float(params.get("alpha_mod", 0.0)), float(params.get("alpha_arg", 0.0)))
    else:
        alpha = complex(float(params.get("alpha_re", 0.0)), float(params.get("alpha_im", 0.0)))
    return StateSpec(params.get("op", "add"), int(params.get("m", 0)), alpha,
                     float(params.get("r", 0.0)), float(params.get("phi", 0.0)))


@dataclass(frozen=True)
class SweepConfig:
    name: str
    template: dict
    axes: tuple
    quantity: str = "witness"
    options: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"
    caption: str = ""

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep needs one or two axes")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise ValueError("sweep axes must differ")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        spec_from_params(self.template)  # validate early

    def points(self) -> list[dict]:
        grids = [a.values() for a in self.axes]
        if len(grids) == 1:
            combos = [(v,) for v in grids[0]]
        else:
            combos = [(u, v) for u in grids[0] for v in grids[1]]
        return [{**self.template, **{a.name: v for a, v in zip(self.axes, c)}} for c in combos]

    def columns(self) -> list[str]:
        swept = ["sweep_" + a.name for a in self.axes]
        if self.quantity == "witness":
            body = report_columns()[len(RECORD_FIELDS):]
        elif self.quantity == "klyshko":
            n = self.options.get("klyshko_n", KLYSHKO_N)
            body = ["P0", "P1"] + [f"B{k}" for k in range(n + 1)] + ["eta"]
        elif self.quantity == "volume":
            body = ["delta", "integration_radius", "estimated_tail", "refinement_levels"]
        else:
            body = ["x", "p", "W"]
        return swept + list(RECORD_FIELDS) + body + ["status"]


def _witness_row(spec, options):
    return [witness_report(spec).row()]


def _klyshko_row(spec, options):
    n = options.get("klyshko_n", KLYSHKO_N)
    dist = pnd(spec, n + 2)
    row = {"P0": dist[0], "P1": dist[1]}
    row.update({f"B{k}": klyshko(dist, k) for k in range(n + 1)})
    try:
        row["eta"] = eta(pnd(spec))
    except UndefinedWitnessError:
        row["eta"] = None
    return [row]


def _volume_row(spec, options):
    keys = ("tol", "max_levels", "initial_panels", "time_budget")
    res = nonclassical_volume(spec, **{k: options[k] for k in keys if k in options})
    return [{"delta": res.delta, "integration_radius": res.integration_radius,
             "estimated_tail": res.estimated_tail, "refinement_levels": res.refinement_levels}]


def _wigner_rows(spec, options):
    g = wigner_grid(spec, tuple(options.get("x_range", (-3.0, 3.0))),
                    tuple(options.get("p_range", (-3.0, 3.0))),
                    options.get("nx", 61), options.get("np", 61))
    xs, ps = g.xs, g.ps
    return [{"x": float(x), "p": float(p), "W": float(g.values[i, j])}
            for i, x in enumerate(xs) for j, p in enumerate(ps)]


_EVALUATORS = {"witness": _witness_row, "klyshko": _klyshko_row, "volume": _volume_row,
               "wigner": _wigner_rows}


def evaluate_point(args) -> list[dict]:
    """Rows for one sweep point; failures become a single flagged row."""
    point, quantity, options, swept = args
    # requested values; the record columns hold the state as stored (phi reduced mod 2 pi)
    head = {"sweep_" + k: point[k] for k in swept}
    spec = spec_from_params(point)
    head.update(spec.to_record())
    try:
        rows = _EVALUATORS[quantity](spec, options)
        status = "ok"
    except DegenerateStateError:
        rows, status = [{}], "degenerate"
    except ConvergenceError:
        rows, status = [{}], "no_convergence"
    return [{**head, **r, "status": status} for r in rows]


def run_sweep(config: SweepConfig, workers: int = 1) -> list[dict]:
    swept = tuple(a.name for a in config.axes)
    jobs = [(p, config.quantity, config.options, swept) for p in config.points()]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [evaluate_point(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(config: SweepConfig, rows: list[dict]) -> str:
    """CSV with a commented header, or a JSON document; both byte-stable."""
    cols = config.columns()
    template = " ".join(f"{k}={config.template[k]!r}" for k in sorted(config.template))
    axes = "; ".join(a.describe() for a in config.axes)
    if config.format == "json":
        doc = {"sweep": config.name, "caption": config.caption, "template": config.template,
               "axes": [a.describe() for a in config.axes], "quantity": config.quantity,
               "options": config.options, "columns": cols,
               "rows": [[row.get(c) for c in cols] for row in rows]}
        return json.dumps(doc, indent=1, sort_keys=False, allow_nan=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# sweep={config.name} quantity={config.quantity}\n")
    if config.caption:
        buf.write(f"# {config.caption}\n")
    buf.write(f"# template: {template}\n# axes: {axes}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in cols])
    return buf.getvalue()


# -- figure presets -----------------------------------------------------------

_A = {"alpha_mod": math.sqrt(2.0 / 3.0), "alpha_arg": math.pi / 3}
_SMALL = {"alpha_mod": 0.2, "alpha_arg": math.pi / 3}
_M = SweepAxis("m", 0, 3, 4)
_R = SweepAxis("r", 0.0, 1.0, 51)
_PHI = SweepAxis("phi", 0.0, 2 * math.pi, 73)
_PHI2 = SweepAxis("phi", 0.0, 4 * math.pi, 145)


def _cfg(name, op, alpha, fixed, axis, quantity="witness", caption="", axes=None, **options):
    template = {"op": op, **alpha, **fixed}
    return SweepConfig(name, template, axes or (_M, axis), quantity, options, caption=caption)


def _presets() -> dict[str, SweepConfig]:
    p = {}
    for fig, op in (("fig1", "add"), ("fig2", "sub")):
        cap = "antibunching D(1), D(2)"
        p[fig + "a"] = _cfg(fig + "a", op, _A, {"phi": 0.0}, _R, caption=cap + " vs r")
        p[fig + "b"] = _cfg(fig + "b", op, _A, {"phi": 0.0}, _R, caption=cap + " vs r")
        p[fig + "c"] = _cfg(fig + "c", op, _A, {"r": 0.1}, _PHI2 if op == "add" else _PHI,
                            caption=cap + " vs phi")
        p[fig + "d"] = _cfg(fig + "d", op, _A, {"r": 0.4}, _PHI, caption=cap + " vs phi")
    for fig, op in (("fig3", "add"), ("fig4", "sub")):
        cap = "sub-Poissonian d(1), d(2)"
        p[fig + "a"] = _cfg(fig + "a", op, _A, {"phi": 0.0}, _R, caption=cap + " vs r")
        p[fig + "b"] = _cfg(fig + "b", op, _A, {"phi": 0.0}, _R, caption=cap + " vs r")
        p[fig + "c"] = _cfg(fig + "c", op, _A, {"r": 0.2}, _PHI, caption=cap + " vs phi")
        p[fig + "d"] = _cfg(fig + "d", op, _A, {"r": 0.4}, _PHI, caption=cap + " vs phi")
    one = {"alpha_mod": 1.0, "alpha_arg": 0.0}
    r3 = SweepAxis("r", 0.1, 0.5, 3)
    for op, suffix in (("add", ""), ("sub", "-sub")):
        p["fig5a" + suffix] = _cfg("fig5a" + suffix, op, one, {"m": 1, "phi": 0.0}, None,
                                   "klyshko", "Klyshko B(n) for several r", axes=(r3,))
        p["fig5b" + suffix] = _cfg("fig5b" + suffix, op, {"alpha_arg": 0.0}, {"m": 1, "phi": 0.0},
                                   None, "klyshko", "eta vs |alpha| for several r",
                                   axes=(r3, SweepAxis("alpha_mod", 0.0, 3.0, 61)))
    p["fig6a"] = _cfg("fig6a", "add", _A, {"phi": 0.0}, _R, caption="A3 vs r")
    p["fig6b"] = _cfg("fig6b", "add", _A, {"r": 0.3}, _PHI, caption="A3 vs phi")
    p["fig6c"] = _cfg("fig6c", "sub", _A, {"phi": 0.0}, _R, caption="A3 vs r")
    p["fig6d"] = _cfg("fig6d", "sub", _A, {"r": 0.3}, _PHI, caption="A3 vs phi")
    for name, op, a_ab, a_b in (("hos_pascs", "add", 1.2, 1.4), ("hos_psscs", "sub", 0.2, 0.2)):
        cap = "Hong-Mandel S(n)"
        real = lambda x: {"alpha_mod": x, "alpha_arg": 0.0}
        p[name + "_a"] = _cfg(name + "_a", op, real(a_ab), {"phi": 0.0}, _R, caption=cap + " vs r")
        p[name + "_b"] = _cfg(name + "_b", op, real(a_b), {"phi": 0.0}, _R, caption=cap + " vs r")
        p[name + "_c"] = _cfg(name + "_c", op, real(a_ab), {"r": 0.1}, _PHI, caption=cap + " vs phi")
        p[name + "_d"] = _cfg(name + "_d", op, {"alpha_arg": 0.0}, {"r": 0.1, "phi": 0.0},
                              SweepAxis("alpha_mod", 0.0, 2.0, 41), caption=cap + " vs |alpha|")
    for fig, op in (("fig7", "add"), ("fig8", "sub")):
        p[fig] = _cfg(fig, op, _SMALL, {"r": 0.1, "phi": 0.0}, None, "wigner",
                      "Wigner function, m = 0..3", axes=(_M,), nx=61, np=61,
                      x_range=[-3.0, 3.0], p_range=[-3.0, 3.0])
    r21 = SweepAxis("r", 0.0, 1.0, 21)
    phi25 = SweepAxis("phi", 0.0, 2 * math.pi, 25)
    p["fig9a"] = _cfg("fig9a", "add", _SMALL, {"phi": 0.0}, r21, "volume", "delta vs r")
    p["fig9b"] = _cfg("fig9b", "sub", _SMALL, {"phi": 0.0}, r21, "volume", "delta vs r")
    p["fig9c"] = _cfg("fig9c", "add", _SMALL, {"r": 0.3}, phi25, "volume", "delta vs phi")
    p["fig9d"] = _cfg("fig9d", "sub", _SMALL, {"r": 0.3}, phi25, "volume", "delta vs phi")
    return p


PRESETS = _presets()


def expand_preset(name: str) -> list[SweepConfig]:
    """A preset name, or a figure name such as ``fig1`` standing for all its panels."""
    if name in PRESETS:
        return [PRESETS[name]]
    group = [cfg for k, cfg in PRESETS.items()
             if k.startswith(name) and len(k) > len(name)
             and (k[len(name)].isalpha() or k[len(name)] in "_-")]
    if not group:
        raise ValueError(f"unknown preset {name!r}")
    return group

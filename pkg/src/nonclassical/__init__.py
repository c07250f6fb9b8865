"""Nonclassicality of photon-added and photon-subtracted squeezed coherent states.

Closed-form moments, photon-number distributions and Wigner functions, a
truncated Fock-space oracle that checks them, and the witnesses built on top.
"""

from .errors import (
    BoundsError,
    ConvergenceError,
    DegenerateStateError,
    ErratumError,
    NonclassicalError,
    SmallSqueezingError,
    TruncationWarning,
    UndefinedWitnessError,
)
from .moments import MomentTable, diagonal_moment, moment
from .oracle import FockVector, build_state, oracle_moment, oracle_wigner
from .pnd import PhotonNumberDistribution, eta, klyshko, pnd
from .states import Operation, StateSpec, normalization
from .wigner import NonclassicalVolumeResult, WignerGrid, nonclassical_volume, wigner_closed, wigner_grid
from .witnesses import WitnessReport, witness_report

__all__ = [
    "BoundsError", "ConvergenceError", "DegenerateStateError", "ErratumError",
    "NonclassicalError", "SmallSqueezingError", "TruncationWarning", "UndefinedWitnessError",
    "MomentTable", "diagonal_moment", "moment",
    "FockVector", "build_state", "oracle_moment", "oracle_wigner",
    "PhotonNumberDistribution", "eta", "klyshko", "pnd",
    "Operation", "StateSpec", "normalization",
    "NonclassicalVolumeResult", "WignerGrid", "nonclassical_volume", "wigner_closed", "wigner_grid",
    "WitnessReport", "witness_report",
]

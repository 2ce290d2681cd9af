"""Physical parameters, van der Waals shifts, and per-segment Hamiltonians.

The register is a fixed linear chain: for three atoms the two controls sit at
the outer sites and the target at the center, so both control-target pairs
are separated by the lattice spacing L while the control-control pair sits at
2L and feels the 64-fold weaker residue shift.  Atom order in kets and atom
indices is (control 1, control 2, target) for three atoms and
(control, target) for two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import qcore

TWO_PI = 2.0 * math.pi

GROUND_LEVELS = ("g0", "g1")


def vdw_shift(c6_over_2pi: float, distance: float) -> float:
    """Pair shift C6/d^6 as an angular frequency in rad/us.

    ``c6_over_2pi`` is in GHz um^6 (signed), ``distance`` in um.
    """
    if not distance > 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    return TWO_PI * 1e3 * c6_over_2pi / distance**6


@dataclass(frozen=True)
class PhysicalParams:
    """Geometry and atomic constants of the register.

    c6_over_2pi: van der Waals coefficient, GHz um^6 (signed).
    spacing: nearest-neighbour lattice spacing L, um.
    lifetime: Rydberg-state lifetime tau, us.
    n_atoms: register size, 2 or 3.
    """

    c6_over_2pi: float
    spacing: float
    lifetime: float
    n_atoms: int = 3

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")
        if not self.lifetime > 0:
            raise ValueError(f"lifetime must be > 0, got {self.lifetime}")
        if self.n_atoms not in (2, 3):
            raise ValueError(f"n_atoms must be 2 or 3, got {self.n_atoms}")

    @property
    def blockade(self) -> float:
        """Control-target shift V = C6/L^6, rad/us."""
        return vdw_shift(self.c6_over_2pi, self.spacing)

    @property
    def control_residue(self) -> float:
        """Control-control shift V/64, rad/us (zero for a two-atom register)."""
        if self.n_atoms == 2:
            return 0.0
        return vdw_shift(self.c6_over_2pi, 2.0 * self.spacing)

    def with_interaction_scaled(self, factor: float) -> "PhysicalParams":
        """Copy with C6 multiplied by ``factor`` (blockade-limit studies)."""
        return replace(self, c6_over_2pi=self.c6_over_2pi * factor)


def _interaction_pairs(n_atoms: int, cc_interaction: str):
    """(atom_a, atom_b, distance multiple of L) pairs that carry a shift."""
    if cc_interaction not in ("physical", "none"):
        raise ValueError(
            f"cc_interaction must be 'physical' or 'none', got {cc_interaction!r}"
        )
    if n_atoms == 2:
        return ((0, 1, 1.0),)
    pairs = [(0, 2, 1.0), (1, 2, 1.0)]
    if cc_interaction == "physical":
        pairs.append((0, 1, 2.0))
    return tuple(pairs)


def interaction_operator(
    params: PhysicalParams, *, cc_interaction: str = "physical"
) -> np.ndarray:
    """Diagonal operator adding the pair shift for every doubly excited pair."""
    dim = 3**params.n_atoms
    codes = np.array(
        [
            [qcore.LEVEL_CODE[lev] for lev in qcore.levels_from_index(i, params.n_atoms)]
            for i in range(dim)
        ]
    )
    in_r = codes == qcore.LEVEL_CODE["r"]
    diag = np.zeros(dim)
    for atom_a, atom_b, rel_distance in _interaction_pairs(
        params.n_atoms, cc_interaction
    ):
        shift = vdw_shift(params.c6_over_2pi, rel_distance * params.spacing)
        diag[in_r[:, atom_a] & in_r[:, atom_b]] += shift
    return np.diag(diag.astype(complex))


@dataclass(frozen=True)
class Transition:
    """One laser coupling |lower> <-> |r> on one atom.

    ``rabi`` is the complex Rabi amplitude in rad/us; the Hamiltonian
    contribution is (rabi/2)|r><lower| + h.c., so a purely imaginary amplitude
    produces the i*Omega*(|r><lower| - h.c.)/2 coupling.
    """

    atom: int
    lower: str
    rabi: complex

    def __post_init__(self):
        if self.atom < 0:
            raise ValueError(f"atom index must be >= 0, got {self.atom}")
        if self.lower not in GROUND_LEVELS:
            raise ValueError(f"lower level must be one of {GROUND_LEVELS}, got {self.lower!r}")
        rabi = complex(self.rabi)
        if not (math.isfinite(rabi.real) and math.isfinite(rabi.imag)) or rabi == 0:
            raise ValueError(f"rabi must be finite and nonzero, got {self.rabi!r}")
        object.__setattr__(self, "rabi", rabi)


@dataclass(frozen=True)
class PulseSegment:
    """Piecewise-constant drive: a set of transitions held for ``duration`` us."""

    transitions: tuple[Transition, ...]
    duration: float

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if not self.duration > 0 or not math.isfinite(self.duration):
            raise ValueError(f"duration must be finite and > 0, got {self.duration}")
        seen = set()
        for tr in self.transitions:
            key = (tr.atom, tr.lower)
            if key in seen:
                raise ValueError(f"duplicate coupling on atom {tr.atom} level {tr.lower}")
            seen.add(key)


@dataclass(frozen=True)
class GateSchedule:
    """Ordered pulse segments realizing one gate on a fixed register size."""

    segments: tuple[PulseSegment, ...]
    gate_kind: str
    n_atoms: int

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.n_atoms not in (2, 3):
            raise ValueError(f"n_atoms must be 2 or 3, got {self.n_atoms}")
        for segment in self.segments:
            for tr in segment.transitions:
                if tr.atom >= self.n_atoms:
                    raise ValueError(
                        f"transition on atom {tr.atom} exceeds register of {self.n_atoms}"
                    )

    @property
    def total_duration(self) -> float:
        return sum(seg.duration for seg in self.segments)

    @property
    def interior_duration(self) -> float:
        """Duration between the end of the first and start of the last segment."""
        if len(self.segments) < 3:
            return 0.0
        return sum(seg.duration for seg in self.segments[1:-1])


def segment_hamiltonian(
    segment: PulseSegment,
    params: PhysicalParams,
    *,
    cc_interaction: str = "physical",
) -> np.ndarray:
    """Drive terms plus interaction diagonal; Hermitian by construction."""
    n = params.n_atoms
    h = interaction_operator(params, cc_interaction=cc_interaction)
    r_code = qcore.LEVEL_CODE["r"]
    for tr in segment.transitions:
        if tr.atom >= n:
            raise ValueError(f"transition on atom {tr.atom} exceeds register of {n}")
        op = np.zeros((3, 3), dtype=complex)
        op[r_code, qcore.LEVEL_CODE[tr.lower]] = tr.rabi / 2.0
        op[qcore.LEVEL_CODE[tr.lower], r_code] = np.conj(tr.rabi) / 2.0
        h += qcore.embed_operator(op, tr.atom, n)
    return h

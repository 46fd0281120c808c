"""Concrete product-state instances of expanded OPMs."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .opm_model import EntryKind, ExpandedOpm, Opm, expand_stars

TOL = 1e-9
GENERICITY_MARGIN = 0.1

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


class Mode(enum.Enum):
    GENERIC = "generic"
    DEG0 = "deg0"
    DEG1 = "deg1"


@dataclass(frozen=True)
class FamilyParams:
    theta: float
    phi: float = 0.0
    mode: Mode = Mode.GENERIC

    def __post_init__(self) -> None:
        if self.mode is Mode.GENERIC:
            if not 0.0 <= self.theta <= math.pi / 2:
                raise ValueError(f"theta={self.theta} outside [0, pi/2]")
            if min(self.theta, math.pi / 2 - self.theta) < GENERICITY_MARGIN - 1e-15:
                raise ValueError(
                    f"theta={self.theta} within {GENERICITY_MARGIN} rad of the computational basis"
                )

    @classmethod
    def degenerate(cls, which: int) -> FamilyParams:
        if which == 0:
            return cls(0.0, 0.0, Mode.DEG0)
        return cls(math.pi / 2, 0.0, Mode.DEG1)

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(|v>, |v'>)``."""
        theta, phi = self.theta, self.phi
        if self.mode is Mode.DEG0:
            theta, phi = 0.0, 0.0
        elif self.mode is Mode.DEG1:
            theta, phi = math.pi / 2, 0.0
        c, s = math.cos(theta), math.sin(theta)
        v = np.array([c, np.exp(1j * phi) * s], dtype=complex)
        vp = np.array([-np.exp(-1j * phi) * s, c], dtype=complex)
        if self.mode is not Mode.GENERIC:
            # snap exact zeros so degenerate vectors are exactly computational
            v = np.where(np.abs(v) < 1e-15, 0, v)
            vp = np.where(np.abs(vp) < 1e-15, 0, vp)
        return v, vp

    def to_json(self) -> dict:
        return {"theta": self.theta, "phi": self.phi, "mode": self.mode.value}


ParamAssignment = dict[str, FamilyParams]


@dataclass(frozen=True)
class ProductState:
    parts: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def vector(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for p in self.parts:
            out = np.kron(out, p)
        return out


@dataclass
class OpbInstance:
    states: list[ProductState]
    dims: tuple[int, ...]
    name: str = "custom"
    seed: int | None = None
    params: ParamAssignment = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.dims = tuple(int(d) for d in self.dims)
        for s in self.states:
            if s.dims != self.dims:
                raise ValueError(f"state dims {s.dims} do not match instance dims {self.dims}")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def parties(self) -> int:
        return len(self.dims)

    def party_vectors(self, j: int) -> np.ndarray:
        """Stack of party-``j`` vectors, shape ``(len(states), d_j)``."""
        return np.array([s.parts[j] for s in self.states])

    def state_matrix(self) -> np.ndarray:
        """Full tensor-product vectors as columns."""
        return np.array([s.vector() for s in self.states]).T

    def subset(self, indices: Sequence[int]) -> OpbInstance:
        return OpbInstance(
            [self.states[i] for i in indices], self.dims, self.name, self.seed, self.params
        )

    def provenance(self) -> dict:
        return {
            "opm": self.name,
            "seed": self.seed,
            "params": {k: v.to_json() for k, v in sorted(self.params.items())},
        }


def _as_expanded(opm: Opm | ExpandedOpm) -> ExpandedOpm:
    return expand_stars(opm) if isinstance(opm, Opm) else opm


def sample_params(
    opm: Opm | ExpandedOpm,
    seed: int = 1,
    overrides: Mapping[str, FamilyParams] | None = None,
) -> ParamAssignment:
    """Draw a generic ``(theta, phi)`` for every family of ``opm``.

    Theta is uniform on ``[margin, pi/2 - margin]`` and phi uniform on
    ``[0, 2 pi)``; families are visited in order of first appearance so the
    draw is reproducible for a fixed seed.
    """
    exp = _as_expanded(opm)
    rng = np.random.default_rng(seed)
    params: ParamAssignment = {}
    for fam in exp.families:
        theta = rng.uniform(GENERICITY_MARGIN, math.pi / 2 - GENERICITY_MARGIN)
        phi = rng.uniform(0.0, 2 * math.pi)
        params[fam] = FamilyParams(float(theta), float(phi))
    if overrides:
        unknown = set(overrides) - set(params)
        if unknown:
            raise KeyError(f"override for unknown families {sorted(unknown)}")
        params.update(overrides)
    return params


def realize(
    opm: Opm | ExpandedOpm, params: Mapping[str, FamilyParams], *, seed: int | None = None, check: bool = True
) -> OpbInstance:
    exp = _as_expanded(opm)
    missing = [f for f in exp.families if f not in params]
    if missing:
        raise KeyError(f"no parameters for families {missing}")
    cache = {f: params[f].vectors() for f in exp.families}
    states = []
    for row in exp.rows:
        parts = []
        for e in row.entries:
            if e.kind is EntryKind.ZERO:
                parts.append(KET0)
            elif e.kind is EntryKind.ONE:
                parts.append(KET1)
            elif e.kind is EntryKind.VAR:
                parts.append(cache[e.family][1 if e.primed else 0])
            else:
                raise ValueError("cannot realize an unexpanded star")
        states.append(ProductState(tuple(parts)))
    inst = OpbInstance(states, (2,) * exp.parties, exp.name, seed, dict(params))
    if check:
        verdict = verify_opb(inst)
        if not verdict.ok:
            raise ValueError(f"{exp.name} does not realize an OPB: {verdict}")
    return inst


def instance(name_or_opm: str | Opm, seed: int = 1, overrides: Mapping[str, FamilyParams] | None = None) -> OpbInstance:
    """Catalog shortcut: expand, sample generic parameters, realize."""
    from .opm_model import get_opm

    opm = get_opm(name_or_opm) if isinstance(name_or_opm, str) else name_or_opm
    exp = expand_stars(opm)
    return realize(exp, sample_params(exp, seed, overrides), seed=seed)


def gram(inst: OpbInstance) -> np.ndarray:
    """Pairwise inner products ``prod_j <part_{s,j}|part_{t,j}>``."""
    g = np.ones((len(inst), len(inst)), dtype=complex)
    for j in range(inst.parties):
        v = inst.party_vectors(j)
        g *= v.conj() @ v.T
    return g


@dataclass(frozen=True)
class OpbVerdict:
    orthogonal: bool
    complete: bool
    max_offdiag: float
    rank: int
    expected_rank: int

    @property
    def ok(self) -> bool:
        return self.orthogonal and self.complete

    def to_json(self) -> dict:
        return {
            "orthogonal": self.orthogonal,
            "complete": self.complete,
            "max_offdiag": self.max_offdiag,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
        }


def numerical_rank(m: np.ndarray, rel_tol: float = TOL) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv >= rel_tol * sv[0]))


def verify_opb(inst: OpbInstance, tol: float = TOL) -> OpbVerdict:
    g = gram(inst)
    off = np.abs(g - np.diag(np.diag(g)))
    max_off = float(off.max()) if len(inst) > 1 else 0.0
    expected = int(np.prod(inst.dims))
    rank = numerical_rank(inst.state_matrix(), tol)
    return OpbVerdict(
        orthogonal=max_off < tol,
        complete=rank == expected and len(inst) == expected,
        max_offdiag=max_off,
        rank=rank,
        expected_rank=expected,
    )


def _complex_pairs(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in v]


def instance_to_json(inst: OpbInstance) -> dict:
    return {
        "dims": list(inst.dims),
        "states": [[_complex_pairs(p) for p in s.parts] for s in inst.states],
        "provenance": inst.provenance(),
    }


def instance_from_json(data: dict) -> OpbInstance:
    states = [
        ProductState(tuple(np.array([complex(re, im) for re, im in part]) for part in s))
        for s in data["states"]
    ]
    prov = data.get("provenance", {})
    params = {
        k: FamilyParams(v["theta"], v["phi"], Mode(v["mode"]))
        for k, v in prov.get("params", {}).items()
    }
    return OpbInstance(states, tuple(data["dims"]), prov.get("opm", "custom"), prov.get("seed"), params)

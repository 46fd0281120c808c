"""Reducibility, irreducible blocks and the local-distinguishability decision.

A set of product states is reducible on party ``j`` when its party-``j``
vectors fall into groups spanning mutually orthogonal subspaces.  The groups
are the connected components of the graph joining two states whenever their
party-``j`` vectors are *not* orthogonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.stats import unitary_group

from .instantiate import TOL, OpbInstance, ProductState, verify_opb

RAY_TOL = 1e-9
MULTIPLICITY_SAMPLES = 200


@dataclass(frozen=True)
class ReducibilityReport:
    party: int
    reducible: bool
    blocks: tuple[tuple[int, ...], ...]

    @property
    def split_index(self) -> int:
        """Size of the first group."""
        return len(self.blocks[0]) if self.blocks else 0

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(len(b) for b in self.blocks))

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "reducible": self.reducible,
            "blocks": [list(b) for b in self.blocks],
            "split_index": self.split_index,
        }


def _components(vectors: np.ndarray, tol: float) -> list[tuple[int, ...]]:
    overlap = np.abs(vectors.conj() @ vectors.T) >= tol
    n, labels = connected_components(overlap, directed=False)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    # order components by their smallest member so output is deterministic
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def reducibility(
    inst: OpbInstance, party: int, indices: Sequence[int] | None = None, tol: float = TOL
) -> ReducibilityReport:
    """Split the states (or the subset ``indices``) along ``party``.

    Block members are reported as indices into ``inst.states``.
    """
    idx = list(range(len(inst))) if indices is None else list(indices)
    vecs = np.array([inst.states[i].parts[party] for i in idx])
    comps = _components(vecs, tol)
    blocks = tuple(tuple(idx[i] for i in c) for c in comps)
    return ReducibilityReport(party, len(blocks) >= 2, blocks)


def span_basis(vectors: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of the row vectors."""
    if len(vectors) == 0:
        return np.zeros((0, vectors.shape[1] if vectors.ndim == 2 else 0), dtype=complex)
    _, s, vh = np.linalg.svd(vectors)
    rank = int(np.sum(s >= tol * s[0])) if s[0] > 0 else 0
    return vh[:rank]


def span_projector(vectors: np.ndarray, tol: float = TOL) -> np.ndarray:
    basis = span_basis(vectors, tol)
    return basis.T @ basis.conj()


@dataclass
class IrreducibleBlock:
    indices: tuple[int, ...]
    local: OpbInstance
    bases: tuple[np.ndarray, ...]

    @property
    def subdims(self) -> tuple[int, ...]:
        return self.local.dims

    def __len__(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "subdims": list(self.subdims)}


def restrict(inst: OpbInstance, indices: Sequence[int], tol: float = TOL) -> IrreducibleBlock:
    """Express the states ``indices`` in orthonormal coordinates of their per-party spans."""
    bases = []
    for j in range(inst.parties):
        vecs = np.array([inst.states[i].parts[j] for i in indices])
        bases.append(span_basis(vecs, tol))
    states = [
        ProductState(tuple(bases[j].conj() @ inst.states[i].parts[j] for j in range(inst.parties)))
        for i in indices
    ]
    local = OpbInstance(states, tuple(len(b) for b in bases), inst.name, inst.seed, inst.params)
    return IrreducibleBlock(tuple(indices), local, tuple(bases))


def decompose(inst: OpbInstance, tol: float = TOL) -> list[IrreducibleBlock]:
    """Split repeatedly along any reducible party until every block is irreducible."""
    out: list[tuple[int, ...]] = []
    stack = [tuple(range(len(inst)))]
    while stack:
        block = stack.pop()
        for j in range(inst.parties):
            rep = reducibility(inst, j, block, tol)
            if rep.reducible:
                stack.extend(reversed(rep.blocks))
                break
        else:
            out.append(block)
    out.sort(key=lambda b: b[0])
    return [restrict(inst, b, tol) for b in out]


@dataclass(frozen=True)
class MultiplicityVerdict:
    party: int
    applicable: bool
    max_multiplicity: int
    multiplicity_bound: int
    max_orthogonal: int
    orthogonal_bound: int
    samples: int

    @property
    def ok(self) -> bool:
        if not self.applicable:
            return True
        return (
            self.max_multiplicity <= self.multiplicity_bound
            and self.max_orthogonal <= self.orthogonal_bound
        )

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "applicable": self.applicable,
            "ok": self.ok,
            "max_multiplicity": self.max_multiplicity,
            "multiplicity_bound": self.multiplicity_bound,
            "max_orthogonal": self.max_orthogonal,
            "orthogonal_bound": self.orthogonal_bound,
            "samples": self.samples,
        }


def multiplicity_bounds(dims: Sequence[int], party: int) -> tuple[int, int]:
    """Return ``(max ray multiplicity, max count orthogonal to one vector)`` for an irreducible OPB."""
    total = int(np.prod(dims))
    rest = total // dims[party]
    return rest - 1, total - rest - 1


def _random_unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    z = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def multiplicity_check(
    block: IrreducibleBlock | OpbInstance,
    party: int,
    samples: int = MULTIPLICITY_SAMPLES,
    seed: int = 0,
    tol: float = TOL,
) -> MultiplicityVerdict:
    """Check both multiplicity bounds for an irreducible block on one party.

    The orthogonality bound is probed with ``samples`` random unit vectors
    plus every ray that occurs among the party's vectors and their
    orthogonal complements (in two dimensions).  A party whose span is
    one-dimensional has nothing to bound and is reported as not applicable.
    """
    local = block.local if isinstance(block, IrreducibleBlock) else block
    vecs = local.party_vectors(party)
    d = local.dims[party]
    mult_bound, orth_bound = multiplicity_bounds(local.dims, party)
    overlaps = np.abs(vecs.conj() @ vecs.T)
    max_mult = int((overlaps > 1 - RAY_TOL).sum(axis=1).max())

    rng = np.random.default_rng(seed)
    probes = [_random_unit_vectors(rng, samples, d), vecs]
    if d == 2:
        probes.append(np.stack([-vecs[:, 1].conj(), vecs[:, 0].conj()], axis=1))
    alphas = np.concatenate(probes)
    orth_counts = (np.abs(alphas.conj() @ vecs.T) < tol).sum(axis=1)
    return MultiplicityVerdict(
        party=party,
        applicable=d >= 2,
        max_multiplicity=max_mult,
        multiplicity_bound=mult_bound,
        max_orthogonal=int(orth_counts.max()),
        orthogonal_bound=orth_bound,
        samples=len(alphas),
    )


@dataclass(frozen=True)
class EquivalenceTransform:
    """Party ``i`` of the output is ``unitaries[i]`` applied to input party ``perm[i]``."""

    perm: tuple[int, ...]
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.unitaries) != len(self.perm):
            raise ValueError("need one unitary per party")
        for u in self.unitaries:
            u = np.asarray(u)
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise ValueError("unitaries must be square matrices")
            if not np.allclose(u.conj().T @ u, np.eye(len(u)), atol=TOL * 10):
                raise ValueError("matrix is not unitary")

    @classmethod
    def identity(cls, dims: Sequence[int]) -> EquivalenceTransform:
        return cls(tuple(range(len(dims))), tuple(np.eye(d, dtype=complex) for d in dims))

    @classmethod
    def random(cls, dims: Sequence[int], seed: int | np.random.Generator | None = None) -> EquivalenceTransform:
        rng = np.random.default_rng(seed)
        perm = tuple(int(p) for p in rng.permutation(len(dims)))
        us = tuple(unitary_group.rvs(dims[p], random_state=rng) if dims[p] > 1 else np.eye(1, dtype=complex)
                   for p in perm)
        return cls(perm, us)

    def relabel(self, party: int) -> int:
        """Output index of input party ``party``."""
        return self.perm.index(party)


def apply_equivalence(inst: OpbInstance, t: EquivalenceTransform) -> OpbInstance:
    if len(t.perm) != inst.parties:
        raise ValueError(f"transform acts on {len(t.perm)} parties, instance has {inst.parties}")
    for i, p in enumerate(t.perm):
        if len(t.unitaries[i]) != inst.dims[p]:
            raise ValueError(f"unitary {i} has size {len(t.unitaries[i])}, party {p} has dim {inst.dims[p]}")
    states = [
        ProductState(tuple(np.asarray(t.unitaries[i]) @ s.parts[p] for i, p in enumerate(t.perm)))
        for s in inst.states
    ]
    dims = tuple(inst.dims[p] for p in t.perm)
    return OpbInstance(states, dims, inst.name, inst.seed, inst.params)


# -- recursive reducibility certificates -------------------------------------


@dataclass(frozen=True)
class CertLeaf:
    index: int

    def depth(self) -> int:
        return 0

    def to_json(self) -> dict:
        return {"leaf": self.index}


@dataclass(frozen=True)
class CertSplit:
    """Party ``party`` projects onto the spans of ``groups``; one child per group."""

    party: int
    groups: tuple[tuple[int, ...], ...]
    projectors: tuple[np.ndarray, ...]
    children: tuple[Certificate, ...]

    def depth(self) -> int:
        return 1 + max(c.depth() for c in self.children)

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "groups": [list(g) for g in self.groups],
            "children": [c.to_json() for c in self.children],
        }


Certificate = Union[CertLeaf, CertSplit]


def _split_projectors(inst: OpbInstance, party: int, groups, tol: float) -> tuple[np.ndarray, ...]:
    d = inst.dims[party]
    projs = [span_projector(np.array([inst.states[i].parts[party] for i in g]), tol) for g in groups]
    # the part of the party space no state reaches goes to the last outcome
    projs[-1] = projs[-1] + (np.eye(d) - sum(projs))
    return tuple(projs)


def certify(
    inst: OpbInstance, indices: Sequence[int] | None = None, tol: float = TOL
) -> Certificate | None:
    """Search for a recursive-reducibility certificate, or return ``None``.

    Every party that splits a block is tried in turn, so the search fails only
    when some branch is stuck at an irreducible block of two or more states.
    """
    memo: dict[tuple[int, ...], Certificate | None] = {}

    def go(block: tuple[int, ...]) -> Certificate | None:
        if block in memo:
            return memo[block]
        if len(block) == 1:
            memo[block] = CertLeaf(block[0])
            return memo[block]
        result = None
        for j in range(inst.parties):
            rep = reducibility(inst, j, block, tol)
            if not rep.reducible:
                continue
            children = []
            for b in rep.blocks:
                c = go(b)
                if c is None:
                    break
                children.append(c)
            else:
                result = CertSplit(j, rep.blocks, _split_projectors(inst, j, rep.blocks, tol), tuple(children))
                break
        memo[block] = result
        return result

    start = tuple(range(len(inst))) if indices is None else tuple(indices)
    return go(start)


@dataclass
class DistinguishabilityVerdict:
    distinguishable: bool | None
    reason: str
    certificate: Certificate | None = None
    blocks: tuple[tuple[int, ...], ...] = ()
    first_round: object | None = None
    trivial_block: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        return {True: "distinguishable", False: "indistinguishable", None: "unknown"}[self.distinguishable]

    def to_json(self) -> dict:
        return {
            "distinguishable": self.distinguishable,
            "label": self.label,
            "reason": self.reason,
            "block_sizes": sorted(len(b) for b in self.blocks),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "certificate_depth": None if self.certificate is None else self.certificate.depth(),
            "first_round": None if self.first_round is None else self.first_round.to_json(),
            "trivial_block": None if self.trivial_block is None else list(self.trivial_block),
        }


def decide_local_distinguishability(inst: OpbInstance, tol: float = TOL) -> DistinguishabilityVerdict:
    """Decide local distinguishability without entanglement.

    * ``True``: the states are recursively reducible; the certificate is a
      projective LOCC protocol.
    * ``False``: on every party only scalar first-round measurements keep
      the states pairwise orthogonal, either for the whole set or for one of
      its irreducible blocks (a subset of a distinguishable set is itself
      distinguishable).
    * ``None``: neither argument applies.
    """
    from .locc import first_round_triviality

    cert = certify(inst, tol=tol)
    blocks = tuple(b.indices for b in decompose(inst, tol))
    if cert is not None:
        return DistinguishabilityVerdict(True, "recursive reducibility", cert, blocks)
    frt = first_round_triviality(inst, tol=tol)
    if frt.all_trivial:
        return DistinguishabilityVerdict(
            False, "first-round triviality on every party", None, blocks, frt
        )
    for blk in blocks:
        if len(blk) < 2:
            continue
        sub = first_round_triviality(restrict(inst, blk, tol).local, tol=tol)
        if sub.all_trivial:
            return DistinguishabilityVerdict(
                False, "first-round triviality on an irreducible block", None, blocks, frt, blk
            )
    return DistinguishabilityVerdict(None, "not recursively reducible; nontrivial first round", None, blocks, frt)


def block_size_profile(inst: OpbInstance, tol: float = TOL) -> dict[int, tuple[int, ...]]:
    """Per-party block-size multisets of the top-level reducibility split."""
    return {j: reducibility(inst, j, tol=tol).block_sizes for j in range(inst.parties)}


def decomposition_profile(inst: OpbInstance, tol: float = TOL) -> tuple[int, ...]:
    return tuple(sorted(len(b) for b in decompose(inst, tol)))


def blocks_pairwise_orthogonal(inst: OpbInstance, blocks: Sequence[IrreducibleBlock], tol: float = TOL) -> bool:
    from .instantiate import gram

    g = np.abs(gram(inst))
    for a, b in itertools.combinations(blocks, 2):
        if g[np.ix_(a.indices, b.indices)].max() >= tol:
            return False
    return True


def check_block(block: IrreducibleBlock, tol: float = TOL) -> bool:
    """Restricted block is an OPB of its own product subspace."""
    return verify_opb(block.local, tol).ok


__all__ = [
    "ReducibilityReport",
    "IrreducibleBlock",
    "MultiplicityVerdict",
    "EquivalenceTransform",
    "CertLeaf",
    "CertSplit",
    "Certificate",
    "DistinguishabilityVerdict",
    "reducibility",
    "decompose",
    "restrict",
    "multiplicity_check",
    "multiplicity_bounds",
    "apply_equivalence",
    "certify",
    "decide_local_distinguishability",
    "block_size_profile",
    "decomposition_profile",
    "blocks_pairwise_orthogonal",
    "check_block",
    "span_basis",
    "span_projector",
]

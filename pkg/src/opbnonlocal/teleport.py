"""Teleportation-assisted discrimination.

Teleporting one party's qubit to another party costs one ebit and regroups
two tensor factors into a single higher-dimensional system.  The channel is
ideal, so a merge is a relabeling plus a ledger entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .instantiate import TOL, OpbInstance, ProductState, verify_opb
from .locc import Measure, ProtocolNode, SimulationResult, build_protocol_from_certificate, simulate
from .structure import certify

MAX_MERGED_DIM = 64


@dataclass(frozen=True)
class MergePlan:
    """Merges in application order.  Each pair names original parties."""

    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def ebit_cost(self) -> int:
        return len(self.pairs)

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "cost": self.ebit_cost}


@dataclass
class MergedInstance:
    inst: OpbInstance
    ledger: int
    original: OpbInstance
    plan: MergePlan = field(default_factory=MergePlan)
    # original party indices held by each current party
    groups: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def unmerged(cls, inst: OpbInstance) -> MergedInstance:
        return cls(inst, 0, inst, MergePlan(), tuple((j,) for j in range(inst.parties)))

    def to_json(self) -> dict:
        return {
            "dims": list(self.inst.dims),
            "ledger": self.ledger,
            "plan": self.plan.to_json(),
            "groups": [list(g) for g in self.groups],
        }


def merge(inst: OpbInstance | MergedInstance, j: int, k: int) -> MergedInstance:
    """Teleport party ``k`` to party ``j``.

    The merged part is ``part_j (x) part_k`` (row-major, ``|q_j q_k>`` has
    index ``d_k * q_j + q_k``) and sits at position ``min(j, k)``.
    """
    prev = inst if isinstance(inst, MergedInstance) else MergedInstance.unmerged(inst)
    cur = prev.inst
    if j == k:
        raise ValueError("cannot merge a party with itself")
    for p in (j, k):
        if not 0 <= p < cur.parties:
            raise ValueError(f"party {p} out of range for {cur.parties} parties")
    dim = cur.dims[j] * cur.dims[k]
    if dim > MAX_MERGED_DIM:
        raise ValueError(f"merged dimension {dim} exceeds {MAX_MERGED_DIM}")
    pos, drop = min(j, k), max(j, k)

    def regroup(seq, joined):
        out = list(seq)
        out[pos] = joined
        del out[drop]
        return tuple(out)

    states = [ProductState(regroup(s.parts, np.kron(s.parts[j], s.parts[k]))) for s in cur.states]
    dims = regroup(cur.dims, dim)
    merged = OpbInstance(states, dims, cur.name, cur.seed, cur.params)
    groups = regroup(prev.groups, prev.groups[j] + prev.groups[k])
    pair = (prev.groups[j][0], prev.groups[k][0])
    return MergedInstance(merged, prev.ledger + 1, prev.original, MergePlan(prev.plan.pairs + (pair,)), groups)


def merge_groups(inst: OpbInstance, groups: Sequence[Sequence[int]]) -> MergedInstance:
    """Merge each group of original parties into one party (ascending order inside a group)."""
    m = MergedInstance.unmerged(inst)
    for group in groups:
        group = sorted(group)
        for other in group[1:]:
            j = next(i for i, g in enumerate(m.groups) if group[0] in g)
            k = next(i for i, g in enumerate(m.groups) if other in g)
            m = merge(m, j, k)
    return m


@dataclass
class MergedDiscrimination:
    merged: MergedInstance
    distinguishable: bool
    protocol: ProtocolNode | None
    simulation: SimulationResult | None
    reason: str

    @property
    def ebit_cost(self) -> int:
        return self.merged.ledger

    @property
    def perfect(self) -> bool:
        return self.simulation is not None and self.simulation.perfect

    def to_json(self, transcripts: bool = False) -> dict:
        sim = None
        if self.simulation is not None:
            sim = self.simulation.to_json() if transcripts else {
                "perfect": self.simulation.perfect,
                "worst_success": self.simulation.worst_success,
            }
        return {
            "distinguishable": self.distinguishable,
            "reason": self.reason,
            "ebit_cost": self.ebit_cost,
            "merged": self.merged.to_json(),
            "simulation": sim,
        }


def _certified(m: MergedInstance, tol: float) -> MergedDiscrimination:
    cert = certify(m.inst, tol=tol)
    if cert is None:
        return MergedDiscrimination(m, False, None, None, "not recursively reducible")
    proto = build_protocol_from_certificate(cert)
    return MergedDiscrimination(m, True, proto, simulate(m.inst, proto, tol), "recursive reducibility")


def distinguish_merged_3qubit(inst: OpbInstance, tol: float = TOL) -> MergedDiscrimination:
    """Discriminate a three-qubit OPB, teleporting C to B only when needed."""
    if inst.parties != 3:
        raise ValueError("expects a three-party instance")
    plain = _certified(MergedInstance.unmerged(inst), tol)
    if plain.distinguishable:
        return plain
    return _certified(merge(inst, 1, 2), tol)


_KET10 = np.array([0, 0, 1, 0], dtype=complex)


def distinguish_merged_M49(inst: OpbInstance, tol: float = TOL) -> MergedDiscrimination:
    """Protocol for the M49 family (also M410, M411, M412) after teleporting B to A.

    The merged AB system measures ``{|10><10|, I - |10><10|}``.  The first
    outcome leaves four states told apart by C and D; on the second, C
    measures computationally, leaving two sets of six tripartite states
    that are recursively reducible.
    """
    if inst.dims != (2, 2, 2, 2):
        raise ValueError("expects a four-qubit instance")
    m = merge(inst, 0, 1)
    cur = m.inst
    overlap = np.abs(cur.party_vectors(0) @ _KET10.conj())
    hit = [i for i in range(len(cur)) if overlap[i] > 1 - tol]
    miss = [i for i in range(len(cur)) if overlap[i] < tol]
    if len(hit) != 4 or len(miss) != 12:
        raise ValueError("instance is not of the M49-M412 form: |10> on AB must isolate 4 states")
    c_vecs = cur.party_vectors(1)
    c0 = [i for i in miss if abs(c_vecs[i][0]) > 1 - tol]
    c1 = [i for i in miss if abs(c_vecs[i][1]) > 1 - tol]
    if len(c0) != 6 or len(c1) != 6:
        raise ValueError("instance is not of the M49-M412 form: C must split the remaining states 6/6")

    subtrees = []
    for group in (hit, c0, c1):
        cert = certify(cur, group, tol)
        if cert is None:
            raise ValueError(f"states {group} are not recursively reducible")
        subtrees.append(build_protocol_from_certificate(cert))
    p10 = np.outer(_KET10, _KET10.conj())
    charlie = Measure.projective(1, [np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)], subtrees[1:])
    root = Measure.projective(0, [p10, np.eye(4) - p10], [subtrees[0], charlie])
    sim = simulate(cur, root, tol)
    return MergedDiscrimination(m, sim.perfect, root, sim, "merged AB protocol: {|10><10|, I-|10><10|}, then C computational")


def _set_partitions(items: Sequence[int]):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def merge_plans(parties: int, max_cost: int = 2) -> list[tuple[tuple[int, ...], ...]]:
    """Party groupings ordered by ebit cost, then lexicographically."""
    plans = set()
    for part in _set_partitions(range(parties)):
        groups = tuple(sorted(tuple(sorted(g)) for g in part if len(g) > 1))
        cost = sum(len(g) - 1 for g in groups)
        if cost <= max_cost:
            plans.add(groups)
    return sorted(plans, key=lambda g: (sum(len(x) - 1 for x in g), g))


@dataclass
class SweepReport:
    cost: int | None
    groups: tuple[tuple[int, ...], ...] | None
    result: MergedDiscrimination | None
    tried: list[dict]
    # every certified grouping at the minimal cost, first one is ``groups``
    minimal: list[tuple[tuple[int, ...], ...]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.cost is not None

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "cost": self.cost,
            "groups": None if self.groups is None else [list(g) for g in self.groups],
            "plan": None if self.result is None else self.result.merged.plan.to_json(),
            "dims": None if self.result is None else list(self.result.merged.inst.dims),
            "perfect": None if self.result is None else self.result.perfect,
            "minimal_groups": [[list(g) for g in gs] for gs in self.minimal],
            "tried": self.tried,
        }


def ebit_sweep(inst: OpbInstance, max_cost: int = 2, tol: float = TOL) -> SweepReport:
    """Cheapest merge plan (up to ``max_cost`` ebits) whose result is recursively reducible.

    Merging all but one qubit into a single party leaves a ``2 x d`` OPB,
    which is always reducible, so a cost of ``parties - 2`` always succeeds.
    """
    if inst.parties > 4:
        raise ValueError("sweep supports at most four parties")
    tried = []
    best: SweepReport | None = None
    for groups in merge_plans(inst.parties, max_cost):
        m = merge_groups(inst, groups)
        if best is not None and m.ledger > best.cost:
            break
        res = _certified(m, tol)
        tried.append({"groups": [list(g) for g in groups], "cost": m.ledger, "certified": res.distinguishable})
        if not (res.distinguishable and res.perfect):
            continue
        if best is None:
            best = SweepReport(m.ledger, groups, res, tried)
        best.minimal.append(groups)
    return best if best is not None else SweepReport(None, None, None, tried)


def verify_merge(before: OpbInstance, after: MergedInstance, tol: float = 1e-12) -> bool:
    """Gram magnitudes agree and the merged set is still an OPB."""
    from .instantiate import gram

    same = np.abs(np.abs(gram(before)) - np.abs(gram(after.inst))).max() < tol
    return bool(same and verify_opb(after.inst).ok)


__all__ = [
    "MergePlan",
    "MergedInstance",
    "MergedDiscrimination",
    "SweepReport",
    "merge",
    "merge_groups",
    "merge_plans",
    "distinguish_merged_3qubit",
    "distinguish_merged_M49",
    "ebit_sweep",
    "verify_merge",
]

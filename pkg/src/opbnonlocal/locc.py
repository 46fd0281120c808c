"""LOCC protocol trees, their simulation, and the non-disturbing measurement solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .instantiate import TOL, OpbInstance
from .structure import CertLeaf, CertSplit, Certificate

NULL_TOL = 1e-7


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Povm:
    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(np.asarray(e, dtype=complex) for e in self.elements))
        self.validate()

    @property
    def dim(self) -> int:
        return len(self.elements[0])

    def validate(self, tol: float = TOL) -> None:
        if not self.elements:
            raise ProtocolError("POVM without elements")
        d = self.dim
        for e in self.elements:
            if e.shape != (d, d):
                raise ProtocolError(f"POVM element of shape {e.shape}, expected {(d, d)}")
            if not np.allclose(e, e.conj().T, atol=tol):
                raise ProtocolError("POVM element is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -tol:
                raise ProtocolError("POVM element is not positive semidefinite")
        if not np.allclose(sum(self.elements), np.eye(d), atol=tol):
            raise ProtocolError("POVM elements do not sum to the identity")

    @classmethod
    def computational(cls, d: int = 2) -> Povm:
        return cls(tuple(np.diag(np.eye(d)[k]).astype(complex) for k in range(d)))

    @classmethod
    def from_vectors(cls, vectors: Sequence[np.ndarray]) -> Povm:
        """Rank-one projective measurement onto an orthonormal basis."""
        return cls(tuple(np.outer(v, v.conj()) for v in vectors))


@dataclass(frozen=True)
class Leaf:
    label: int | None

    def to_json(self) -> dict:
        return {"leaf": self.label}

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Measure:
    party: int
    povm: Povm
    kraus: tuple[np.ndarray, ...]
    children: tuple[ProtocolNode, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kraus", tuple(np.asarray(k, dtype=complex) for k in self.kraus))
        object.__setattr__(self, "children", tuple(self.children))
        if not (len(self.kraus) == len(self.children) == len(self.povm.elements)):
            raise ProtocolError("need one Kraus operator and one child per POVM element")
        for k, e in zip(self.kraus, self.povm.elements):
            if not np.allclose(k.conj().T @ k, e, atol=TOL):
                raise ProtocolError("Kraus operator does not match its POVM element")

    @classmethod
    def projective(cls, party: int, projectors: Sequence[np.ndarray], children: Sequence[ProtocolNode]) -> Measure:
        povm = Povm(tuple(projectors))
        return cls(party, povm, povm.elements, tuple(children))

    def depth(self) -> int:
        return 1 + max(c.depth() for c in self.children)

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "povm": [_matrix_json(e) for e in self.povm.elements],
            "kraus": [_matrix_json(k) for k in self.kraus],
            "children": [c.to_json() for c in self.children],
        }


ProtocolNode = Union[Leaf, Measure]


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _matrix_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def protocol_from_json(data: dict) -> ProtocolNode:
    if "leaf" in data:
        return Leaf(data["leaf"])
    povm = Povm(tuple(_matrix_from_json(e) for e in data["povm"]))
    kraus = tuple(_matrix_from_json(k) for k in data.get("kraus", data["povm"]))
    return Measure(int(data["party"]), povm, kraus, tuple(protocol_from_json(c) for c in data["children"]))


# -- simulation ---------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    path: tuple[tuple[int, int], ...]
    probability: float
    leaf: int | None


@dataclass
class StateTranscript:
    index: int
    branches: list[Branch]

    @property
    def success(self) -> float:
        return sum(b.probability for b in self.branches if b.leaf == self.index)

    @property
    def total(self) -> float:
        return sum(b.probability for b in self.branches)

    def to_json(self) -> dict:
        return {
            "state": self.index,
            "success": self.success,
            "branches": [
                {"path": [list(p) for p in b.path], "probability": b.probability, "leaf": b.leaf}
                for b in self.branches
            ],
        }


@dataclass
class SimulationResult:
    transcripts: list[StateTranscript]
    tol: float = TOL

    @property
    def worst_success(self) -> float:
        return min(t.success for t in self.transcripts)

    @property
    def perfect(self) -> bool:
        return self.worst_success >= 1 - self.tol

    def to_json(self) -> dict:
        return {
            "perfect": self.perfect,
            "worst_success": self.worst_success,
            "transcripts": [t.to_json() for t in self.transcripts],
        }


def simulate(inst: OpbInstance, root: ProtocolNode, tol: float = TOL) -> SimulationResult:
    """Run every state of ``inst`` through the protocol tree.

    Branch probabilities below ``tol**2`` are pruned.  Reaching an unlabeled
    leaf with probability at least ``tol`` is an error.
    """
    transcripts = []
    for idx, state in enumerate(inst.states):
        branches: list[Branch] = []
        _walk(root, list(state.parts), 1.0, (), idx, inst.dims, branches, tol)
        transcripts.append(StateTranscript(idx, branches))
    return SimulationResult(transcripts, tol)


def _walk(node, parts, prob, path, idx, dims, out, tol):
    if isinstance(node, Leaf):
        if node.label is None and prob >= tol:
            raise ProtocolError(f"state {idx} reaches an unlabeled leaf with probability {prob:.3g}")
        out.append(Branch(path, prob, node.label))
        return
    j = node.party
    if j >= len(dims) or node.povm.dim != dims[j]:
        raise ProtocolError(f"measurement on party {j} does not match instance dims {dims}")
    for k, (kraus, child) in enumerate(zip(node.kraus, node.children)):
        v = kraus @ parts[j]
        p = float(np.vdot(v, v).real)
        if prob * p < tol * tol:
            continue
        new_parts = list(parts)
        new_parts[j] = v / np.sqrt(p)
        _walk(child, new_parts, prob * p, path + ((j, k),), idx, dims, out, tol)


# -- explicit protocols -------------------------------------------------------


def build_protocol_theorem1(inst: OpbInstance, tol: float = TOL) -> ProtocolNode:
    """Two-qubit protocol: Alice measures her basis, then Bob measures the pair matching her outcome.

    ``inst`` must have the two-qubit form ``{|u,b>, |u,b'>, |u',c>, |u',c'>}``
    with ``u`` orthogonal to ``u'`` (the computational basis for M2 itself).
    """
    if inst.dims != (2, 2) or len(inst) != 4:
        raise ProtocolError("expects a two-qubit instance of four states")
    alice = inst.party_vectors(0)
    ov = np.abs(alice.conj() @ alice.T)
    first = [t for t in range(4) if ov[0, t] > 1 - tol]
    second = [t for t in range(4) if ov[0, t] < tol]
    if len(first) != 2 or len(second) != 2 or not all(ov[second[0], t] > 1 - tol for t in second):
        raise ProtocolError("instance is not of the M2 form on Alice's side")
    children = []
    for group in (first, second):
        bob = [inst.states[t].parts[1] for t in group]
        if abs(np.vdot(bob[0], bob[1])) >= tol:
            raise ProtocolError("Bob's vectors within an Alice branch are not orthogonal")
        children.append(Measure.projective(1, [np.outer(v, v.conj()) for v in bob], [Leaf(t) for t in group]))
    pa = [np.outer(alice[first[0]], alice[first[0]].conj()), np.outer(alice[second[0]], alice[second[0]].conj())]
    return Measure.projective(0, pa, children)


def build_protocol_from_certificate(cert: Certificate) -> ProtocolNode:
    """Turn a recursive-reducibility certificate into projective measurements."""
    if isinstance(cert, CertLeaf):
        return Leaf(cert.index)
    if not isinstance(cert, CertSplit) or len(cert.children) != len(cert.projectors) or len(cert.children) < 2:
        raise ProtocolError("malformed certificate")
    return Measure.projective(
        cert.party, cert.projectors, [build_protocol_from_certificate(c) for c in cert.children]
    )


def computational_protocol(dims: Sequence[int], party: int = 0, prefix: tuple[int, ...] = ()) -> ProtocolNode:
    """Measure every party in the computational basis in order; leaves claim the row-major index."""
    if party == len(dims):
        idx = 0
        for d, k in zip(dims, prefix):
            idx = idx * d + k
        return Leaf(idx)
    d = dims[party]
    povm = Povm.computational(d)
    return Measure(
        party, povm, povm.elements,
        tuple(computational_protocol(dims, party + 1, prefix + (k,)) for k in range(d)),
    )


# -- non-disturbing measurements ---------------------------------------------


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Real basis of the d x d Hermitian matrices (d**2 elements)."""
    out = []
    for i in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1
        out.append(m)
    for i in range(d):
        for k in range(i + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[i, k] = m[k, i] = 1
            out.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[i, k], m[k, i] = -1j, 1j
            out.append(m)
    return out


@dataclass
class NondisturbingSolution:
    party: int
    basis: list[np.ndarray]
    constraints: int
    trivial_only: bool = field(default=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "dimension": self.dimension,
            "constraints": self.constraints,
            "trivial_only": self.trivial_only,
        }


def _is_scalar(m: np.ndarray, tol: float) -> bool:
    tr = np.trace(m)
    if abs(tr) < tol:
        return False
    normalized = m * (len(m) / tr)
    return bool(np.abs(normalized - np.eye(len(m))).max() < tol)


def nondisturbing_space(
    inst: OpbInstance, party: int, tol: float = TOL, null_tol: float = NULL_TOL
) -> NondisturbingSolution:
    """Hermitian ``E`` on ``party`` that keep all post-measurement states pairwise orthogonal.

    For every pair of states whose other parties are not orthogonal, the
    requirement is ``<a_s|E|a_t> = 0`` on this party's vectors.  Each such
    complex equation contributes two real rows; the solution space is the
    numerical null space.
    """
    d = inst.dims[party]
    vecs = inst.party_vectors(party)
    others = np.ones((len(inst), len(inst)), dtype=complex)
    for i in range(inst.parties):
        if i != party:
            v = inst.party_vectors(i)
            others *= v.conj() @ v.T
    herm = hermitian_basis(d)
    rows = []
    s_idx, t_idx = np.triu_indices(len(inst), k=1)
    for s, t in zip(s_idx, t_idx):
        if abs(others[s, t]) < tol:
            continue
        coeffs = np.array([np.vdot(vecs[s], h @ vecs[t]) for h in herm])
        rows.append(coeffs.real)
        rows.append(coeffs.imag)
    n_constraints = len(rows) // 2
    if rows:
        a = np.array(rows)
        _, sv, vh = np.linalg.svd(a)
        cutoff = null_tol * sv[0] if sv[0] > 0 else np.inf
        rank = int(np.sum(sv >= cutoff))
        null = vh[rank:]
    else:
        null = np.eye(len(herm))
    basis = [sum(c * h for c, h in zip(vec, herm)) for vec in null]
    trivial = len(basis) == 1 and _is_scalar(basis[0], null_tol)
    return NondisturbingSolution(party, basis, n_constraints, trivial)


@dataclass
class FirstRoundVerdict:
    per_party: list[NondisturbingSolution]

    @property
    def all_trivial(self) -> bool:
        return all(s.trivial_only for s in self.per_party)

    @property
    def justification(self) -> str | None:
        if self.all_trivial:
            return "first-round triviality: only scalar POVM elements preserve orthogonality on every party"
        return None

    def to_json(self) -> dict:
        return {
            "all_trivial": self.all_trivial,
            "justification": self.justification,
            "per_party": [s.to_json() for s in self.per_party],
        }


def first_round_triviality(inst: OpbInstance, tol: float = TOL) -> FirstRoundVerdict:
    return FirstRoundVerdict([nondisturbing_space(inst, j, tol) for j in range(inst.parties)])


__all__ = [
    "Povm",
    "Leaf",
    "Measure",
    "ProtocolNode",
    "ProtocolError",
    "SimulationResult",
    "StateTranscript",
    "Branch",
    "NondisturbingSolution",
    "FirstRoundVerdict",
    "simulate",
    "build_protocol_theorem1",
    "build_protocol_from_certificate",
    "computational_protocol",
    "nondisturbing_space",
    "first_round_triviality",
    "hermitian_basis",
    "protocol_from_json",
]

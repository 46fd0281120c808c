import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from opbnonlocal.instantiate import FamilyParams, instance, realize
from opbnonlocal.locc import (
    Leaf,
    Measure,
    Povm,
    ProtocolError,
    build_protocol_from_certificate,
    build_protocol_theorem1,
    computational_protocol,
    first_round_triviality,
    hermitian_basis,
    nondisturbing_space,
    protocol_from_json,
    simulate,
)
from opbnonlocal.opm_model import catalog, expand_stars, parse_opm
from opbnonlocal.structure import (
    EquivalenceTransform,
    apply_equivalence,
    certify,
    decide_local_distinguishability,
)

from conftest import cached_instance


def trivial(n):
    text = "\n".join(" ".join(f"{i:0{n}b}") for i in range(2**n))
    return realize(expand_stars(parse_opm(text)), {})


def test_povm_validation():
    Povm.computational(2)
    with pytest.raises(ProtocolError):
        Povm((np.diag([1, 0]),))
    with pytest.raises(ProtocolError):
        Povm((np.diag([1.5, 1]), np.diag([-0.5, 0])))
    with pytest.raises(ProtocolError):
        Povm((np.array([[0.5, 0.5j], [0.5j, 0.5]]), np.array([[0.5, -0.5j], [-0.5j, 0.5]])))


def test_kraus_must_match():
    povm = Povm.computational(2)
    with pytest.raises(ProtocolError):
        Measure(0, povm, (np.eye(2), np.eye(2)), (Leaf(0), Leaf(1)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trivial_computational_protocol(n):
    res = simulate(trivial(n), computational_protocol((2,) * n))
    assert res.perfect
    assert res.worst_success == pytest.approx(1.0, abs=1e-12)


def test_simulate_wrong_dims():
    with pytest.raises(ProtocolError):
        simulate(trivial(2), computational_protocol((4,)))


def test_simulate_unlabeled_leaf():
    proto = Measure.projective(0, Povm.computational(2).elements, (Leaf(None), Leaf(None)))
    with pytest.raises(ProtocolError):
        simulate(trivial(2), proto)


def test_imperfect_protocol_reports_failure():
    # Only Alice measures; Bob's bit is guessed.
    proto = Measure.projective(0, Povm.computational(2).elements, (Leaf(0), Leaf(2)))
    res = simulate(trivial(2), proto)
    assert not res.perfect
    assert res.worst_success == 0.0


def test_two_qubit_protocol_m2():
    inst = cached_instance("M2", 1)
    proto = build_protocol_theorem1(inst)
    assert proto.depth() == 2
    res = simulate(inst, proto)
    assert res.perfect and res.worst_success >= 1 - 1e-9


def test_two_qubit_protocol_degenerate():
    inst = instance("M2", 4, {"b": FamilyParams.degenerate(0)})
    assert simulate(inst, build_protocol_theorem1(inst)).perfect


def test_two_qubit_protocol_many_seeds():
    for seed in range(100):
        inst = instance("M2", seed)
        assert simulate(inst, build_protocol_theorem1(inst)).perfect


def test_two_qubit_protocol_after_local_unitary_on_alice():
    inst = cached_instance("M2", 3)
    u = unitary_group.rvs(2, random_state=11)
    t = EquivalenceTransform((0, 1), (u, np.eye(2)))
    out = apply_equivalence(inst, t)
    assert simulate(out, build_protocol_theorem1(out)).perfect


def test_two_qubit_rejects_other_families():
    with pytest.raises(ProtocolError):
        build_protocol_theorem1(cached_instance("M31", 1))
    with pytest.raises(ProtocolError):
        build_protocol_theorem1(apply_equivalence(cached_instance("M2", 1), EquivalenceTransform((1, 0), (np.eye(2), np.eye(2)))))


def test_certificate_protocol_m41():
    inst = cached_instance("M41", 1)
    proto = build_protocol_from_certificate(certify(inst))
    assert proto.depth() == 4
    assert simulate(inst, proto).perfect


def test_certificate_protocol_m32():
    inst = cached_instance("M32", 2)
    assert simulate(inst, build_protocol_from_certificate(certify(inst))).perfect


def test_certificate_protocol_trivial():
    proto = build_protocol_from_certificate(certify(trivial(3)))
    assert proto.depth() == 3
    assert simulate(trivial(3), proto).perfect


def test_malformed_certificate():
    with pytest.raises(ProtocolError):
        build_protocol_from_certificate("not a certificate")


def test_protocol_json_round_trip():
    inst = cached_instance("M33", 1)
    proto = build_protocol_from_certificate(certify(inst))
    back = protocol_from_json(json.loads(json.dumps(proto.to_json())))
    assert simulate(inst, back).perfect


@pytest.mark.parametrize("name", ["M2", "M32", "M41", "M45", "M47", "M433"])
def test_probability_conserved(name):
    inst = cached_instance(name, 1)
    proto = computational_protocol(inst.dims)
    for t in simulate(inst, proto).transcripts:
        assert t.total == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_random_povm_conserves_probability(seed):
    """A non-projective POVM on Alice followed by computational measurements."""
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 0.9)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    e0 = w * np.outer(v, v.conj())
    e1 = np.eye(2) - e0
    k0 = np.sqrt(w) * np.outer(v, v.conj())
    vals, vecs = np.linalg.eigh(e1)
    k1 = vecs @ np.diag(np.sqrt(vals)) @ vecs.conj().T
    rest = computational_protocol((2, 2, 2))
    proto = Measure(0, Povm((e0, e1)), (k0, k1), (rest, rest))
    inst = instance("M31", seed)
    for t in simulate(inst, proto).transcripts:
        assert t.total == pytest.approx(1.0, abs=1e-9)


def test_hermitian_basis_spans():
    basis = hermitian_basis(3)
    assert len(basis) == 9
    flat = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis])
    assert np.linalg.matrix_rank(flat) == 9
    for b in basis:
        np.testing.assert_allclose(b, b.conj().T)


def preserves_orthogonality(inst, party, e, tol=1e-7):
    """Oracle: the post-measurement Gram entries vanish for every pair of states."""
    n = len(inst)
    for s, t in itertools.combinations(range(n), 2):
        val = np.vdot(inst.states[s].parts[party], e @ inst.states[t].parts[party])
        for i in range(inst.parties):
            if i != party:
                val *= np.vdot(inst.states[s].parts[i], inst.states[t].parts[i])
        if abs(val) > tol:
            return False
    return True


@pytest.mark.parametrize("party", [0, 1, 2])
def test_nondisturbing_m31_trivial(party):
    sol = nondisturbing_space(cached_instance("M31", 1), party)
    assert sol.trivial_only
    assert sol.dimension == 1


def test_nondisturbing_trivial_two_qubit():
    # Hand solution: pairs (00,10) and (01,11) force <0|E|1> = 0; E is any diagonal matrix.
    sol = nondisturbing_space(trivial(2), 0)
    assert sol.dimension == 2
    assert not sol.trivial_only
    for e in sol.basis:
        assert abs(e[0, 1]) < 1e-12


@pytest.mark.parametrize("name", ["M2", "M31", "M32", "M41", "M47", "M49", "M428"])
def test_nondisturbing_solutions_checked_by_oracle(name):
    inst = cached_instance(name, 1)
    for j in range(inst.parties):
        sol = nondisturbing_space(inst, j)
        assert sol.dimension >= 1
        assert preserves_orthogonality(inst, j, np.eye(inst.dims[j]))
        for e in sol.basis:
            np.testing.assert_allclose(e, e.conj().T, atol=1e-12)
            assert preserves_orthogonality(inst, j, e)


def test_nondisturbing_rejects_non_solutions():
    """A diagonal non-scalar E disturbs M31 on Alice's side."""
    inst = cached_instance("M31", 1)
    assert not preserves_orthogonality(inst, 0, np.diag([1.0, 0.3]))


def test_first_round_m31():
    assert first_round_triviality(cached_instance("M31", 1)).all_trivial


def test_first_round_m31_degenerate():
    inst = instance("M31", 1, {"b": FamilyParams.degenerate(0)})
    assert not first_round_triviality(inst).all_trivial


def test_first_round_m41():
    frt = first_round_triviality(cached_instance("M41", 1))
    assert not frt.all_trivial
    assert frt.per_party[0].dimension == 2


def test_nondisturbing_dimension_monotone():
    """Degenerate variables never shrink the solution space below the generic one."""
    modes = [None, 0, 1]
    for seed in range(3):
        for combo in itertools.product(modes, repeat=3):
            over = {f: FamilyParams.degenerate(m) for f, m in zip("abc", combo) if m is not None}
            inst = instance("M31", seed, over)
            dims = [nondisturbing_space(inst, j).dimension for j in range(3)]
            for f in over:
                fewer = {k: v for k, v in over.items() if k != f}
                gen = instance("M31", seed, fewer)
                gen_dims = [nondisturbing_space(gen, j).dimension for j in range(3)]
                assert all(g <= d for g, d in zip(gen_dims, dims)), (combo, f)


@pytest.mark.parametrize("name", list(catalog()))
def test_mutual_exclusion(name):
    inst = cached_instance(name, 1)
    certified = certify(inst) is not None
    assert not (certified and first_round_triviality(inst).all_trivial)


@pytest.mark.parametrize("name", ["M2", "M32", "M41", "M46"])
def test_certificate_simulates_perfectly(name):
    for seed in range(3):
        inst = instance(name, seed)
        v = decide_local_distinguishability(inst)
        assert v.distinguishable
        assert simulate(inst, build_protocol_from_certificate(v.certificate)).perfect

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtwoparty.gate_algebra import matrix_of
from qtwoparty.pauli_frame import KeyPair
from qtwoparty.qstate import (DensityOperator, PureState, apply_unitary, bell_measure, bell_state,
                              measure_computational, mutual_information, pad_apply, partial_trace,
                              pauli_matrix, purify, tensor, trace_distance, von_neumann_entropy)

from conftest import random_state

ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def test_tensor_of_basis_states():
    s = tensor(PureState(ZERO, ["a"]), PureState(ZERO, ["b"]))
    assert np.allclose(s.amplitudes, [1, 0, 0, 0])
    assert s.wires == ("a", "b")


def test_tensor_keeps_norm_and_mixedness():
    s = tensor(bell_state(0, 0, ["a", "b"]), bell_state(0, 0, ["c", "d"]))
    assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12
    m = tensor(DensityOperator.maximally_mixed(["a"]), DensityOperator.maximally_mixed(["b"]))
    assert np.allclose(m.matrix, np.eye(4) / 4)


def test_tensor_rejects_shared_label():
    with pytest.raises(ValueError, match="duplicate"):
        tensor(PureState(ZERO, ["a"]), PureState(ZERO, ["a"]))


def test_duplicate_wire_or_bad_length():
    with pytest.raises(ValueError):
        PureState([1, 0, 0, 0], ["a", "a"])
    with pytest.raises(ValueError):
        PureState([1, 0, 0], ["a", "b"])


def test_type_invariants():
    with pytest.raises(ValueError):
        PureState([1, 1], ["a"])
    with pytest.raises(ValueError):
        DensityOperator(np.array([[1, 1], [0, 0]]), ["a"])
    with pytest.raises(ValueError):
        DensityOperator(np.diag([1.5, -0.5]), ["a"])


def test_apply_unitary_examples():
    assert np.allclose(apply_unitary(PureState(ZERO, ["a"]), matrix_of("X"), ["a"]).amplitudes, ONE)
    assert np.allclose(apply_unitary(PureState(ZERO, ["a"]), matrix_of("H"), ["a"]).amplitudes, PLUS)
    s = PureState.basis([1, 0], ["c", "t"])
    assert np.allclose(apply_unitary(s, matrix_of("CNOT"), ["c", "t"]).amplitudes, [0, 0, 0, 1])


def test_apply_unitary_target_order_and_density():
    s = PureState.basis([0, 1], ["t", "c"])
    out = apply_unitary(s, matrix_of("CNOT"), ["c", "t"])
    assert np.allclose(out.amplitudes, PureState.basis([1, 1], ["t", "c"]).amplitudes)
    rho = apply_unitary(s.density(), matrix_of("CNOT"), ["c", "t"])
    assert trace_distance(rho, out) < 1e-12


def test_apply_unitary_errors():
    s = PureState(ZERO, ["a"])
    with pytest.raises(ValueError, match="unitary"):
        apply_unitary(s, np.array([[1, 1], [0, 1]]), ["a"])
    with pytest.raises(KeyError):
        apply_unitary(s, matrix_of("X"), ["zz"])


def test_partial_trace_examples():
    rho = partial_trace(bell_state(0, 0, ["a", "b"]), ["a"])
    assert np.allclose(rho.matrix, np.eye(2) / 2)
    rho = partial_trace(bell_state(0, 0, ["a", "b"]), ["b"])
    assert np.allclose(rho.matrix, np.eye(2) / 2)
    s = PureState.product([ZERO, PLUS], ["a", "b"])
    assert np.allclose(partial_trace(s, ["a", "b"]).matrix, s.density().matrix)
    assert np.allclose(partial_trace(s, ["a"]).matrix, np.diag([1, 0]))
    with pytest.raises(KeyError):
        partial_trace(s, ["q"])


def test_bell_measure_eigenstate():
    out = bell_measure(bell_state(0, 0, ["a", "b"]), "a", "b", np.random.default_rng(0))
    assert out.bits == (0, 0) and abs(out.probability - 1) < 1e-12


def test_bell_measure_on_00():
    s = PureState.basis([0, 0], ["a", "b"])
    probs = {}
    for x in (0, 1):
        for z in (0, 1):
            try:
                probs[(x, z)] = bell_measure(s, "a", "b", outcome=(x, z)).probability
            except ValueError:
                probs[(x, z)] = 0.0
    assert probs == pytest.approx({(0, 0): 0.5, (0, 1): 0.5, (1, 0): 0.0, (1, 1): 0.0})


def test_bell_measure_zero_probability_branch():
    with pytest.raises(ValueError, match="zero probability"):
        bell_measure(bell_state(0, 0, ["a", "b"]), "a", "b", outcome=(1, 0))
    with pytest.raises(ValueError):
        bell_measure(bell_state(0, 0, ["a", "b"]), "a", "a", np.random.default_rng(0))


def test_teleportation_identity(rng):
    for _ in range(100):
        psi = PureState(random_state(rng, 1), ["w"])
        s = tensor(psi, bell_state(0, 0, ["e1", "e2"]))
        m = bell_measure(s, "w", "e1", rng)
        x, z = m.bits
        fixed = apply_unitary(m.post_state, pauli_matrix(x, z).conj().T, ["e2"])
        out = partial_trace(fixed, ["e2"])
        assert trace_distance(out, DensityOperator(psi.density().matrix, ["e2"])) <= 1e-9


def test_bell_outcome_probabilities_sum_to_one(rng):
    s = PureState(random_state(rng, 3), ["a", "b", "c"])
    total = 0.0
    for x in (0, 1):
        for z in (0, 1):
            try:
                total += bell_measure(s, "a", "c", outcome=(x, z)).probability
            except ValueError:
                pass
    assert abs(total - 1) < 1e-10


def test_measure_computational():
    m = measure_computational(PureState(ONE, ["a"]), "a", np.random.default_rng(0))
    assert m.bits == (1,) and m.probability == pytest.approx(1)
    m = measure_computational(PureState(PLUS, ["a"]), "a", outcome=0)
    assert m.probability == pytest.approx(0.5)
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = measure_computational(bell_state(0, 0, ["a", "b"]), "a", rng)
        other = measure_computational(m.post_state, "b", outcome=m.bits[0])
        assert other.probability == pytest.approx(1)


def test_measure_computational_on_density(rng):
    rho = DensityOperator(np.diag([0.25, 0.75]), ["a"])
    assert measure_computational(rho, "a", outcome=1).probability == pytest.approx(0.75)
    with pytest.raises(ValueError, match="rng"):
        measure_computational(rho, "a")


def test_trace_distance_examples():
    z, o, p = (PureState(v, ["a"]) for v in (ZERO, ONE, PLUS))
    assert trace_distance(z, z) == 0
    assert trace_distance(z, o) == pytest.approx(1)
    assert trace_distance(z, p) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    with pytest.raises(ValueError):
        trace_distance(z, PureState([1, 0, 0, 0], ["a", "b"]))


def test_entropy_and_mutual_information():
    assert von_neumann_entropy(DensityOperator.maximally_mixed(["a"])) == pytest.approx(1)
    assert von_neumann_entropy(PureState(PLUS, ["a"]).density()) == pytest.approx(0, abs=1e-12)
    assert mutual_information(bell_state(0, 0, ["a", "b"]), ["a"], ["b"]) == pytest.approx(2)
    with pytest.raises(ValueError):
        mutual_information(bell_state(0, 0, ["a", "b"]), ["a"], ["a"])


def test_pad_examples():
    s = PureState(PLUS, ["a"])
    assert np.allclose(pad_apply(s, "a", KeyPair(0, 0)).amplitudes, PLUS)
    assert np.allclose(pad_apply(PureState(ZERO, ["a"]), "a", KeyPair(1, 0)).amplitudes, ONE)


def test_pad_average_is_maximally_mixed(rng):
    for _ in range(20):
        v = random_state(rng, 2)
        rho = DensityOperator(np.outer(v, v.conj()), ["a", "b"])
        avg = sum(pad_apply(rho, "a", (x, z)).matrix for x in (0, 1) for z in (0, 1)) / 4
        red = partial_trace(DensityOperator(avg, ["a", "b"]), ["a"])
        assert np.abs(red.matrix - np.eye(2) / 2).max() < 1e-10


def test_purify_reproduces_state(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = DensityOperator(a @ a.conj().T / np.trace(a @ a.conj().T).real, ["a", "b"])
    psi = purify(rho, prefix="env")
    assert trace_distance(partial_trace(psi, ["a", "b"]), rho) < 1e-10


def _density(draw_vec):
    v = np.array(draw_vec[:4]) + 1j * np.array(draw_vec[4:])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([1, 0, 0, 0], dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityOperator(np.outer(v, v.conj()), ["a", "b"])


vec8 = st.lists(st.floats(-1, 1, allow_nan=False), min_size=8, max_size=8)


@settings(max_examples=60, deadline=None)
@given(vec8, vec8, vec8)
def test_trace_distance_is_a_metric(u, v, w):
    a, b, c = _density(u), _density(v), _density(w)
    assert abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-9
    assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-9
    assert 0 <= trace_distance(a, b) <= 1


@settings(max_examples=40, deadline=None)
@given(vec8, st.integers(0, 1), st.integers(0, 1))
def test_pad_twice_is_identity(u, x, z):
    rho = _density(u)
    back = pad_apply(pad_apply(rho, "b", (x, z)), "b", (x, z))
    assert trace_distance(back, rho) < 1e-10
    assert abs(np.trace(pad_apply(rho, "a", (x, z)).matrix) - 1) < 1e-10

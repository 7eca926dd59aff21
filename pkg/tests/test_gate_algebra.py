import numpy as np
import pytest

from qtwoparty.gate_algebra import (RULES, Y_STANDARD, CommutationRule, GateKind, catalog, matrix_of,
                                    pauli_decompose, power_rules, verify_catalog, verify_rule, word_matrix)


def test_matrix_examples():
    assert np.allclose(matrix_of(GateKind.R), np.diag([1, np.exp(1j * np.pi / 4)]))
    assert np.allclose(matrix_of("Y"), [[0, -1], [1, 0]])
    assert np.allclose(matrix_of("X") @ matrix_of("X"), np.eye(2))
    assert np.allclose(matrix_of("Y"), matrix_of("X") @ matrix_of("Z"))
    assert np.allclose(matrix_of("H"), np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_matrices_are_unitary_and_mostly_involutions():
    for g in GateKind:
        m = matrix_of(g)
        assert np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() <= 1e-12
    for g in ("X", "Y", "Z", "H", "CNOT"):
        sq = matrix_of(g) @ matrix_of(g)
        ph = sq[0, 0]
        assert abs(abs(ph) - 1) < 1e-12 and np.allclose(sq, ph * np.eye(sq.shape[0]))


def test_matrix_of_returns_copies():
    m = matrix_of("X")
    m[0, 0] = 5
    assert matrix_of("X")[0, 0] == 0
    with pytest.raises(ValueError):
        matrix_of("T")


def test_named_rules():
    names = {r.name: r for r in catalog()}
    assert verify_rule(names["HX=ZH"])[0]
    assert verify_rule(names["RX=YPR"])[0]
    assert verify_rule(names["P^(1+1)=Z^1P^0"])[0]
    assert np.allclose(word_matrix(["P^2"]), matrix_of("Z"))


def test_catalog_size_and_precision():
    assert len(RULES) == 10
    assert len(power_rules()) == 4
    rows = verify_catalog()
    assert len(rows) == 14
    assert all(r["ok"] for r in rows)
    assert max(r["max_error"] for r in rows) <= 1e-12


def test_table_phases_hold_for_the_hermitian_y():
    for rule in RULES:
        if rule.table_phase is not None:
            ok, err = verify_rule(rule, y_matrix=Y_STANDARD, phase=rule.table_phase)
            assert ok, (rule.name, err)


def test_real_y_changes_the_phase():
    rule = {r.name: r for r in RULES}["PX=YP"]
    assert not verify_rule(rule, phase=1)[0]
    assert verify_rule(rule, phase=1j)[0]


def test_false_rule_is_rejected():
    ok, err = verify_rule(CommutationRule("bad", ("H", "X"), ("X", "H")))
    assert not ok and err > 0.5


def test_word_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        word_matrix(["CNOT", "X"])
    with pytest.raises(ValueError):
        verify_rule(CommutationRule("mismatch", ("CNOT",), ("X",)))


def test_pauli_decompose():
    m = 1j * np.kron(matrix_of("X"), matrix_of("X") @ matrix_of("Z"))
    xs, zs, ph = pauli_decompose(m)
    assert xs == (1, 1) and zs == (0, 1) and abs(ph - 1j) < 1e-12
    assert pauli_decompose(matrix_of("H")) is None

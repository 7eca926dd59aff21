"""Gate matrices for the universal set and a catalog of commutation rules.

Y here is the real matrix [[0, -1], [1, 0]] = X.Z, so that X^1 Z^1 = Y holds
literally. It differs from the textbook Y = iXZ by a phase of -i.

A gate word is a sequence of factors written in operator order: the leftmost
factor acts last, as in ``H X`` meaning "apply X, then H". A factor is a gate
name, an integer power such as ``P^2``, or a tensor product such as ``X*I``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .qstate import is_unitary


class GateKind(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    P = "P"
    R = "R"
    CNOT = "CNOT"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CNOT else 1

    @property
    def is_clifford(self) -> bool:
        return self is not GateKind.R

    @property
    def is_pauli(self) -> bool:
        return self in (GateKind.X, GateKind.Y, GateKind.Z)


_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "P": np.diag([1, 1j]).astype(complex),
    "R": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "CNOT": np.eye(4, dtype=complex)[[0, 1, 3, 2]],
}
# the conventional Hermitian Y, only used to compare phase conventions
Y_STANDARD = np.array([[0, -1j], [1j, 0]], dtype=complex)

for _m in _MATRICES.values():
    _m.setflags(write=False)


def matrix_of(g: GateKind | str) -> np.ndarray:
    name = g.value if isinstance(g, GateKind) else g
    try:
        return _MATRICES[name].copy()
    except KeyError:
        raise ValueError(f"unknown gate {name!r}") from None


def _factor(tok: str, table: dict[str, np.ndarray]) -> np.ndarray:
    if "*" in tok:
        return reduce(np.kron, [_factor(t, table) for t in tok.split("*")])
    base, _, power = tok.partition("^")
    if base not in table:
        raise ValueError(f"unknown gate {base!r} in word")
    return np.linalg.matrix_power(table[base], int(power) if power else 1)


def word_matrix(word: Sequence[str], y_matrix: np.ndarray | None = None) -> np.ndarray:
    """Operator product of a word; an empty word is the 1-qubit identity."""
    table = dict(_MATRICES)
    if y_matrix is not None:
        table["Y"] = np.asarray(y_matrix, dtype=complex)
    mats = [_factor(t, table) for t in word] or [table["I"]]
    out = mats[0]
    for m in mats[1:]:
        if m.shape != out.shape:
            raise ValueError(f"dimension mismatch in word {' '.join(word)}")
        out = out @ m
    return out


@dataclass(frozen=True)
class CommutationRule:
    name: str
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]
    phase: complex = 1.0
    # phase as printed in the usual table, which assumes the Hermitian Y
    table_phase: complex | None = field(default=None, compare=False)


def verify_rule(rule: CommutationRule, y_matrix: np.ndarray | None = None,
                phase: complex | None = None) -> tuple[bool, float]:
    """Check lhs == phase * rhs entrywise; returns (ok, max error)."""
    lhs = word_matrix(rule.lhs, y_matrix)
    rhs = word_matrix(rule.rhs, y_matrix)
    if lhs.shape != rhs.shape:
        raise ValueError(f"dimension mismatch in rule {rule.name}")
    ph = rule.phase if phase is None else phase
    err = float(np.abs(lhs - ph * rhs).max())
    return err <= 1e-10, err


_W8 = np.exp(1j * np.pi / 4)

RULES: tuple[CommutationRule, ...] = (
    CommutationRule("HX=ZH", ("H", "X"), ("Z", "H")),
    CommutationRule("PX=YP", ("P", "X"), ("Y", "P"), 1j, table_phase=1),
    CommutationRule("RX=YPR", ("R", "X"), ("Y", "P", "R"), _W8, table_phase=np.conj(_W8)),
    CommutationRule("CNOT(X*I)=(X*X)CNOT", ("CNOT", "X*I"), ("X*X", "CNOT")),
    CommutationRule("CNOT(I*X)=(I*X)CNOT", ("CNOT", "I*X"), ("I*X", "CNOT")),
    CommutationRule("HZ=XH", ("H", "Z"), ("X", "H")),
    CommutationRule("PZ=ZP", ("P", "Z"), ("Z", "P")),
    CommutationRule("RZ=ZR", ("R", "Z"), ("Z", "R")),
    CommutationRule("CNOT(Z*I)=(Z*I)CNOT", ("CNOT", "Z*I"), ("Z*I", "CNOT")),
    CommutationRule("CNOT(I*Z)=(Z*Z)CNOT", ("CNOT", "I*Z"), ("Z*Z", "CNOT")),
)


def power_rules() -> tuple[CommutationRule, ...]:
    """P^(a+b) = Z^(ab) P^(a xor b) for every a, b in {0, 1}."""
    out = []
    for a in (0, 1):
        for b in (0, 1):
            out.append(CommutationRule(f"P^({a}+{b})=Z^{a * b}P^{a ^ b}",
                                       (f"P^{a + b}",), (f"Z^{a * b}", f"P^{a ^ b}")))
    return tuple(out)


def catalog() -> tuple[CommutationRule, ...]:
    return RULES + power_rules()


def verify_catalog() -> list[dict]:
    rows = []
    for rule in catalog():
        ok, err = verify_rule(rule)
        rows.append({"rule": rule.name, "lhs": " ".join(rule.lhs), "rhs": " ".join(rule.rhs),
                     "phase": [float(np.real(rule.phase)), float(np.imag(rule.phase))],
                     "ok": ok, "max_error": err})
    return rows


def pauli_decompose(mat: np.ndarray, tol: float = 1e-10) -> tuple[tuple[int, ...], tuple[int, ...], complex] | None:
    """Write ``mat`` as phase * X^x Z^z on each qubit, or return None.

    Qubit 0 is the most significant tensor factor.
    """
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[0].bit_length() - 1
    # a Pauli string has exactly one nonzero per column; column 0 fixes x
    col0 = mat[:, 0]
    row = int(np.argmax(np.abs(col0)))
    if abs(col0[row]) < tol:
        return None
    xs = tuple((row >> (n - 1 - q)) & 1 for q in range(n))
    xm = reduce(np.kron, [_factor("X^%d" % x, _MATRICES) for x in xs]) if n else np.eye(1)
    d = xm.T @ mat  # X^x is real symmetric, so its inverse is itself
    if np.abs(d - np.diag(np.diag(d))).max() > tol:
        return None
    diag = np.diag(d)
    ph = diag[0]
    signs = diag / ph
    if np.abs(np.abs(signs.real) - 1).max() > tol or np.abs(signs.imag).max() > tol:
        return None
    zs = tuple(int(signs[1 << (n - 1 - q)].real < 0) for q in range(n))
    zm = reduce(np.kron, [_factor("Z^%d" % z, _MATRICES) for z in zs]) if n else np.eye(1)
    if np.abs(mat - ph * xm @ zm).max() > tol:
        return None
    return xs, zs, complex(ph)


def all_unitary() -> bool:
    return all(is_unitary(matrix_of(g), 1e-12) for g in GateKind)

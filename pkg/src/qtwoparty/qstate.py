"""Dense state vectors and density operators over labelled qubit wires.

States are immutable values. Every operation returns a new state whose wire
order is documented by the ``wires`` tuple; the first wire is the most
significant bit of a basis index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

TYPE_TOL = 1e-12
ALG_TOL = 1e-10

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]


class WireId(NamedTuple):
    """A wire label together with its position in a register."""

    label: str
    index: int


WireLike = Union[str, WireId]


def _label(w: WireLike) -> str:
    return w.label if isinstance(w, WireId) else w


def _check_wires(wires: Sequence[str], n: int) -> tuple[str, ...]:
    wires = tuple(_label(w) for w in wires)
    if len(set(wires)) != len(wires):
        raise ValueError(f"duplicate wire label in {wires}")
    if len(wires) != n:
        raise ValueError(f"{len(wires)} wire labels for {n} qubits")
    return wires


def _nqubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def apply_axes(tensor: np.ndarray, mat: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract a k-qubit matrix into ``tensor`` along the given qubit axes."""
    k = len(axes)
    g = np.asarray(mat).reshape((2,) * (2 * k))
    out = np.tensordot(g, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


class _Register:
    wires: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.wires)

    @property
    def wire_ids(self) -> tuple[WireId, ...]:
        return tuple(WireId(w, i) for i, w in enumerate(self.wires))

    def index_of(self, w: WireLike) -> int:
        lab = _label(w)
        try:
            return self.wires.index(lab)
        except ValueError:
            raise KeyError(f"unknown wire {lab!r}") from None


@dataclass(frozen=True, eq=False)
class PureState(_Register):
    amplitudes: np.ndarray
    wires: tuple[str, ...]

    def __init__(self, amplitudes, wires: Iterable[WireLike], normalize: bool = False):
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = _nqubits(amp.size)
        wires = _check_wires(list(wires), n)
        norm = np.linalg.norm(amp)
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amp = amp / norm
        elif abs(norm - 1) > TYPE_TOL * 10 * max(1, n):
            raise ValueError(f"state norm {norm!r} differs from 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "wires", wires)

    @classmethod
    def basis(cls, bits: Sequence[int], wires: Iterable[WireLike]) -> "PureState":
        idx = int("".join(str(int(b)) for b in bits), 2) if len(bits) else 0
        amp = np.zeros(1 << len(bits), dtype=complex)
        amp[idx] = 1
        return cls(amp, wires)

    @classmethod
    def product(cls, vectors: Sequence[np.ndarray], wires: Iterable[WireLike]) -> "PureState":
        amp = np.ones(1, dtype=complex)
        for v in vectors:
            amp = np.kron(amp, np.asarray(v, dtype=complex))
        return cls(amp, wires, normalize=True)

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.wires)

    def reorder(self, wires: Sequence[WireLike]) -> "PureState":
        perm = [self.index_of(w) for w in wires]
        if sorted(perm) != list(range(self.n)):
            raise ValueError("reorder needs a permutation of all wires")
        t = np.transpose(self.tensor_view(), perm)
        return PureState(t.reshape(-1), [self.wires[p] for p in perm])


@dataclass(frozen=True, eq=False)
class DensityOperator(_Register):
    matrix: np.ndarray
    wires: tuple[str, ...]

    def __init__(self, matrix, wires: Iterable[WireLike], check: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        n = _nqubits(m.shape[0])
        wires = _check_wires(list(wires), n)
        if check:
            scale = max(1.0, float(np.abs(m).max(initial=0.0)))
            if np.abs(m - m.conj().T).max(initial=0.0) > TYPE_TOL * scale * 10:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(m).real - 1) > TYPE_TOL * 10 * max(1, n):
                raise ValueError(f"trace {np.trace(m).real!r} differs from 1")
            m = (m + m.conj().T) / 2
            if m.shape[0] <= 256 and np.linalg.eigvalsh(m).min() < -ALG_TOL:
                raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "wires", wires)

    @classmethod
    def maximally_mixed(cls, wires: Iterable[WireLike]) -> "DensityOperator":
        wires = list(wires)
        d = 1 << len(wires)
        return cls(np.eye(d) / d, wires)

    def tensor_view(self) -> np.ndarray:
        return self.matrix.reshape((2,) * (2 * self.n))

    def reorder(self, wires: Sequence[WireLike]) -> "DensityOperator":
        perm = [self.index_of(w) for w in wires]
        if sorted(perm) != list(range(self.n)):
            raise ValueError("reorder needs a permutation of all wires")
        t = np.transpose(self.tensor_view(), perm + [p + self.n for p in perm])
        d = 1 << self.n
        return DensityOperator(t.reshape(d, d), [self.wires[p] for p in perm], check=False)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


State = Union[PureState, DensityOperator]


@dataclass(frozen=True)
class MeasurementOutcome:
    bits: tuple[int, ...]
    probability: float
    post_state: State


def as_density(state: State) -> DensityOperator:
    return state.density() if isinstance(state, PureState) else state


def tensor(a: State, b: State) -> State:
    """Tensor product with b's wires appended after a's."""
    if set(a.wires) & set(b.wires):
        raise ValueError(f"duplicate wire label(s) {sorted(set(a.wires) & set(b.wires))}")
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), a.wires + b.wires)
    a, b = as_density(a), as_density(b)
    return DensityOperator(np.kron(a.matrix, b.matrix), a.wires + b.wires, check=False)


def is_unitary(mat: np.ndarray, tol: float = ALG_TOL) -> bool:
    mat = np.asarray(mat)
    return bool(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max() <= tol)


def apply_unitary(state: State, gate_matrix, targets: Sequence[WireLike]) -> State:
    """Apply ``gate_matrix`` on ``targets`` (first target = most significant)."""
    u = np.asarray(gate_matrix, dtype=complex)
    k = len(targets)
    if u.shape != (1 << k, 1 << k):
        raise ValueError(f"matrix shape {u.shape} does not fit {k} target wire(s)")
    if len({_label(t) for t in targets}) != k:
        raise ValueError("target wires must be distinct")
    if not is_unitary(u):
        raise ValueError("gate matrix is not unitary")
    axes = [state.index_of(t) for t in targets]
    if isinstance(state, PureState):
        t = apply_axes(state.tensor_view(), u, axes)
        return PureState(t.reshape(-1), state.wires, normalize=True)
    t = apply_axes(state.tensor_view(), u, axes)
    t = apply_axes(t, u.conj(), [a + state.n for a in axes])
    d = 1 << state.n
    return DensityOperator(t.reshape(d, d), state.wires, check=False)


def partial_trace(rho: State, keep: Iterable[WireLike]) -> DensityOperator:
    """Reduced operator on ``keep``, in the order the wires appear in ``rho``."""
    keep_lab = {_label(w) for w in keep}
    for w in keep_lab:
        rho.index_of(w)
    kept = [w for w in rho.wires if w in keep_lab]
    ki = [rho.index_of(w) for w in kept]
    ti = [i for i in range(rho.n) if i not in ki]
    dk = 1 << len(ki)
    if isinstance(rho, PureState):
        psi = np.transpose(rho.tensor_view(), ki + ti).reshape(dk, -1)
        return DensityOperator(psi @ psi.conj().T, kept, check=False)
    n = rho.n
    t = np.transpose(rho.tensor_view(), ki + ti + [n + i for i in ki] + [n + i for i in ti])
    dt = 1 << len(ti)
    t = t.reshape(dk, dt, dk, dt)
    return DensityOperator(np.einsum("ajbj->ab", t), kept, check=False)


def _draw(probs: np.ndarray, rng: np.random.Generator) -> int:
    c = np.cumsum(probs)
    return int(min(np.searchsorted(c, rng.random() * c[-1], side="right"), len(probs) - 1))


def _measure_basis(state: State, axes: list[int], rng, outcome) -> tuple[int, float, State]:
    """Computational-basis measurement of the qubit axes; returns (index, prob, post)."""
    k = len(axes)
    n = state.n
    if isinstance(state, PureState):
        t = np.moveaxis(state.tensor_view(), axes, list(range(k))).reshape(1 << k, -1)
        probs = np.einsum("ij,ij->i", t, t.conj()).real
    else:
        probs = np.diag(partial_trace(state, [state.wires[a] for a in sorted(axes)])
                        .reorder([state.wires[a] for a in axes]).matrix).real
    probs = np.clip(probs, 0, None)
    if outcome is None:
        if rng is None:
            raise ValueError("an rng is needed to sample an outcome")
        idx = _draw(probs, rng)
    else:
        idx = int(outcome)
        if probs[idx] <= ALG_TOL ** 2:
            raise ValueError(f"outcome {idx} has zero probability")
    p = float(probs[idx] / probs.sum())
    proj = np.zeros((1 << k, 1 << k))
    proj[idx, idx] = 1
    if isinstance(state, PureState):
        tt = apply_axes(state.tensor_view(), proj, axes)
        post = PureState(tt.reshape(-1), state.wires, normalize=True)
    else:
        tt = apply_axes(state.tensor_view(), proj, axes)
        tt = apply_axes(tt, proj, [a + n for a in axes])
        d = 1 << n
        m = tt.reshape(d, d)
        post = DensityOperator(m / np.trace(m).real, state.wires, check=False)
    return idx, p, post


def measure_computational(state: State, w: WireLike, rng=None, outcome: int | None = None) -> MeasurementOutcome:
    idx, p, post = _measure_basis(state, [state.index_of(w)], rng, outcome)
    return MeasurementOutcome((idx,), p, post)


def bell_measure(state: State, wa: WireLike, wb: WireLike, rng=None,
                 outcome: tuple[int, int] | None = None) -> MeasurementOutcome:
    """Bell measurement of (wa, wb) returning bits (x, z).

    The basis is Psi_{x,z} = (|0,x> + (-1)^z |1,x^1>)/sqrt2 with wa first.
    Both wires stay in the register, collapsed onto Psi_{x,z}.
    """
    if _label(wa) == _label(wb):
        raise ValueError("Bell measurement needs two distinct wires")
    rot = np.kron(_H, np.eye(2)) @ _CNOT
    s = apply_unitary(state, rot, [wa, wb])
    forced = None if outcome is None else 2 * outcome[1] + outcome[0]
    idx, p, post = _measure_basis(s, [s.index_of(wa), s.index_of(wb)], rng, forced)
    post = apply_unitary(post, rot.conj().T, [wa, wb])
    z, x = idx >> 1, idx & 1
    return MeasurementOutcome((x, z), p, post)


def bell_vector(x: int, z: int) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[x] = 1 / np.sqrt(2)
    v[2 + (1 - x)] = (-1) ** z / np.sqrt(2)
    return v


def bell_state(x: int, z: int, wires: Sequence[WireLike]) -> PureState:
    return PureState(bell_vector(x, z), wires)


def pauli_matrix(x: int, z: int) -> np.ndarray:
    """X^x Z^z."""
    return np.linalg.matrix_power(_X, int(x)) @ np.linalg.matrix_power(_Z, int(z))


def pad_apply(state: State, w: WireLike, key) -> State:
    """Encrypt wire ``w`` with X^{key.x} Z^{key.z}."""
    return apply_unitary(state, pauli_matrix(key[0], key[1]), [w])


def trace_distance(r0: State, r1: State) -> float:
    r0, r1 = as_density(r0), as_density(r1)
    if r0.matrix.shape != r1.matrix.shape:
        raise ValueError("density operators have different dimensions")
    if set(r0.wires) != set(r1.wires):
        raise ValueError("density operators live on different wires")
    if r0.wires != r1.wires:
        r1 = r1.reorder(r0.wires)
    ev = np.linalg.eigvalsh(r0.matrix - r1.matrix)
    return float(min(1.0, 0.5 * np.abs(ev).sum()))


def von_neumann_entropy(rho: State) -> float:
    """Entropy in bits."""
    if isinstance(rho, PureState):
        return 0.0
    ev = np.linalg.eigvalsh(rho.matrix)
    if ev.min() < -ALG_TOL:
        raise ValueError(f"negative eigenvalue {ev.min()!r}")
    ev = ev[ev > ALG_TOL]
    return float(max(0.0, -(ev * np.log2(ev)).sum()))


def mutual_information(rho: State, part_a: Iterable[WireLike], part_b: Iterable[WireLike]) -> float:
    a = {_label(w) for w in part_a}
    b = {_label(w) for w in part_b}
    if a & b:
        raise ValueError("parts must be disjoint")
    sa = von_neumann_entropy(partial_trace(rho, a))
    sb = von_neumann_entropy(partial_trace(rho, b))
    sab = von_neumann_entropy(partial_trace(rho, a | b))
    return sa + sb - sab


def purify(rho: DensityOperator, prefix: str = "env") -> PureState:
    """A purification of ``rho`` with environment wires appended last."""
    ev, vec = np.linalg.eigh(rho.matrix)
    keep = ev > ALG_TOL
    ev, vec = ev[keep], vec[:, keep]
    m = max(1, int(np.ceil(np.log2(len(ev))))) if len(ev) > 1 else 0
    amp = np.zeros((rho.matrix.shape[0], 1 << m), dtype=complex)
    for k in range(len(ev)):
        amp[:, k] = np.sqrt(ev[k]) * vec[:, k]
    env = [f"{prefix}{k}" for k in range(m)]
    return PureState(amp.reshape(-1), list(rho.wires) + env, normalize=True)

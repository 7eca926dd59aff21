"""Classical-quantum register used by the protocol engine.

The global state is pure and stored as a list of branches. Branch ``b`` has a
row of classical labels ``labels[b]`` (measurement outcomes, coins, key
shares, copies of messages) and an amplitude tensor over the live quantum
wires. Globally the state is ``sum_b |labels[b]> (x) amps[b]``.

Every classical bit has a holder set. A bit held by {A, E} is A's bit with a
copy in the environment, i.e. decohered; a bit held only by {A} is coherent,
which is how purified parties keep their residues. Tracing a holder out of a
view therefore decoheres exactly the bits it held.

Measured wires leave the amplitude tensor: after the measurement their state
is a fixed function of the outcome bits, so dropping them is an isometry on
the holder's side and does not change any view. They are listed in
``collapsed`` for bookkeeping.

In exact mode every branch is kept. In sample mode each split keeps one child
drawn with its Born weight from the acting party's RNG stream.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .qstate import DensityOperator, PureState, apply_axes

ENV = "E"
REF = "R"
_PRUNE = 1e-28

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]


class OwnershipError(RuntimeError):
    pass


def canonical_name(logical_label: str) -> str:
    return "L:" + logical_label


@dataclass
class BranchState:
    rngs: dict[str, np.random.Generator] | None = None
    wires: list[str] = field(default_factory=list)
    owner: dict[str, str] = field(default_factory=dict)
    amps: np.ndarray = field(default_factory=lambda: np.ones((1,), dtype=complex))
    bits: list[str] = field(default_factory=list)
    holders: dict[str, frozenset] = field(default_factory=dict)
    labels: np.ndarray = field(default_factory=lambda: np.zeros((1, 0), dtype=np.uint8))
    logical: dict[str, str | None] = field(default_factory=dict)
    collapsed: dict[str, dict] = field(default_factory=dict)
    _serial: int = 0

    # --- basic accessors ------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.rngs is None

    @property
    def n_branches(self) -> int:
        return self.amps.shape[0]

    def copy(self) -> "BranchState":
        return copy.deepcopy(self)

    def _axis(self, w: str) -> int:
        try:
            return 1 + self.wires.index(w)
        except ValueError:
            raise KeyError(f"wire {w!r} is not live") from None

    def phys(self, ref: str) -> str:
        """Physical wire carrying ``ref`` (a logical label or a wire name)."""
        if ref in self.logical:
            p = self.logical[ref]
            if p is None:
                raise KeyError(f"logical wire {ref!r} has no carrier here")
            return p
        return ref

    def canonical(self, w: str) -> str:
        for lab, p in self.logical.items():
            if p == w:
                return canonical_name(lab)
        return w

    def col(self, name: str) -> np.ndarray:
        try:
            return self.labels[:, self.bits.index(name)]
        except ValueError:
            raise KeyError(f"no classical bit {name!r}") from None

    def has_bit(self, name: str) -> bool:
        return name in self.holders

    def value(self, name: str) -> int:
        """The value of a bit in sample mode (single branch)."""
        if self.n_branches != 1:
            raise RuntimeError("value() needs a single-branch state")
        return int(self.col(name)[0])

    def require(self, actor: str | None, wires: Iterable[str]) -> None:
        if actor is None:
            return
        for w in wires:
            if self.owner.get(w) != actor:
                raise OwnershipError(f"{actor} does not hold wire {w!r} (holder {self.owner.get(w)})")

    def fresh(self, prefix: str) -> str:
        self._serial += 1
        return f"{prefix}#{self._serial}"

    # --- wires ----------------------------------------------------------
    def add_wires(self, names: Sequence[str], owner: str | Mapping[str, str], vec) -> None:
        names = list(names)
        for w in names:
            if w in self.owner or w in self.collapsed:
                raise ValueError(f"wire {w!r} already exists")
        vec = np.asarray(vec, dtype=complex).reshape((2,) * len(names))
        self.amps = np.multiply.outer(self.amps, vec)
        self.wires += names
        for w in names:
            self.owner[w] = owner if isinstance(owner, str) else owner[w]

    def add_pure(self, psi: PureState, owners: Mapping[str, str]) -> None:
        self.add_wires(list(psi.wires), dict(owners), psi.amplitudes)

    def move(self, wires: Iterable[str], new_owner: str) -> None:
        for w in wires:
            if w not in self.owner:
                raise KeyError(f"wire {w!r} is not live")
            self.owner[w] = new_owner

    def rename(self, old: str, new: str) -> None:
        if new in self.owner:
            raise ValueError(f"wire {new!r} already exists")
        i = self.wires.index(old)
        self.wires[i] = new
        self.owner[new] = self.owner.pop(old)
        for lab, p in self.logical.items():
            if p == old:
                self.logical[lab] = new

    # --- unitaries ------------------------------------------------------
    def apply(self, mat, wires: Sequence[str], mask=None, actor: str | None = None) -> None:
        """Apply ``mat`` on ``wires`` in every branch where ``mask`` is set."""
        self.require(actor, wires)
        axes = [self._axis(w) for w in wires]
        if mask is None:
            self.amps = apply_axes(self.amps, mat, axes)
            return
        mask = np.asarray(mask).astype(bool)
        if not mask.any():
            return
        if mask.all():
            self.amps = apply_axes(self.amps, mat, axes)
            return
        self.amps[mask] = apply_axes(self.amps[mask], mat, axes)

    # --- classical bits -------------------------------------------------
    def new_bits(self, names: Sequence[str], values, holders: Iterable[str]) -> None:
        values = np.asarray(values, dtype=np.uint8)
        if values.ndim == 1 and len(names) == 1:
            values = values[:, None]
        values = np.broadcast_to(values, (self.n_branches, len(names))) & 1
        for nm in names:
            if nm in self.holders:
                raise ValueError(f"bit {nm!r} already exists")
            self.holders[nm] = frozenset(holders)
        self.bits += list(names)
        self.labels = np.concatenate([self.labels, values], axis=1)

    def new_bit(self, name: str, values, holders: Iterable[str]) -> None:
        v = np.asarray(values, dtype=np.uint8)
        self.new_bits([name], v.reshape(-1, 1) if v.ndim else v, holders)

    def assign(self, updates: Mapping[str, np.ndarray]) -> None:
        """Overwrite existing bit columns; callers keep the map reversible."""
        for nm, v in updates.items():
            self.labels[:, self.bits.index(nm)] = np.asarray(v, dtype=np.uint8) & 1

    def give(self, names: Iterable[str], holders: Iterable[str]) -> None:
        hs = frozenset(holders)
        for nm in names:
            if nm not in self.holders:
                raise KeyError(f"no classical bit {nm!r}")
            self.holders[nm] = hs

    def add_holder(self, names: Iterable[str], who: str) -> None:
        for nm in names:
            self.holders[nm] = self.holders[nm] | {who}

    def drop_holder(self, names: Iterable[str], who: str) -> None:
        for nm in names:
            self.holders[nm] = self.holders[nm] - {who}

    # --- splitting operations ------------------------------------------
    def _split(self, children: list[np.ndarray], outcome_bits: np.ndarray,
               names: Sequence[str], holders, rng_key: str | None) -> None:
        k = len(children)
        if self.exact:
            amps = np.concatenate(children, axis=0)
            nb = self.n_branches
            lab = np.concatenate([np.repeat(self.labels[None], k, axis=0).reshape(k * nb, self.labels.shape[1]),
                                  np.repeat(outcome_bits, nb, axis=0)], axis=1)
            w = (np.abs(amps) ** 2).reshape(amps.shape[0], -1).sum(axis=1)
            keep = w > _PRUNE
            self.amps = amps[keep]
            self.labels = lab[keep]
        else:
            assert self.n_branches == 1
            probs = np.array([np.vdot(c, c).real for c in children])
            rng = self.rngs[rng_key]
            c = np.cumsum(probs)
            idx = int(min(np.searchsorted(c, rng.random() * c[-1], side="right"), k - 1))
            self.amps = children[idx] / np.sqrt(probs[idx])
            self.labels = np.concatenate([self.labels, outcome_bits[idx][None]], axis=1)
        for nm in names:
            if nm in self.holders:
                raise ValueError(f"bit {nm!r} already exists")
            self.holders[nm] = frozenset(holders)
        self.bits += list(names)

    def measure(self, wires: Sequence[str], names: Sequence[str], holders, rng_key: str | None,
                actor: str | None = None, note: str = "measured") -> None:
        """Computational-basis measurement; the first wire gives the first bit."""
        self.require(actor, wires)
        axes = [self._axis(w) for w in wires]
        k = len(wires)
        t = np.moveaxis(self.amps, axes, list(range(1, k + 1)))
        rest = t.shape[k + 1:]
        t = t.reshape((t.shape[0], 1 << k) + rest)
        children = [np.ascontiguousarray(t[:, o]) for o in range(1 << k)]
        bits = np.array([[(o >> (k - 1 - q)) & 1 for q in range(k)] for o in range(1 << k)], dtype=np.uint8)
        owners = {w: self.owner[w] for w in wires}
        for w in wires:
            self.wires.remove(w)
            del self.owner[w]
            self.collapsed[w] = {"owner": owners[w], "bits": list(names), "how": note}
        self._split(children, bits, names, holders, rng_key)

    def bell_measure(self, w1: str, w2: str, xname: str, zname: str, holders, rng_key,
                     actor: str | None = None) -> None:
        """Bell measurement of (w1, w2) giving outcome bits (x, z)."""
        self.require(actor, [w1, w2])
        self.apply(_CNOT, [w1, w2])
        self.apply(_H, [w1])
        # after the rotation w1 carries z and w2 carries x
        self.measure([w1, w2], [zname, xname], holders, rng_key, note="bell")

    def coin(self, names: Sequence[str], holders, rng_key: str | None) -> None:
        """Fresh uniform bits (think: |+> ancillas measured in the Z basis)."""
        k = len(names)
        amp = self.amps / np.sqrt(1 << k)
        children = [amp.copy() for _ in range(1 << k)]
        bits = np.array([[(o >> (k - 1 - q)) & 1 for q in range(k)] for o in range(1 << k)], dtype=np.uint8)
        for nm in names:
            self.collapsed["coin:" + nm] = {"owner": sorted(set(holders) - {ENV}), "bits": [nm], "how": "coin"}
        self._split(children, bits, names, holders, rng_key)

    def discard(self, w: str) -> None:
        """Trace out a wire by letting the environment measure it."""
        self.measure([w], [self.fresh("E.discard")], {ENV}, ENV, note="discarded")

    # --- reduced states -------------------------------------------------
    def total_weight(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def reduced_density(self, wires: Sequence[str]) -> DensityOperator:
        """Reduced state on live wires with every classical bit traced out."""
        axes = [self._axis(w) for w in wires]
        others = [a for a in range(1, self.amps.ndim) if a not in axes]
        t = np.transpose(self.amps, [0] + axes + others)
        nb = t.shape[0]
        m = t.reshape(nb, 1 << len(wires), -1)
        rho = np.einsum("bij,bkj->ik", m, m.conj())
        return DensityOperator(rho, list(wires), check=False)

    def view(self, keep: Iterable[str], reference: bool = True) -> "BlockView":
        return BlockView.build(self, set(keep), reference)


NEGLIGIBLE = 1e-12
SPARSE_CELLS = 1 << 21
MAX_BLOCK = 1 << 13    # largest view block handed to the dense eigensolver


class ViewTooLarge(ValueError):
    pass


def _gram_sparse(vec: np.ndarray, rows: np.ndarray, groups: np.ndarray, n: int, c: int):
    """F F^+ for the block-sparse factor whose branch b fills the (dk x dt)
    tile at row-tile rows[b] and column-tile groups[b]."""
    from scipy import sparse
    nb, dk, dt = vec.shape
    r = (rows[:, None, None] * dk + np.arange(dk)[None, :, None]) + np.zeros((1, 1, dt), dtype=np.int64)
    col = (groups[:, None, None] * dt + np.arange(dt)[None, None, :]) + np.zeros((1, dk, 1), dtype=np.int64)
    f = sparse.csr_matrix((vec.reshape(-1), (r.reshape(-1), col.reshape(-1))), shape=(n, c))
    return f @ f.conj().T


def _row_codes(bits: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows into uint64 words, shape (n, ceil(k/64))."""
    n, k = bits.shape
    packed = np.packbits(bits.astype(np.uint8), axis=1)
    width = -(-packed.shape[1] // 8) * 8
    if packed.shape[1] < width:
        packed = np.concatenate([packed, np.zeros((n, width - packed.shape[1]), dtype=np.uint8)], axis=1)
    return np.ascontiguousarray(packed).view(">u8").astype(np.uint64)


def _dense_ids(codes: np.ndarray) -> tuple[np.ndarray, int]:
    if codes.shape[1] == 1:
        uniq, inv = np.unique(codes[:, 0], return_inverse=True)
    else:
        uniq, inv = np.unique(codes, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64), len(uniq)


def _ids(*arrays: np.ndarray) -> tuple[list[np.ndarray], int]:
    """Shared integer ids for the rows of several equally wide label arrays."""
    sizes = [a.shape[0] for a in arrays]
    allrows = np.concatenate(arrays, axis=0)
    if allrows.shape[1] == 0:
        return [np.zeros(n, dtype=np.int64) for n in sizes], 1
    inv, n = _dense_ids(_row_codes(allrows))
    return np.split(inv, np.cumsum(sizes)[:-1]), n


def _local_index(major: np.ndarray, minor: np.ndarray, n_major: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank of ``minor`` among the distinct minors seen with the same major id.

    Returns (local index per entry, count of distinct minors per major id).
    """
    if major.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(n_major, dtype=np.int64)
    span = int(minor.max()) + 1
    code = major.astype(np.int64) * span + minor
    up, inv = np.unique(code, return_inverse=True)
    inv = inv.reshape(-1)
    up_major = up // span
    first = np.searchsorted(up_major, np.arange(n_major))
    counts = np.bincount(up_major, minlength=n_major)
    return inv - first[major], counts


@dataclass
class BlockView:
    """Reduced state of a set of holders, block diagonal in decohered bits.

    Per branch it keeps the values of ``block_bits`` (kept bits that also
    have a copy outside the view), ``row_bits`` (bits kept coherently), a
    group label (values of all traced bits) and the amplitude matrix
    ``vec[b]`` of shape (kept wire dim, traced wire dim). The density block
    for block key k is sum over groups g in k of M_g M_g^dagger, where M_g
    stacks the vectors of the group's branches by row label.
    """

    wires: tuple[str, ...]
    row_bits: tuple[str, ...]
    block_bits: tuple[str, ...]
    bkey: np.ndarray
    rkey: np.ndarray
    gkey: np.ndarray
    vec: np.ndarray

    @classmethod
    def build(cls, st: BranchState, keep: set[str], reference: bool = True) -> "BlockView":
        own = set(keep) | ({REF} if reference else set())
        kept_w = sorted((w for w in st.wires if st.owner[w] in own), key=st.canonical)
        traced_w = [w for w in st.wires if w not in kept_w]
        kept_b = [b for b in st.bits if st.holders[b] & keep]
        traced_b = [b for b in st.bits if st.holders[b] - keep]
        tset = set(traced_b)
        block_b = sorted(b for b in kept_b if b in tset)
        row_b = sorted(b for b in kept_b if b not in tset)
        ix = {b: i for i, b in enumerate(st.bits)}
        lab = st.labels
        nb = st.n_branches
        dk, dt = 1 << len(kept_w), 1 << len(traced_w)
        vec = np.transpose(st.amps, [0] + [st._axis(w) for w in kept_w] + [st._axis(w) for w in traced_w])
        vec = np.ascontiguousarray(vec).reshape(nb, dk, dt)
        return cls(tuple(st.canonical(w) for w in kept_w), tuple(row_b), tuple(block_b),
                   lab[:, [ix[b] for b in block_b]], lab[:, [ix[b] for b in row_b]],
                   lab[:, [ix[b] for b in traced_b]], vec)

    @property
    def dim_wires(self) -> int:
        return 1 << len(self.wires)

    @property
    def n_blocks(self) -> int:
        return _ids(self.bkey)[1]

    def trace(self) -> float:
        return float(np.vdot(self.vec, self.vec).real)

    def compatible(self, other: "BlockView") -> bool:
        return (self.wires == other.wires and self.row_bits == other.row_bits
                and self.block_bits == other.block_bits)

    def distance(self, other: "BlockView") -> float:
        """Trace distance; both views must cover the same registers."""
        if not self.compatible(other):
            raise ValueError("views cover different registers:\n"
                             f"  {self.wires} {self.row_bits} {self.block_bits}\n"
                             f"  {other.wires} {other.row_bits} {other.block_bits}")
        return float(min(1.0, 0.5 * _blockwise_trace_norm(self, other)))

    def to_density(self) -> DensityOperator:
        """Dense operator over (block bits, row bits, wires); small views only."""
        names = list(self.block_bits) + list(self.row_bits)
        dk = self.dim_wires
        d = (1 << len(names)) * dk
        if d > 4096:
            raise ValueError(f"view of dimension {d} is too large to densify")
        bits = np.concatenate([self.bkey, self.rkey], axis=1).astype(np.int64)
        weights = (1 << np.arange(len(names))[::-1]) if names else np.zeros(0, dtype=np.int64)
        lab = bits @ weights if names else np.zeros(self.vec.shape[0], dtype=np.int64)
        gid, ng = _ids(np.concatenate([self.bkey, self.gkey], axis=1))
        rho = np.zeros((d, d), dtype=complex)
        for g in range(ng):
            sel = np.nonzero(gid[0] == g)[0]
            m = np.zeros((d, self.vec.shape[2]), dtype=complex)
            for b in sel:
                m[lab[b] * dk:(lab[b] + 1) * dk] = self.vec[b]
            rho += m @ m.conj().T
        wires = [f"bit:{b}" for b in names] + list(self.wires)
        return DensityOperator(rho, wires, check=False)


def _blockwise_trace_norm(v1: BlockView, v2: BlockView) -> float:
    dk = v1.dim_wires
    (b1, b2), nblk = _ids(v1.bkey, v2.bkey)
    (r1, r2), _ = _ids(v1.rkey, v2.rkey)
    rl, n_rows = _local_index(np.concatenate([b1, b2]), np.concatenate([r1, r2]), nblk)
    rl1, rl2 = rl[:len(b1)], rl[len(b1):]
    (g1,), _ = _ids(v1.gkey)
    (g2,), _ = _ids(v2.gkey)
    gl1, n_g1 = _local_index(b1, g1, nblk)
    gl2, n_g2 = _local_index(b2, g2, nblk)
    dt1, dt2 = v1.vec.shape[2], v2.vec.shape[2]
    sig = np.stack([n_rows, n_g1, n_g2], axis=1)
    sigs, sig_inv = np.unique(sig, axis=0, return_inverse=True)
    sig_inv = sig_inv.reshape(-1)
    total = 0.0
    for si, (nr, ng1, ng2) in enumerate(sigs):
        blocks = np.nonzero(sig_inv == si)[0]
        m = len(blocks)
        pos = np.full(nblk, -1, dtype=np.int64)
        pos[blocks] = np.arange(m)
        n = int(nr) * dk
        if n * (int(ng1) * dt1 + int(ng2) * dt2) > SPARSE_CELLS and m:
            if n > MAX_BLOCK:
                raise ViewTooLarge(f"view block of dimension {n} exceeds {MAX_BLOCK}")
            for k, blk in enumerate(blocks):
                s1 = np.nonzero(b1 == blk)[0]
                s2 = np.nonzero(b2 == blk)[0]
                g = (_gram_sparse(v1.vec[s1], rl1[s1], gl1[s1], n, int(ng1) * dt1)
                     - _gram_sparse(v2.vec[s2], rl2[s2], gl2[s2], n, int(ng2) * dt2))
                total += _batched_diff_norm_from_matrix(g.toarray()[None])
            continue
        f1 = np.zeros((m, int(nr), dk, int(ng1), dt1), dtype=complex)
        f2 = np.zeros((m, int(nr), dk, int(ng2), dt2), dtype=complex)
        s1 = pos[b1] >= 0
        s2 = pos[b2] >= 0
        f1[pos[b1[s1]], rl1[s1], :, gl1[s1], :] = v1.vec[s1]
        f2[pos[b2[s2]], rl2[s2], :, gl2[s2], :] = v2.vec[s2]
        f1 = f1.reshape(m, n, int(ng1) * dt1)
        f2 = f2.reshape(m, n, int(ng2) * dt2)
        total += _batched_diff_norm(f1, f2)
    return total


def _batched_diff_norm(f1: np.ndarray, f2: np.ndarray) -> float:
    """sum_k || F1_k F1_k^+ - F2_k F2_k^+ ||_1 over a stack of blocks.

    Exact, except that a total below ``NEGLIGIBLE`` may be an upper bound.
    """
    m, n, c1 = f1.shape
    c2 = f2.shape[2]
    c = c1 + c2
    if c == 0 or m == 0:
        return 0.0
    total = 0.0
    # keep the work arrays to a few hundred MB
    inner = min(n, c)
    chunk = max(1, int(2e7 // max(1, inner * inner + n * c)))
    for lo in range(0, m, chunk):
        a, b = f1[lo:lo + chunk], f2[lo:lo + chunk]
        if c < n:
            # W S W^+ = Q (R S R^+) Q^+ with W = QR; the small factor has the
            # same nonzero spectrum and QR stays accurate near zero
            _, r = np.linalg.qr(np.concatenate([a, b], axis=2))
            ra, rb = r[:, :, :c1], r[:, :, c1:]
            mat = ra @ np.conj(np.swapaxes(ra, 1, 2)) - rb @ np.conj(np.swapaxes(rb, 1, 2))
        else:
            mat = a @ np.conj(np.swapaxes(a, 1, 2)) - b @ np.conj(np.swapaxes(b, 1, 2))
        total += _batched_diff_norm_from_matrix(mat, inner)
    return total


def _batched_diff_norm_from_matrix(mat: np.ndarray, inner: int | None = None) -> float:
    """sum_k ||M_k||_1 for a stack of (nearly) Hermitian matrices of rank <= inner."""
    inner = mat.shape[1] if inner is None else inner
    mat = (mat + np.conj(np.swapaxes(mat, 1, 2))) / 2
    # ||M||_1 <= sqrt(rank) ||M||_F: when that is already negligible the
    # bound is reported instead of paying for the eigensolver
    bound = float(np.sqrt(inner) * np.linalg.norm(mat.reshape(mat.shape[0], -1), axis=1).sum())
    if bound < NEGLIGIBLE:
        return bound
    return float(np.abs(np.linalg.eigvalsh(mat)).sum())

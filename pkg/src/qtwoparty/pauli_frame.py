"""Key shares of the shared one-time pad and their per-gate update rules.

Each party P holds a pair (x, z) per wire w; the pad on w is
X^(x_A ^ x_B) Z^(z_A ^ z_B). The update functions only use ``^`` and ``&``, so
a KeyPair may carry plain ints or equally shaped integer arrays (the protocol
engine feeds it one column entry per branch).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np


class KeyPair(NamedTuple):
    x: int
    z: int

    def __xor__(self, other):  # componentwise, unlike tuple concatenation
        return KeyPair(self.x ^ other[0], self.z ^ other[1])

    def as_bits(self) -> tuple[int, int]:
        return int(self.x), int(self.z)


ZERO = KeyPair(0, 0)


def _bit(v) -> int:
    v = int(v)
    if v not in (0, 1):
        raise ValueError(f"key bit must be 0 or 1, got {v}")
    return v


@dataclass
class KeyTable:
    """One party's shares, with a generation counter bumped on each update."""

    party: str
    keys: dict[str, KeyPair] = field(default_factory=dict)
    generation: int = 0

    def __getitem__(self, w: str) -> KeyPair:
        try:
            return self.keys[w]
        except KeyError:
            raise KeyError(f"no key for wire {w!r} in table {self.party}") from None

    def set(self, w: str, k) -> None:
        if w not in self.keys:
            raise KeyError(f"no key for wire {w!r} in table {self.party}")
        self.keys[w] = KeyPair(_bit(k[0]), _bit(k[1]))

    def bump(self) -> None:
        self.generation += 1

    def to_json(self) -> dict:
        return {"party": self.party, "generation": self.generation,
                "keys": {w: list(k.as_bits()) for w, k in sorted(self.keys.items())}}

    @classmethod
    def from_json(cls, d: Mapping) -> "KeyTable":
        return cls(d["party"], {w: KeyPair(*v) for w, v in d["keys"].items()}, d.get("generation", 0))


def init_keys(wires: Iterable[str]) -> tuple[KeyTable, KeyTable]:
    wires = list(wires)
    return (KeyTable("A", {w: ZERO for w in wires}),
            KeyTable("B", {w: ZERO for w in wires}))


def update_h(k: KeyPair) -> KeyPair:
    return KeyPair(k[1], k[0])


def update_p(k: KeyPair) -> KeyPair:
    return KeyPair(k[0], k[0] ^ k[1])


def update_pauli(k: KeyPair) -> KeyPair:
    return KeyPair(k[0], k[1])


def update_single(gate: str, k: KeyPair) -> KeyPair:
    if gate == "H":
        return update_h(k)
    if gate == "P":
        return update_p(k)
    if gate in ("X", "Y", "Z"):
        return update_pauli(k)
    raise ValueError(f"no local key rule for gate {gate}")


def update_cnot_local(kc: KeyPair, kt: KeyPair) -> tuple[KeyPair, KeyPair]:
    """Shares after CNOT(c -> t): X spreads c -> t, Z spreads t -> c."""
    return KeyPair(kc[0], kc[1] ^ kt[1]), KeyPair(kt[0] ^ kc[0], kt[1])


def cnot_control_share(kc: KeyPair, kt: KeyPair, a_x, a_z) -> tuple[KeyPair, KeyPair]:
    """Control holder's new shares on (c, t) after the teleported CNOT."""
    c, t = update_cnot_local(kc, kt)
    return KeyPair(c[0] ^ a_x, c[1] ^ a_z), KeyPair(t[0] ^ a_x, t[1])


def cnot_target_share(kc: KeyPair, kt: KeyPair, b_x, b_z) -> tuple[KeyPair, KeyPair]:
    """Target holder's new shares on (c, t) after the teleported CNOT."""
    c, t = update_cnot_local(kc, kt)
    return KeyPair(c[0], c[1] ^ b_z), KeyPair(t[0] ^ b_x, t[1] ^ b_z)


def update_cnot_nonlocal(kA_w, kB_w, kA_w2, kB_w2, a_x, a_z, b_x, b_z):
    """Four shares after the nonlocal CNOT, A holding the control w.

    Prior shares are first pushed through the CNOT map, then the Bell
    outcomes are folded in. With all prior shares zero this reduces to the
    familiar table A_w ^= (a_x, a_z), B_w ^= (0, b_z), A_w' ^= (a_x, 0),
    B_w' ^= (b_x, b_z).
    """
    nA_w, nA_w2 = cnot_control_share(kA_w, kA_w2, a_x, a_z)
    nB_w, nB_w2 = cnot_target_share(kB_w, kB_w2, b_x, b_z)
    return nA_w, nB_w, nA_w2, nB_w2


def r_owner_share(k: KeyPair, r, r_prime, alpha) -> KeyPair:
    return KeyPair(r ^ k[0], r_prime ^ alpha ^ k[1] ^ k[0])


def r_helper_share(k: KeyPair, s, s_prime, beta) -> KeyPair:
    return KeyPair(s ^ k[0], s_prime ^ beta ^ k[1] ^ k[0])


def update_r(kA: KeyPair, kB: KeyPair, r, r_prime, s, s_prime, alpha, beta) -> tuple[KeyPair, KeyPair]:
    """Shares after the R subprotocol with A as the owner of the wire."""
    return r_owner_share(kA, r, r_prime, alpha), r_helper_share(kB, s, s_prime, beta)


def combined_key(table_a: KeyTable, table_b: KeyTable, w: str) -> KeyPair:
    return table_a[w] ^ table_b[w]


def keys_to_bits(keys: Mapping[str, KeyPair], wires: Iterable[str]) -> np.ndarray:
    """Flatten shares into x0 z0 x1 z1 ... in the given wire order."""
    return np.array([b for w in wires for b in KeyPair(*keys[w]).as_bits()], dtype=np.uint8)


def bits_to_keys(bits, wires: Iterable[str]) -> dict[str, KeyPair]:
    wires = list(wires)
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < 2 * len(wires):
        raise ValueError("too few bits for the wire list")
    return {w: KeyPair(int(bits[2 * i]), int(bits[2 * i + 1])) for i, w in enumerate(wires)}

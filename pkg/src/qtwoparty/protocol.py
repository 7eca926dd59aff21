"""Two-party runtime for private evaluation of a circuit under a shared pad.

A run is a fixed script of steps. Each step is a list of local actions
followed by at most one oracle call (a channel in either direction, the AND
box, or the SWAP used to release keys); the final step is local only.
Parties are objects whose hook methods implement the local actions, so an
adversary is simply a party with some hooks replaced.

Naming inside the register: the input wire ``w`` keeps its label; the
teleportation resource of gate j lives on ``g{j}.xi1`` .. ``g{j}.xi4``; bits
are ``g{j}.ax`` etc. Key shares are the bit columns ``kA.x.<w>``,
``kA.z.<w>`` and likewise for B.
"""
from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .branches import ENV, REF, BranchState, BlockView, OwnershipError
from .circuit_io import Circuit, OracleCounts, validate
from .gate_algebra import GateKind, matrix_of
from .pauli_frame import (KeyPair, KeyTable, cnot_control_share, cnot_target_share,
                          r_helper_share, r_owner_share, update_cnot_local, update_single)
from .qstate import DensityOperator, PureState, apply_unitary, bell_vector, purify, trace_distance

X_M, Z_M, P_M = matrix_of("X"), matrix_of("Z"), matrix_of("P")
RNG_STREAMS = ("A", "B", "box", ENV)


def other(party: str) -> str:
    return "B" if party == "A" else "A"


def xi_vector() -> np.ndarray:
    """(I (x) CNOT (x) I) |Psi00>|Psi00> on (xi1, xi2, xi3, xi4)."""
    v = np.kron(bell_vector(0, 0), bell_vector(0, 0))
    u = np.kron(np.kron(np.eye(2), matrix_of("CNOT")), np.eye(2))
    return u @ v


# --- script -----------------------------------------------------------------

class OracleKind(str, enum.Enum):
    CHANNEL_AB = "ChannelAtoB"
    CHANNEL_BA = "ChannelBtoA"
    SWAP = "SWAP"
    AND_BOX = "ANDBox"

    @classmethod
    def channel(cls, sender: str) -> "OracleKind":
        return cls.CHANNEL_AB if sender == "A" else cls.CHANNEL_BA


@dataclass(frozen=True)
class OracleCall:
    kind: OracleKind
    wires: tuple[str, ...] = ()      # logical labels or physical names
    gate: int | None = None
    phase: str = "evaluation"
    first: str = "A"                 # AND box: party whose input is x

    @property
    def sender(self) -> str | None:
        return {OracleKind.CHANNEL_AB: "A", OracleKind.CHANNEL_BA: "B"}.get(self.kind)


@dataclass(frozen=True)
class Action:
    party: str
    hook: str
    gate: int | None = None


@dataclass
class Step:
    index: int
    actions: list[Action]
    oracle: OracleCall | None

    @property
    def phase(self) -> str:
        if self.oracle is None:
            return "final"
        return self.oracle.phase


def compile_script(circuit: Circuit, release: str = "swap", first_announcer: str = "B") -> list[Step]:
    items: list = []
    for j, g in enumerate(circuit.gates, start=1):
        if g.kind is GateKind.CNOT and circuit.is_nonlocal(g):
            c = circuit.owner[g.wires[0]]
            t = other(c)
            items += [Action(c, "cnot_prepare", j),
                      OracleCall(OracleKind.channel(c), (f"g{j}.xi3", f"g{j}.xi4"), j),
                      Action(c, "cnot_control", j), Action(t, "cnot_target", j)]
        elif g.kind is GateKind.R:
            p = circuit.owner[g.wires[0]]
            q = other(p)
            w = g.wires[0]
            items += [Action(p, "r_start", j), OracleCall(OracleKind.channel(p), (w,), j),
                      Action(q, "r_helper", j), OracleCall(OracleKind.channel(q), (w,), j),
                      Action(p, "r_and_input", j), Action(q, "r_and_input", j),
                      OracleCall(OracleKind.AND_BOX, (), j, first=p),
                      Action(p, "r_finish", j), Action(q, "r_finish", j)]
        else:
            p = circuit.owner[g.wires[0]]
            items += [Action(p, "local_gate", j), Action("A", "track_local", j),
                      Action("B", "track_local", j)]
    if release == "swap":
        items += [Action("A", "release_prepare"), Action("B", "release_prepare"),
                  OracleCall(OracleKind.SWAP, phase="release")]
    elif release == "naive":
        f, s = first_announcer, other(first_announcer)
        items += [Action(f, "release_prepare"), OracleCall(OracleKind.channel(f), phase="release"),
                  Action(s, "release_prepare"), OracleCall(OracleKind.channel(s), phase="release")]
    else:
        raise ValueError(f"unknown release mode {release!r}")
    items += [Action("A", "decrypt"), Action("B", "decrypt")]

    steps, acts = [], []
    for it in items:
        if isinstance(it, OracleCall):
            steps.append(Step(len(steps) + 1, acts, it))
            acts = []
        else:
            acts.append(it)
    steps.append(Step(len(steps) + 1, acts, None))
    return steps


# --- parties ----------------------------------------------------------------

class HonestParty:
    """The honest strategy. Subclasses override hooks to deviate."""

    purified = False
    role = "honest"

    def __init__(self, name: str):
        if name not in ("A", "B"):
            raise ValueError("party must be 'A' or 'B'")
        self.name = name
        self.residue: list[str] = []
        self.updates = 0

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    # helpers
    @property
    def other(self) -> str:
        return other(self.name)

    @property
    def holders(self) -> set[str]:
        return {self.name} if self.purified else {self.name, ENV}

    def _record(self, names: Sequence[str]) -> None:
        self.residue += list(names)

    def kname(self, w: str, c: str) -> str:
        return f"k{self.name}.{c}.{w}"

    def key(self, st: BranchState, w: str) -> KeyPair:
        return KeyPair(st.col(self.kname(w, "x")).copy(), st.col(self.kname(w, "z")).copy())

    def set_key(self, st: BranchState, w: str, k) -> None:
        st.assign({self.kname(w, "x"): k[0], self.kname(w, "z"): k[1]})

    def act(self, rt: "Execution", action: Action) -> None:
        getattr(self, action.hook)(rt, action.gate)

    def begin(self, rt: "Execution") -> None:
        pass

    # local gates
    def local_gate(self, rt, j):
        g = rt.gate(j)
        st = rt.state
        st.apply(matrix_of(g.kind), [st.phys(w) for w in g.wires], actor=self.name)

    def track_local(self, rt, j):
        g = rt.gate(j)
        st = rt.state
        if g.kind is GateKind.CNOT:
            c, t = g.wires
            kc, kt = update_cnot_local(self.key(st, c), self.key(st, t))
            self.set_key(st, c, kc)
            self.set_key(st, t, kt)
        elif not g.kind.is_pauli:
            w = g.wires[0]
            self.set_key(st, w, update_single(g.name, self.key(st, w)))
        self.updates += 1

    # nonlocal CNOT
    def cnot_prepare(self, rt, j):
        rt.state.add_wires([f"g{j}.xi{k}" for k in range(1, 5)], self.name, xi_vector())

    def cnot_control(self, rt, j):
        st = rt.state
        c, t = rt.gate(j).wires
        names = [f"g{j}.ax", f"g{j}.az"]
        st.bell_measure(st.phys(c), f"g{j}.xi1", *names, self.holders, self.name, actor=self.name)
        self._record(names)
        st.logical[c] = f"g{j}.xi2"
        kc, kt = cnot_control_share(self.key(st, c), self.key(st, t), st.col(names[0]), st.col(names[1]))
        self.set_key(st, c, kc)
        self.set_key(st, t, kt)
        self.updates += 1

    def cnot_target(self, rt, j):
        st = rt.state
        c, t = rt.gate(j).wires
        names = [f"g{j}.bx", f"g{j}.bz"]
        st.bell_measure(st.phys(t), f"g{j}.xi4", *names, self.holders, self.name, actor=self.name)
        self._record(names)
        st.logical[t] = f"g{j}.xi3"
        kc, kt = cnot_target_share(self.key(st, c), self.key(st, t), st.col(names[0]), st.col(names[1]))
        self.set_key(st, c, kc)
        self.set_key(st, t, kt)
        self.updates += 1

    # R gate
    def r_start(self, rt, j):
        st = rt.state
        w = rt.gate(j).wires[0]
        ph = st.phys(w)
        st.apply(matrix_of("R"), [ph], actor=self.name)
        names = [f"g{j}.r", f"g{j}.rp"]
        st.coin(names, self.holders, self.name)
        self._record(names)
        st.apply(P_M, [ph], mask=self.key(st, w).x, actor=self.name)
        st.apply(X_M, [ph], mask=st.col(names[0]), actor=self.name)
        st.apply(Z_M, [ph], mask=st.col(names[1]), actor=self.name)

    def r_helper(self, rt, j):
        st = rt.state
        w = rt.gate(j).wires[0]
        ph = st.phys(w)
        names = [f"g{j}.s", f"g{j}.sp"]
        st.coin(names, self.holders, self.name)
        self._record(names)
        st.apply(P_M, [ph], mask=self.key(st, w).x, actor=self.name)
        st.apply(X_M, [ph], mask=st.col(names[0]), actor=self.name)
        st.apply(Z_M, [ph], mask=st.col(names[1]), actor=self.name)

    def _is_r_owner(self, rt, j) -> bool:
        return rt.circuit.owner[rt.gate(j).wires[0]] == self.name

    def r_and_input(self, rt, j):
        st = rt.state
        w = rt.gate(j).wires[0]
        v = self.key(st, w).x
        if self._is_r_owner(rt, j):
            v = v ^ st.col(f"g{j}.r")
        nm = f"g{j}.in.{self.name}"
        st.new_bit(nm, v, {self.name})
        rt.post(self.name, [nm])

    def r_finish(self, rt, j):
        st = rt.state
        w = rt.gate(j).wires[0]
        k = self.key(st, w)
        if self._is_r_owner(rt, j):
            nk = r_owner_share(k, st.col(f"g{j}.r"), st.col(f"g{j}.rp"), st.col(f"g{j}.alpha"))
        else:
            nk = r_helper_share(k, st.col(f"g{j}.s"), st.col(f"g{j}.sp"), st.col(f"g{j}.beta"))
        self.set_key(st, w, nk)
        self.updates += 1

    # key release
    def release_prepare(self, rt, _j=None):
        st = rt.state
        theirs = rt.circuit.wires_of(self.other)
        names, vals = [], []
        for w in theirs:
            k = self.key(st, w)
            names += [f"rel.{self.name}.x.{w}", f"rel.{self.name}.z.{w}"]
            vals += [k.x, k.z]
        width = 2 * max(len(rt.circuit.wires_of("A")), len(rt.circuit.wires_of("B")))
        for i in range(width - len(names)):
            names.append(f"rel.{self.name}.pad{i}")
            vals.append(np.zeros(st.n_branches, dtype=np.uint8))
        if names:
            st.new_bits(names, np.stack(vals, axis=1), {self.name})
        rt.post(self.name, names)

    def combined(self, st: BranchState, w: str) -> KeyPair:
        k = self.key(st, w)
        return KeyPair(k.x ^ st.col(f"rel.{self.other}.x.{w}"), k.z ^ st.col(f"rel.{self.other}.z.{w}"))

    def decrypt(self, rt, _j=None):
        st = rt.state
        for w in rt.circuit.wires_of(self.name):
            k = self.combined(st, w)
            ph = st.phys(w)
            st.apply(X_M, [ph], mask=k.x, actor=self.name)
            st.apply(Z_M, [ph], mask=k.z, actor=self.name)

    def undo_decrypt(self, rt, _j=None):
        st = rt.state
        for w in rt.circuit.wires_of(self.name):
            k = self.combined(st, w)
            ph = st.phys(w)
            st.apply(Z_M, [ph], mask=k.z, actor=self.name)
            st.apply(X_M, [ph], mask=k.x, actor=self.name)

    # adversary interface; the honest party needs no transcript map
    def transcript_map(self, rt, step: int) -> None:
        """T_i: bring the working state to the honest form (in place)."""

    def final_map(self, rt) -> None:
        """T for the last step, as an isometry with a residue holder."""

    def final_map_inverse(self, rt) -> None:
        pass

    @property
    def final_isometric(self) -> bool:
        return True


# --- oracles, execution -----------------------------------------------------

def _and_box(st: BranchState, owner: str, gate: int) -> None:
    """Measure both inputs, draw a, hand a to ``owner`` and a^(x&y) to the other."""
    q = other(owner)
    xin, yin = f"g{gate}.in.{owner}", f"g{gate}.in.{q}"
    st.give([xin, yin], {ENV})
    alpha, beta = f"g{gate}.alpha", f"g{gate}.beta"
    st.coin([alpha], {owner, ENV}, "box")
    st.new_bit(beta, st.col(alpha) ^ (st.col(xin) & st.col(yin)), {q, ENV})


def and_box_bits(x: int, y: int, rng: np.random.Generator) -> tuple[int, int]:
    a = int(rng.integers(0, 2))
    return a, a ^ (int(x) & int(y))


@dataclass
class Snapshot:
    step: int
    state: BranchState
    parties: dict
    outbox: dict

    def view(self, keep: Iterable[str], reference: bool = True) -> BlockView:
        return self.state.view(keep, reference)


@dataclass
class StepRecord:
    index: int
    phase: str
    actions: list[tuple[str, str, int | None]]
    oracle: dict | None
    outcomes: dict[str, int] | None
    keys: dict[str, dict] | None
    message_distance: float | None = None
    snapshot: Snapshot | None = None

    def to_json(self) -> dict:
        return {"index": self.index, "phase": self.phase,
                "actions": [list(a) for a in self.actions], "oracle": self.oracle,
                "outcomes": self.outcomes, "keys": self.keys,
                "message_distance": self.message_distance}


@dataclass
class Transcript:
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def counts(self) -> OracleCounts:
        kinds = [s.oracle["kind"] for s in self.steps if s.oracle]
        ch = sum(k in (OracleKind.CHANNEL_AB.value, OracleKind.CHANNEL_BA.value) for k in kinds)
        return OracleCounts(ch, kinds.count(OracleKind.AND_BOX.value), kinds.count(OracleKind.SWAP.value))

    def outcome_sequence(self) -> list[tuple[str, int]]:
        return [(k, v) for s in self.steps for k, v in (s.outcomes or {}).items()]

    def to_json(self) -> dict:
        return {"n_steps": self.n_steps, "counts": self.counts().as_dict(),
                "steps": [s.to_json() for s in self.steps]}


class Execution:
    """One run: the register, the two parties, and a cursor into the script."""

    def __init__(self, circuit: Circuit, script: list[Step], parties: dict, state: BranchState,
                 snapshots: bool = False, check_messages: bool = False):
        self.circuit = circuit
        self.script = script
        self.parties = parties
        self.state = state
        self.done = 0
        self.outbox: dict[str, list[str]] = {"A": [], "B": []}
        self.transcript = Transcript()
        self.snapshots = snapshots
        self.check_messages = check_messages
        self.initial: Snapshot | None = self.snapshot() if snapshots else None

    def gate(self, j: int):
        return self.circuit.gates[j - 1]

    def post(self, party: str, names: Sequence[str]) -> None:
        self.outbox[party] += list(names)

    @property
    def finished(self) -> bool:
        return self.done == len(self.script)

    def snapshot(self) -> Snapshot:
        return Snapshot(self.done, self.state.copy(), copy.deepcopy(self.parties), copy.deepcopy(self.outbox))

    def restore(self, snap: Snapshot) -> None:
        self.done = snap.step
        self.state = snap.state.copy()
        self.parties = copy.deepcopy(snap.parties)
        self.outbox = copy.deepcopy(snap.outbox)

    def fork(self) -> "Execution":
        ex = copy.copy(self)
        ex.transcript = Transcript(list(self.transcript.steps))
        ex.restore(self.snapshot())
        return ex

    def _oracle(self, oc: OracleCall) -> dict:
        st = self.state
        info = {"kind": oc.kind.value, "gate": oc.gate, "phase": oc.phase}
        if oc.kind in (OracleKind.CHANNEL_AB, OracleKind.CHANNEL_BA):
            s, r = oc.sender, other(oc.sender)
            phys = [st.phys(w) for w in oc.wires]
            st.require(s, phys)
            if self.check_messages and phys and st.exact:
                rho = st.reduced_density(phys)
                info["message_distance"] = trace_distance(rho, DensityOperator.maximally_mixed(phys))
            st.move(phys, r)
            bits = self.outbox[s]
            self.outbox[s] = []
            for b in bits:
                st.give([b], (st.holders[b] - {s}) | {r})
            info.update(wires=phys, bits=bits)
        elif oc.kind is OracleKind.SWAP:
            a, b = self.outbox["A"], self.outbox["B"]
            if len(a) != len(b):
                raise RuntimeError(f"SWAP registers differ in size: {len(a)} vs {len(b)}")
            self.outbox = {"A": [], "B": []}
            st.give(a, {"B"})
            st.give(b, {"A"})
            info.update(bits={"A": a, "B": b}, width=len(a))
        elif oc.kind is OracleKind.AND_BOX:
            a, b = self.outbox["A"], self.outbox["B"]
            if len(a) != 1 or len(b) != 1:
                raise RuntimeError("the AND box takes exactly one bit from each side")
            self.outbox = {"A": [], "B": []}
            _and_box(st, oc.first, oc.gate)
            info.update(bits={"x": f"g{oc.gate}.in.{oc.first}", "y": f"g{oc.gate}.in.{other(oc.first)}"})
        return info

    def begin(self) -> None:
        for p in self.parties.values():
            p.begin(self)

    def step(self) -> StepRecord:
        if self.finished:
            raise RuntimeError("the script is finished")
        s = self.script[self.done]
        nbits = len(self.state.bits)
        for a in s.actions:
            self.parties[a.party].act(self, a)
        info = self._oracle(s.oracle) if s.oracle is not None else None
        self.done += 1
        st = self.state
        outcomes = keys = None
        if not st.exact:
            outcomes = {b: st.value(b) for b in st.bits[nbits:]}
            keys = {}
            for p in ("A", "B"):
                t = KeyTable(p, {w: KeyPair(st.value(f"k{p}.x.{w}"), st.value(f"k{p}.z.{w}"))
                                 for w in self.circuit.wires}, self.parties[p].updates)
                keys[p] = t.to_json()
        rec = StepRecord(s.index, s.phase, [(a.party, a.hook, a.gate) for a in s.actions], info,
                         outcomes, keys, None if info is None else info.get("message_distance"),
                         self.snapshot() if self.snapshots else None)
        self.transcript.steps.append(rec)
        return rec

    def run(self, upto: int | None = None) -> "Execution":
        """Run steps until ``upto`` steps are done (default: to the end)."""
        upto = len(self.script) if upto is None else upto
        while self.done < upto:
            self.step()
        return self

    def replay(self, snap: Snapshot) -> Snapshot:
        """Recompute the snapshot after the step following ``snap``."""
        ex = copy.copy(self)
        ex.transcript = Transcript()
        ex.snapshots = False
        ex.restore(snap)
        ex.step()
        return ex.snapshot()

    # outputs
    def carriers(self) -> dict[str, str]:
        return {w: self.state.phys(w) for w in self.circuit.wires}

    def output_density(self, order: Sequence[str]) -> DensityOperator:
        """Reduced state on logical wires (and any live R wires) in ``order``."""
        phys = [self.state.phys(w) if w in self.circuit.owner else w for w in order]
        rho = self.state.reduced_density(phys)
        return DensityOperator(rho.matrix, list(order), check=False)


def make_rngs(seed: int | None) -> dict[str, np.random.Generator] | None:
    if seed is None:
        return None
    seqs = np.random.SeedSequence(int(seed) & (2 ** 64 - 1)).spawn(len(RNG_STREAMS))
    return {k: np.random.default_rng(s) for k, s in zip(RNG_STREAMS, seqs)}


def initial_state(circuit: Circuit, psi: PureState | DensityOperator, rngs=None,
                  hide: Iterable[str] = ()) -> BranchState:
    """Register holding the input; wires outside the circuit become R.

    Wires listed in ``hide`` may be absent from ``psi``; if present they go
    to the environment. Either way they get no carrier (used by simulators
    that must not touch the honest party's input).
    """
    if isinstance(psi, DensityOperator):
        psi = purify(psi, prefix="env.in")
    hide = set(hide)
    missing = [w for w in circuit.wires if w not in psi.wires and w not in hide]
    if missing:
        raise ValueError(f"input state lacks circuit wire(s) {missing}")
    owners = {}
    for w in psi.wires:
        if w in hide or w.startswith("env.in"):
            owners[w] = ENV
        elif w in circuit.owner:
            owners[w] = circuit.owner[w]
        else:
            owners[w] = REF
    st = BranchState(rngs=rngs)
    st.add_pure(psi, owners)
    for w in circuit.wires:
        st.logical[w] = None if w in hide else w
    for p in ("A", "B"):
        names = [f"k{p}.{c}.{w}" for w in circuit.wires for c in ("x", "z")]
        if names:
            st.new_bits(names, np.zeros((1, len(names)), dtype=np.uint8), {p})
    return st


@dataclass
class ProtocolConfig:
    circuit: Circuit
    seed: int | None = 0
    snapshot_policy: str = "none"
    tolerance: float = 1e-9
    release: str = "swap"
    first_announcer: str = "B"
    exact: bool = False
    check_messages: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.snapshot_policy not in ("all", "none"):
            raise ValueError("snapshot_policy is 'all' or 'none'")
        if self.release not in ("swap", "naive"):
            raise ValueError("release is 'swap' or 'naive'")
        if self.first_announcer not in ("A", "B"):
            raise ValueError("first_announcer is 'A' or 'B'")

    def script(self) -> list[Step]:
        return compile_script(self.circuit, self.release, self.first_announcer)


def make_execution(cfg: ProtocolConfig, psi, alice: HonestParty | None = None,
                   bob: HonestParty | None = None, hide: Iterable[str] = ()) -> Execution:
    diag = validate(cfg.circuit)
    if not diag.ok:
        raise ValueError("; ".join(diag.errors))
    rngs = None if cfg.exact else make_rngs(cfg.seed if cfg.seed is not None else 0)
    st = initial_state(cfg.circuit, psi, rngs, hide)
    parties = {"A": alice or HonestParty("A"), "B": bob or HonestParty("B")}
    for k, p in parties.items():
        if p.name != k:
            raise ValueError(f"party object for {k} is named {p.name}")
    ex = Execution(cfg.circuit, cfg.script(), parties, st,
                   snapshots=cfg.snapshot_policy == "all", check_messages=cfg.check_messages)
    ex.begin()
    return ex


def run_protocol(cfg: ProtocolConfig, rho_in, alice=None, bob=None) -> tuple[DensityOperator, Transcript]:
    """Run the full protocol; returns the output state on the input's wires."""
    ex = make_execution(cfg, rho_in, alice, bob).run()
    order = [w for w in rho_in.wires if not w.startswith("env.in")]
    return ex.output_density(order), ex.transcript


# --- reference computations -------------------------------------------------

def ideal_output(circuit: Circuit, psi: PureState | DensityOperator):
    """(U (x) I_R) applied gate by gate with the dense simulator."""
    out = psi
    for g in circuit.gates:
        out = apply_unitary(out, matrix_of(g.kind), list(g.wires))
    return out


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    n = len(circuit.wires)
    cols = []
    for i in range(1 << n):
        e = np.zeros(1 << n, dtype=complex)
        e[i] = 1
        cols.append(ideal_output(circuit, PureState(e, circuit.wires)).amplitudes)
    return np.stack(cols, axis=1)


PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)


def reference_label(w: str) -> str:
    return f"r_{w}"


def input_state(circuit: Circuit, kind: str) -> PureState:
    """One of the standard inputs: 'zero', 'plus' or 'epr' (with R wires)."""
    ws = list(circuit.wires)
    if kind == "zero":
        return PureState.product([ZERO] * len(ws), ws)
    if kind == "plus":
        return PureState.product([PLUS] * len(ws), ws)
    if kind == "epr":
        psi = PureState.product([bell_vector(0, 0)] * len(ws),
                                [x for w in ws for x in (w, reference_label(w))])
        return psi.reorder(ws + [reference_label(w) for w in ws])
    raise ValueError(f"unknown input kind {kind!r}")


DEFAULT_INPUTS = ("zero", "plus", "epr")


def input_family(circuit: Circuit, kinds: Sequence[str] = DEFAULT_INPUTS) -> list[tuple[str, PureState]]:
    return [(k, input_state(circuit, k)) for k in kinds]


def random_circuit(rng: np.random.Generator, a_wires: int, b_wires: int, n_gates: int,
                   n_r: int = 0, clifford_pool=("X", "Y", "Z", "H", "P", "CNOT")) -> Circuit:
    """A random circuit with exactly ``n_r`` R gates at random positions."""
    from .circuit_io import Gate
    wires = [f"a{i}" for i in range(a_wires)] + [f"b{i}" for i in range(b_wires)]
    owner = {w: ("A" if w.startswith("a") else "B") for w in wires}
    r_pos = set(rng.choice(n_gates, size=n_r, replace=False).tolist()) if n_r else set()
    gates = []
    for i in range(n_gates):
        name = "R" if i in r_pos else str(rng.choice(list(clifford_pool)))
        if name == "CNOT" and len(wires) > 1:
            c, t = rng.choice(len(wires), size=2, replace=False)
            gates.append(Gate(GateKind.CNOT, (wires[c], wires[t])))
        else:
            if name == "CNOT":
                name = "H"
            gates.append(Gate(GateKind(name), (wires[int(rng.integers(len(wires)))],)))
    return Circuit(tuple(wires), owner, tuple(gates))


__all__ = [
    "Action", "DEFAULT_INPUTS", "Execution", "HonestParty", "OracleCall", "OracleKind", "OwnershipError",
    "ProtocolConfig", "Snapshot", "Step", "StepRecord", "Transcript", "and_box_bits",
    "circuit_unitary", "compile_script", "ideal_output", "initial_state", "input_family",
    "input_state", "make_execution", "make_rngs", "random_circuit", "run_protocol", "xi_vector",
]

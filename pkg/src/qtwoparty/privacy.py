"""Views, the constructive simulators, privacy gaps and the rushing check.

A view is the reduced state of one party (all its wires and the bits it
holds) together with the reference system R. The simulators rebuild that view
from the party's own share of the input:

* evaluation steps: the honest counterpart is replaced by
  :class:`SimulatedCounterpart`, which answers every message with fresh
  resource states and random bits and never sees the honest input;
* key-release steps: a dummy run on a fixed input is carried to the step,
  the adversary's output register is replaced by its share of the ideal
  output, and the adversary's final operations are rewound.

Every view comparison is an exact trace distance on the branch register
(no sampling).
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Sequence

from .adversary import ADVERSARIES, SpeciousnessReport, measure_speciousness, residue_holder
from .branches import ENV, REF, BlockView, BranchState
from .protocol import (Execution, HonestParty, OracleKind, ProtocolConfig, Snapshot,
                       ideal_output, input_family, input_state, make_execution, other)
from .qstate import DensityOperator, PureState, bell_vector, partial_trace, purify

EVAL_TOL = 1e-9
SLACK = 1e-9


class SimulationError(RuntimeError):
    pass


def view_of(snapshot: Snapshot | BranchState, side: str, dense: bool = False):
    """Reduced state of ``side`` plus R: the honest party's registers are traced."""
    st = snapshot.state if isinstance(snapshot, Snapshot) else snapshot
    v = st.view({side})
    return v.to_density() if dense else v


# --- evaluation phase -------------------------------------------------------

class SimulatedCounterpart(HonestParty):
    """Plays the honest side without its input.

    Each message it sends is a fresh half of an EPR pair or of the CNOT
    resource; each message it receives is thrown away; its AND-box input is a
    coin. It refuses to release keys.
    """

    role = "simulator"

    def local_gate(self, rt, j):
        pass

    def track_local(self, rt, j):
        pass

    def cnot_control(self, rt, j):
        st = rt.state
        st.discard(f"g{j}.xi1")
        st.logical[rt.gate(j).wires[0]] = f"g{j}.xi2"

    def cnot_target(self, rt, j):
        st = rt.state
        st.discard(f"g{j}.xi4")
        st.logical[rt.gate(j).wires[1]] = f"g{j}.xi3"

    def _fresh_half(self, rt, j):
        st = rt.state
        m, h = f"sim.g{j}.m", f"sim.g{j}.h"
        st.add_wires([m, h], self.name, bell_vector(0, 0))
        st.logical[rt.gate(j).wires[0]] = m

    def r_start(self, rt, j):
        self._fresh_half(rt, j)

    def r_helper(self, rt, j):
        st = rt.state
        st.discard(st.phys(rt.gate(j).wires[0]))
        self._fresh_half(rt, j)

    def r_and_input(self, rt, j):
        nm = f"g{j}.in.{self.name}"
        rt.state.coin([nm], {self.name, ENV}, self.name)
        rt.post(self.name, [nm])

    def r_finish(self, rt, j):
        pass

    def release_prepare(self, rt, _j=None):
        raise SimulationError("the evaluation simulator cannot release keys")

    def decrypt(self, rt, _j=None):
        pass


def _exact_cfg(cfg: ProtocolConfig, snapshots: bool = True) -> ProtocolConfig:
    return ProtocolConfig(cfg.circuit, None, "all" if snapshots else "none", cfg.tolerance,
                          cfg.release, cfg.first_announcer, exact=True)


def _with(side: str, adv: HonestParty, counterpart: HonestParty) -> dict:
    return {"alice": adv, "bob": counterpart} if side == "A" else {"alice": counterpart, "bob": adv}


def adversary_share(cfg: ProtocolConfig, side: str, psi) -> DensityOperator:
    """The adversary's part of the input: everything but the honest wires."""
    hidden = set(cfg.circuit.wires_of(other(side)))
    keep = [w for w in psi.wires if w not in hidden]
    return partial_trace(psi, keep)


def receipt_step(cfg: ProtocolConfig, side: str) -> int:
    """First step at which ``side`` receives the other party's key shares."""
    for s in cfg.script():
        oc = s.oracle
        if oc is None or oc.phase != "release":
            continue
        if oc.kind is OracleKind.SWAP or oc.sender == other(side):
            return s.index
    raise ValueError("the script never releases keys")  # pragma: no cover


def q_vector(cfg: ProtocolConfig, side: str) -> list[int]:
    k = receipt_step(cfg, side)
    return [int(s.index >= k) for s in cfg.script()]


def simulated_run(adversary: HonestParty, cfg: ProtocolConfig, adv_input: DensityOperator) -> Execution:
    """The adversary against :class:`SimulatedCounterpart`, up to key release."""
    side = adversary.name
    hidden = cfg.circuit.wires_of(other(side))
    clash = [w for w in hidden if w in adv_input.wires]
    if clash:
        raise ValueError(f"the simulator must not receive the honest wires {clash}")
    ex = make_execution(_exact_cfg(cfg), adv_input, **_with(side, copy.deepcopy(adversary),
                                                              SimulatedCounterpart(other(side))),
                        hide=hidden)
    return ex.run(receipt_step(cfg, side) - 1)


def simulate_evaluation_step(i: int, adversary: HonestParty, adv_input: DensityOperator,
                             cfg: ProtocolConfig, run: Execution | None = None) -> BlockView:
    """Simulated view after step ``i`` for a step with q_i = 0."""
    side = adversary.name
    if i >= receipt_step(cfg, side):
        raise SimulationError(f"step {i} is in the key-release phase")
    run = run or simulated_run(adversary, cfg, adv_input)
    snap = run.initial if i == 0 else run.transcript.steps[i - 1].snapshot
    return view_of(snap, side)


# --- key release ------------------------------------------------------------

@dataclass
class ReleaseNote:
    isometric: bool = True


def simulate_key_release(i: int, adversary: HonestParty, cfg: ProtocolConfig,
                         ideal_share: DensityOperator, dummy: str = "zero",
                         note: ReleaseNote | None = None) -> BlockView:
    """Simulated view after step ``i`` for a step with q_i = 1.

    ``ideal_share`` is the adversary's part of (U (x) I_R) rho_in; it is the
    only input-dependent object the simulator touches.
    """
    side = adversary.name
    circ = cfg.circuit
    n = len(cfg.script())
    if i < receipt_step(cfg, side):
        raise SimulationError(f"step {i} comes before the keys are released")
    phi = input_state(circ, dummy)
    ex = make_execution(_exact_cfg(cfg, snapshots=False), phi,
                        **_with(side, copy.deepcopy(adversary), HonestParty(other(side))))
    ex.run(i)
    party = ex.parties[side]
    st = ex.state
    iso = party.final_isometric
    if note is not None:
        note.isometric = iso
    if i < n:
        party.decrypt(ex)
    if iso:
        party.final_map(ex)
    mine = circ.wires_of(side)
    for w in mine:
        ph = st.phys(w)
        st.move([ph], ENV)
        st.rename(ph, f"E.dummy.{w}")
    share = purify(ideal_share, prefix="E.ideal.env")
    owners = {}
    for w in share.wires:
        if w in mine:
            owners[w] = side
        elif w.startswith("E."):
            owners[w] = ENV
        else:
            owners[w] = REF
    named = PureState(share.amplitudes, [f"ideal.{w}" if w in mine else w for w in share.wires])
    st.add_pure(named, {(f"ideal.{w}" if w in mine else w): o for w, o in owners.items()})
    for w in mine:
        st.logical[w] = f"ideal.{w}"
    if iso:
        party.final_map_inverse(ex)
    if i < n:
        party.undo_decrypt(ex)
    return view_of(st, side)


# --- reports ----------------------------------------------------------------

@dataclass
class StepGap:
    index: int
    phase: str
    q: int
    delta: float
    per_input: dict[str, float]

    def to_json(self) -> dict:
        return {"index": self.index, "phase": self.phase, "q": self.q, "delta": self.delta,
                "per_input": self.per_input}


@dataclass
class PrivacyReport:
    side: str
    adversary: str
    release: str
    steps: list[StepGap]
    speciousness: SpeciousnessReport
    notes: list[str] = field(default_factory=list)
    eval_tolerance: float = EVAL_TOL

    @property
    def q_vector(self) -> list[int]:
        return [s.q for s in self.steps]

    @property
    def epsilon(self) -> float:
        return self.speciousness.epsilon

    @property
    def release_bound(self) -> float:
        return 24 * math.sqrt(2 * max(self.epsilon, 0.0))

    def _limit(self, s: StepGap) -> float:
        return self.eval_tolerance if s.q == 0 else self.release_bound + SLACK

    @property
    def eval_max(self) -> float:
        return max((s.delta for s in self.steps if s.q == 0), default=0.0)

    @property
    def release_max(self) -> float:
        return max((s.delta for s in self.steps if s.q == 1), default=0.0)

    @property
    def violating_steps(self) -> list[int]:
        return [s.index for s in self.steps if s.delta > self._limit(s)]

    @property
    def passed(self) -> bool:
        return not self.violating_steps

    def to_json(self) -> dict:
        return {"side": self.side, "adversary": self.adversary, "release": self.release,
                "q_vector": self.q_vector, "steps": [s.to_json() for s in self.steps],
                "eval_max": self.eval_max, "release_max": self.release_max,
                "epsilon": self.epsilon, "release_bound": self.release_bound,
                "violating_steps": self.violating_steps,
                "first_violation": (self.violating_steps or [None])[0],
                "notes": self.notes, "pass": self.passed}


def privacy_gap(cfg: ProtocolConfig, adversary: HonestParty,
                inputs: Sequence[tuple[str, PureState]] | None = None,
                phase: str = "all", dummy: str = "zero") -> PrivacyReport:
    """delta_i for every step of the chosen phase, maximized over the inputs.

    Steps before the adversary receives the other side's keys use the
    evaluation simulator (q = 0), later ones the key-release simulator (q = 1).
    """
    if phase not in ("eval", "release", "all"):
        raise ValueError("phase is 'eval', 'release' or 'all'")
    side = adversary.name
    inputs = list(inputs) if inputs is not None else input_family(cfg.circuit)
    script = cfg.script()
    qv = q_vector(cfg, side)
    wanted = [s for s, q in zip(script, qv)
              if phase == "all" or (phase == "eval") == (q == 0)]
    per: dict[int, dict[str, float]] = {s.index: {} for s in wanted}
    notes: set[str] = set()
    for name, psi in inputs:
        real = make_execution(_exact_cfg(cfg), psi,
                              **_with(side, copy.deepcopy(adversary), HonestParty(other(side)))).run()
        views = {r.index: view_of(r.snapshot, side) for r in real.transcript.steps}
        sim = None
        if any(q == 0 for q in qv) and phase != "release":
            sim = simulated_run(adversary, cfg, adversary_share(cfg, side, psi))
        share = None
        for s in wanted:
            i = s.index
            if qv[i - 1] == 0:
                nu = simulate_evaluation_step(i, adversary, None, cfg, run=sim)
            else:
                if share is None:
                    share = adversary_share(cfg, side, ideal_output(cfg.circuit, psi))
                rn = ReleaseNote()
                nu = simulate_key_release(i, adversary, cfg, share, dummy, rn)
                if not rn.isometric:
                    notes.add(f"step {i}: the adversary's pending operation is not an isometry; "
                              "the simulator rewinds the decryption only")
            per[i][name] = views[i].distance(nu)
    spec = measure_speciousness(adversary, cfg, inputs)
    steps = [StepGap(s.index, s.phase, qv[s.index - 1], max(per[s.index].values(), default=0.0),
                     per[s.index]) for s in wanted]
    notes.add("simulators are the constructive ones for this protocol; a failing step means no "
              "simulator of this family matches, not that none exists")
    return PrivacyReport(side, adversary.role, cfg.release, steps, spec, sorted(notes))


# --- rushing ----------------------------------------------------------------

@dataclass
class RushingReport:
    deviation: dict[str, float]
    residue_spread: float
    epsilon: float

    @property
    def delta_rush(self) -> float:
        return max(self.deviation.values(), default=0.0)

    @property
    def bound(self) -> float:
        return 12 * math.sqrt(2 * max(self.epsilon, 0.0))

    @property
    def passed(self) -> bool:
        return self.delta_rush <= self.bound + SLACK and self.residue_spread <= self.bound + SLACK

    def to_json(self) -> dict:
        return {"delta_rush": self.delta_rush, "per_input": self.deviation,
                "residue_spread": self.residue_spread, "epsilon": self.epsilon,
                "bound": self.bound, "pass": self.passed}


def _strip_outputs(st: BranchState, circ, psi: PureState, tag: str) -> None:
    """Hand the outputs and R of a finished run to the environment."""
    for w in circ.wires:
        ph = st.phys(w)
        st.move([ph], ENV)
        st.rename(ph, f"E.{tag}.{w}")
        st.logical[w] = None
    for w in psi.wires:
        if w not in circ.owner and w in st.owner:
            st.move([w], ENV)
            st.rename(w, f"E.{tag}.{w}")


def rushing_check(adversary: HonestParty, cfg: ProtocolConfig,
                  inputs: Sequence[tuple[str, PureState]] | None = None) -> RushingReport:
    """Distance of (T (x) I)(final state) from rho~ (x) (U (x) I_R) rho_in.

    rho~ is the residue of the first input's run; the check also reports how
    far the residues of the other inputs are from it.
    """
    side = adversary.name
    circ = cfg.circuit
    inputs = list(inputs) if inputs is not None else input_family(circ)
    keep = {"A", "B", residue_holder(side)}
    ref_state = None
    residue_1 = None
    dev, spread = {}, 0.0
    for name, psi in inputs:
        ex = make_execution(_exact_cfg(cfg, snapshots=False), psi,
                            **_with(side, copy.deepcopy(adversary), HonestParty(other(side)))).run()
        ex.parties[side].final_map(ex)
        real = ex.state.view(keep)
        if ref_state is None:
            ref_state = ex.state.copy()
            _strip_outputs(ref_state, circ, psi, "ref")
        prod = ref_state.copy()
        ideal = ideal_output(circ, psi)
        prod.add_pure(PureState(ideal.amplitudes, [f"ideal.{w}" if w in circ.owner else w
                                                    for w in ideal.wires]),
                      {(f"ideal.{w}" if w in circ.owner else w): circ.owner.get(w, REF)
                       for w in ideal.wires})
        for w in circ.wires:
            prod.logical[w] = f"ideal.{w}"
        dev[name] = real.distance(prod.view(keep))
        res = ex.state.copy()
        _strip_outputs(res, circ, psi, "out")
        rv = res.view(keep)
        if residue_1 is None:
            residue_1 = rv
        else:
            spread = max(spread, rv.distance(residue_1))
    eps = measure_speciousness(adversary, cfg, inputs).epsilon
    return RushingReport(dev, spread, eps)


def receipt_view_distance(adversary: HonestParty, cfg: ProtocolConfig, psi0, psi1) -> float:
    """Distance between the adversary's views right after it receives the keys.

    The two runs differ only in the input; a leak of the honest input at the
    receipt step shows up as a positive distance.
    """
    side = adversary.name
    ex_cfg = _exact_cfg(cfg)
    k = receipt_step(cfg, side)
    views = []
    for psi in (psi0, psi1):
        ex = make_execution(ex_cfg, psi, **_with(side, copy.deepcopy(adversary), HonestParty(other(side))))
        ex.run(k)
        views.append(view_of(ex.transcript.steps[-1].snapshot, side))
    return views[0].distance(views[1])


def make_party(kind: str, side: str) -> HonestParty:
    if kind not in ADVERSARIES:
        raise ValueError(f"unknown adversary {kind!r}; choose from {sorted(ADVERSARIES)}")
    return ADVERSARIES[kind](side)


__all__ = [
    "PrivacyReport", "RushingReport", "SimulatedCounterpart", "SimulationError", "StepGap",
    "adversary_share", "privacy_gap", "q_vector", "receipt_step", "receipt_view_distance",
    "rushing_check",
    "simulate_evaluation_step", "simulate_key_release", "simulated_run", "view_of",
]

"""Adversaries for one party, and the speciousness audit.

An adversary is a party object (see ``protocol.HonestParty``) together with
transcript maps ``T_i`` that turn its working state after step i back into
the honest form. Speciousness is measured, never assumed: the audit runs the
honest and the adversarial protocol side by side in exact mode and reports
max_i Delta((T_i (x) I)(rho~_i), rho_i) over a family of inputs.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Sequence

from .branches import ENV
from .protocol import HonestParty, ProtocolConfig, make_execution
from .qstate import PureState


def residue_holder(party: str) -> str:
    """Holder name of the residue register that a transcript map sets aside."""
    return party + "^"


class PurifiedHonest(HonestParty):
    """Honest actions run as isometries: outcomes stay coherent with the party.

    The residue is the list of coherent outcome bits (one per collapsed wire
    or coin ancilla). T_i copies them into the residue register, which the
    audit then traces out.
    """

    purified = True
    role = "purified_honest"

    def transcript_map(self, rt, step):
        rt.state.add_holder(self.residue, residue_holder(self.name))

    def final_map(self, rt):
        rt.state.add_holder(self.residue, residue_holder(self.name))

    def final_map_inverse(self, rt):
        rt.state.drop_holder(self.residue, residue_holder(self.name))


def purified_honest(party: str) -> PurifiedHonest:
    return PurifiedHonest(party)


class BitFlipAdversary(HonestParty):
    """Flips its first input wire before running honestly; T_i does nothing."""

    role = "bit_flip"

    def begin(self, rt):
        from .protocol import X_M
        mine = rt.circuit.wires_of(self.name)
        if mine:
            st = rt.state
            st.apply(X_M, [st.phys(mine[0])], actor=self.name)


class RushingKeyAttacker(HonestParty):
    """Holds back the control-side Bell measurement of a nonlocal CNOT.

    The measurement is done the first time the party has to act again, which
    under naive release with the other side announcing first is after the
    other side's key shares have arrived. T_i performs the pending
    measurement, so every audited step is exactly specious.
    """

    role = "rushing"

    def __init__(self, name: str = "A"):
        super().__init__(name)
        self.pending: list[tuple[int, str]] = []

    def cnot_control(self, rt, j):
        st = rt.state
        c, _ = rt.gate(j).wires
        self.pending.append((j, st.phys(c)))
        st.logical[c] = f"g{j}.xi2"

    def _flush(self, rt):
        st = rt.state
        for j, orig in self.pending:
            c, t = rt.gate(j).wires
            carrier = st.logical[c]
            st.logical[c] = orig
            HonestParty.cnot_control(self, rt, j)
            assert st.logical[c] == carrier
        self.pending = []

    def act(self, rt, action):
        if self.pending and action.hook != "cnot_control":
            self._flush(rt)
        super().act(rt, action)

    def transcript_map(self, rt, step):
        if self.pending:
            self._flush(rt)

    @property
    def final_isometric(self) -> bool:
        return not self.pending


def rushing_key_attacker(party: str = "A") -> RushingKeyAttacker:
    return RushingKeyAttacker(party)


def with_discarded_ancilla(adv: HonestParty, label: str | None = None) -> HonestParty:
    """The same adversary holding an extra |0> wire that T_i throws away."""
    base = type(adv)
    wire = label or f"anc.{adv.name}"

    class WithAncilla(base):
        role = adv.role + "+ancilla"

        def begin(self, rt):
            super().begin(rt)
            rt.state.add_wires([wire], self.name, [1, 0])

        def transcript_map(self, rt, step):
            super().transcript_map(rt, step)
            if wire in rt.state.owner:
                rt.state.move([wire], ENV)

    out = copy.copy(adv)
    out.__class__ = WithAncilla
    return out


ADVERSARIES = {
    "honest": purified_honest,
    "purified_honest": purified_honest,
    "bit_flip": BitFlipAdversary,
    "rushing": rushing_key_attacker,
}


def make_adversary(kind: str, party: str = "A") -> HonestParty:
    try:
        return ADVERSARIES[kind](party)
    except KeyError:
        raise ValueError(f"unknown adversary {kind!r}; choose from {sorted(ADVERSARIES)}") from None


@dataclass
class SpeciousnessReport:
    per_step: list[float]
    per_input: dict[str, list[float]] = field(default_factory=dict)

    @property
    def epsilon(self) -> float:
        return max(self.per_step, default=0.0)

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "per_step": self.per_step, "per_input": self.per_input}


def _exact(cfg: ProtocolConfig) -> ProtocolConfig:
    return ProtocolConfig(cfg.circuit, None, "all", cfg.tolerance, cfg.release, cfg.first_announcer, exact=True)


def speciousness_trace(adv: HonestParty, cfg: ProtocolConfig, psi: PureState) -> list[float]:
    """Per-step deviation for one input (steps 1..n)."""
    side = adv.name
    ecfg = _exact(cfg)
    honest = make_execution(ecfg, psi).run()
    kw = {"alice": copy.deepcopy(adv)} if side == "A" else {"bob": copy.deepcopy(adv)}
    bad = make_execution(ecfg, psi, **kw).run()
    devs = []
    for rec_h, rec_a in zip(honest.transcript.steps, bad.transcript.steps):
        probe = copy.copy(bad)
        probe.restore(rec_a.snapshot)
        probe.parties[side].transcript_map(probe, rec_a.index)
        v_adv = probe.state.view({"A", "B"})
        v_hon = rec_h.snapshot.view({"A", "B"})
        if not v_adv.compatible(v_hon):
            raise ValueError(f"T_{rec_a.index} leaves the adversary's registers in a different shape "
                             f"than the honest party's: {v_adv.wires} vs {v_hon.wires}")
        devs.append(v_adv.distance(v_hon))
    return devs


def measure_speciousness(adv: HonestParty, cfg: ProtocolConfig,
                         inputs: Sequence[tuple[str, PureState]]) -> SpeciousnessReport:
    per_input = {name: speciousness_trace(adv, cfg, psi) for name, psi in inputs}
    n = max((len(v) for v in per_input.values()), default=0)
    per_step = [max(v[i] for v in per_input.values()) for i in range(n)]
    return SpeciousnessReport(per_step, per_input)

import pytest

from conftest import circuit
from qtwoparty.adversary import make_adversary, purified_honest, rushing_key_attacker
from qtwoparty.circuit_io import parse
from qtwoparty.privacy import (SimulationError, adversary_share, privacy_gap, q_vector, receipt_step,
                               receipt_view_distance, rushing_check, simulate_evaluation_step,
                               simulated_run)
from qtwoparty.protocol import MINUS, PLUS, ZERO, HonestParty, ProtocolConfig, input_state
from qtwoparty.qstate import PureState


def test_q_vector_switches_at_receipt():
    c = circuit("cnot_ab")
    assert q_vector(ProtocolConfig(c), "A") == [0, 1, 1]
    naive = ProtocolConfig(c, release="naive", first_announcer="B")
    # B announces first, so A holds both shares one step before B does
    assert receipt_step(naive, "A") == 2 and receipt_step(naive, "B") == 3
    assert q_vector(naive, "A") == [0, 1, 1, 1]


def test_idle_circuit_has_zero_gaps():
    c = parse("wire a0 A\nwire b0 B\n")
    for side in "AB":
        rep = privacy_gap(ProtocolConfig(c), purified_honest(side))
        assert rep.passed and max(s.delta for s in rep.steps) <= 1e-15


@pytest.mark.parametrize("side", "AB")
def test_release_simulator_ignores_the_dummy(side):
    c = circuit("r_a")
    a = privacy_gap(ProtocolConfig(c), purified_honest(side), phase="release", dummy="zero")
    b = privacy_gap(ProtocolConfig(c), purified_honest(side), phase="release", dummy="plus")
    assert [s.index for s in a.steps] == [s.index for s in b.steps]
    assert all(s.q == 1 for s in a.steps)
    assert max(s.delta for s in a.steps + b.steps) <= 1e-12


def test_phase_selection():
    c = circuit("mixed")
    rep = privacy_gap(ProtocolConfig(c), make_adversary("bit_flip", "B"), phase="eval")
    assert rep.steps and all(s.q == 0 for s in rep.steps) and rep.eval_max <= 1e-10
    with pytest.raises(ValueError):
        privacy_gap(ProtocolConfig(c), purified_honest("A"), phase="middle")


def test_evaluation_simulator_never_sees_the_honest_input():
    c = circuit("cnot_ab")
    cfg = ProtocolConfig(c)
    psi = input_state(c, "plus")
    with pytest.raises(ValueError, match="honest wires"):
        simulated_run(purified_honest("A"), cfg, psi.density())
    share = adversary_share(cfg, "A", psi)
    assert share.wires == ("a0",)
    with pytest.raises(SimulationError):
        simulate_evaluation_step(receipt_step(cfg, "A"), purified_honest("A"), share, cfg)


def test_bit_flip_release_within_its_bound():
    rep = privacy_gap(ProtocolConfig(circuit("cnot_ab")), make_adversary("bit_flip", "A"))
    assert rep.epsilon > 0.99 and rep.release_max > 0.99 and rep.passed


def test_rushing_attack_under_naive_release():
    c = circuit("cnot_ab")
    fam = [("plus", PureState.product([ZERO, PLUS], ["a0", "b0"])),
           ("minus", PureState.product([ZERO, MINUS], ["a0", "b0"]))]
    naive = privacy_gap(ProtocolConfig(c, release="naive"), rushing_key_attacker(), fam)
    assert naive.epsilon <= 1e-12
    assert naive.violating_steps == [2]
    assert any("not an isometry" in n for n in naive.notes)
    swap = privacy_gap(ProtocolConfig(c, release="swap"), rushing_key_attacker(), fam)
    assert swap.passed and swap.release_max <= 1e-12


def test_receipt_view_distance():
    c = circuit("cnot_ab")
    pair = [PureState.product([ZERO, v], ["a0", "b0"]) for v in (PLUS, MINUS)]
    naive = ProtocolConfig(c, release="naive")
    assert abs(receipt_view_distance(rushing_key_attacker(), naive, *pair) - 1.0) <= 1e-9
    # measuring on time, the honest party learns nothing about b0
    assert receipt_view_distance(HonestParty("A"), naive, *pair) <= 1e-12


def test_purified_party_also_sees_the_naive_leak():
    # keeping the Bell outcomes coherent defers the measurement just like the
    # attacker does, so naive release is caught for this party too
    c = circuit("cnot_ab")
    rep = privacy_gap(ProtocolConfig(c, release="naive"), purified_honest("A"))
    assert rep.violating_steps == [2] and abs(rep.release_max - 0.5) <= 1e-9
    assert privacy_gap(ProtocolConfig(c, release="naive"), purified_honest("B")).passed


@pytest.mark.parametrize("side", "AB")
def test_rushing_check_honest(side):
    rep = rushing_check(purified_honest(side), ProtocolConfig(circuit("r_b")))
    assert rep.delta_rush <= 1e-9 and rep.residue_spread <= 1e-9 and rep.passed
    assert set(rep.deviation) == {"zero", "plus", "epr"}


def test_report_json_shape():
    rep = privacy_gap(ProtocolConfig(circuit("h")), purified_honest("A"))
    js = rep.to_json()
    assert js["first_violation"] is None and js["pass"] is True
    assert len(js["q_vector"]) == len(js["steps"])

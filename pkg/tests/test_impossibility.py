import math

import pytest

from qtwoparty.impossibility import (NAIVE_BEST_Q0, SILENT_CORRECTNESS, BareProtocol, ModelError,
                                     correctness_error, diagnose_rounds, naive_protocol,
                                     no_single_message_transition, output_wires, run_rounds,
                                     silent_protocol)


def test_naive_round_pattern():
    d = diagnose_rounds(naive_protocol())
    assert len(d) == 3
    assert d[0].ra_a == pytest.approx(2.0, abs=1e-9) and d[0].rb_b == pytest.approx(2.0, abs=1e-9)
    assert d[1].ra_b == pytest.approx(2.0, abs=1e-9) and d[1].rb_a == pytest.approx(0.0, abs=1e-9)
    assert d[2].rb_a == pytest.approx(2.0, abs=1e-9) and d[2].ra_b == pytest.approx(2.0, abs=1e-9)
    assert d[2].ra_a == pytest.approx(0.0, abs=1e-9)
    assert all(abs(x.global_entropy) < 1e-9 for x in d)


def test_naive_flip_report():
    rep = no_single_message_transition(naive_protocol())
    assert rep.round == 1 and rep.receiver == "B"
    assert rep.simultaneous_gain and rep.witness
    assert rep.correctness <= 1e-9
    # SDP against the analytic optimum
    assert rep.best_q0 == pytest.approx(NAIVE_BEST_Q0, abs=1e-4)
    assert rep.best_q1 == pytest.approx(NAIVE_BEST_Q0, abs=1e-4)
    js = rep.to_json()
    assert js["flip_round"] == 1 and js["rounds"][1]["I(R_A:B_i R_B)"] == pytest.approx(2.0)


def test_silent_protocol_is_incorrect():
    p = silent_protocol()
    rep = no_single_message_transition(p)
    assert rep.round is None and rep.witness
    assert correctness_error(p) == pytest.approx(SILENT_CORRECTNESS, abs=1e-9)
    assert SILENT_CORRECTNESS == pytest.approx(math.sqrt(1 - 0.25))


def test_local_swap_gates_do_not_move_information():
    p = BareProtocol.parse("wire a0 A\nwire b0 B\nancilla t A\nCNOT a0 t\nCNOT t a0\nCNOT a0 t\n")
    rounds = run_rounds(p)
    assert len(rounds) == 1
    d = diagnose_rounds(p)[0]
    assert d.ra_a == pytest.approx(2.0) and d.ra_b == pytest.approx(0.0, abs=1e-9)


def test_declared_outputs():
    p = BareProtocol.parse("wire a0 A\nwire b0 B\nsend a0\nsend b0\noutput A b0\noutput B a0\n")
    _, holder = run_rounds(p)[-1]
    assert output_wires(p, holder) == {"A": "b0", "B": "a0"}
    assert correctness_error(p) <= 1e-9


@pytest.mark.parametrize("text,msg", [
    ("wire a0 A\nwire b0 B\noracle SWAP a0 b0\n", "oracle"),
    ("wire a0 A\nwire a1 A\nwire b0 B\n", "one input wire per party"),
])
def test_model_errors(text, msg):
    with pytest.raises(ModelError, match=msg):
        BareProtocol.parse(text)


@pytest.mark.parametrize("text", [
    "wire a0 A\nwire b0 B\nsend a0 b0\n",
    "wire a0 A\nwire b0 B\nCNOT a0 b0\n",
])
def test_cross_party_statements_rejected(text):
    with pytest.raises(ModelError):
        run_rounds(BareProtocol.parse(text))

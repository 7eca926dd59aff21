"""Simulator and checker for two-party evaluation of a unitary under a shared Pauli pad."""

__version__ = "0.1.0"

from .adversary import (BitFlipAdversary, PurifiedHonest, RushingKeyAttacker, SpeciousnessReport,
                        make_adversary, measure_speciousness, purified_honest, rushing_key_attacker,
                        with_discarded_ancilla)
from .circuit_io import Circuit, Gate, ParseError, format_circuit, load, parse, parse_protocol, validate
from .impossibility import BareProtocol, diagnose_rounds, no_single_message_transition
from .pauli_frame import KeyPair, KeyTable
from .privacy import PrivacyReport, privacy_gap, receipt_view_distance, rushing_check, view_of
from .protocol import (HonestParty, ProtocolConfig, ideal_output, input_family, input_state,
                       make_execution, run_protocol)
from .qstate import DensityOperator, PureState, partial_trace, trace_distance

__all__ = [
    "BareProtocol", "BitFlipAdversary", "Circuit", "DensityOperator", "Gate", "HonestParty", "KeyPair",
    "KeyTable", "ParseError", "PrivacyReport", "ProtocolConfig", "PureState", "PurifiedHonest",
    "RushingKeyAttacker", "SpeciousnessReport", "diagnose_rounds", "format_circuit", "ideal_output",
    "input_family", "input_state", "load", "make_adversary", "make_execution", "measure_speciousness",
    "no_single_message_transition", "parse", "parse_protocol", "partial_trace", "privacy_gap",
    "purified_honest", "receipt_view_distance", "run_protocol", "rushing_check", "rushing_key_attacker", "trace_distance",
    "validate", "view_of", "with_discarded_ancilla",
]

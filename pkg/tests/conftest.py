import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qtwoparty.circuit_io import parse  # noqa: E402

# small circuits that exercise every gadget; the exact engine handles them quickly
SMALL_CIRCUITS = {
    "h": "wire a0 A\nH a0\n",
    "cnot_ab": "wire a0 A\nwire b0 B\nCNOT a0 b0\n",
    "cnot_ba": "wire a0 A\nwire b0 B\nCNOT b0 a0\n",
    "r_a": "wire a0 A\nwire b0 B\nR a0\nCNOT a0 b0\n",
    "r_b": "wire a0 A\nwire b0 B\nR b0\nCNOT b0 a0\n",
    "local": "wire a0 A\nwire b0 B\nH a0\nP b0\nY a0\nCNOT a0 b0\n",
    "mixed": "wire a0 A\nwire b0 B\nR b0\nH b0\nCNOT a0 b0\nR a0\nP b0\n",
}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def circuit(name):
    return parse(SMALL_CIRCUITS[name])


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)

# 2+2 wires, both CNOT directions across the cut
CLIFFORD_10 = """\
wire a0 A
wire a1 A
wire b0 B
wire b1 B
H a0
CNOT a0 b0
P b1
CNOT b1 a1
Y a1
H b0
CNOT a1 a0
CNOT b0 b1
Z a0
CNOT a0 b1
"""

# drawn once from random_circuit(default_rng(9), 2, 2, 20, n_r=4), then frozen
MIXED_20 = """\
wire a0 A
wire a1 A
wire b0 B
wire b1 B
P b0
P b1
CNOT b0 b1
CNOT a0 b1
Z b0
R a1
CNOT b0 a0
R a0
P a1
CNOT a1 b1
Y b1
P b1
Y b0
P b1
Y a1
R b1
CNOT b0 a0
X b1
R b1
CNOT b0 b1
"""


def single_gate_circuits():
    """Every gate kind on each side, plus CNOT in all four placements."""
    head = "wire a0 A\nwire b0 B\n"
    out = {}
    for g in ("X", "Y", "Z", "H", "P", "R"):
        for w in ("a0", "b0"):
            out[f"{g}_{w}"] = parse(head + f"{g} {w}\n")
    for c, t in (("a0", "b0"), ("b0", "a0")):
        out[f"CNOT_{c}_{t}"] = parse(head + f"CNOT {c} {t}\n")
    out["CNOT_a0_a1"] = parse("wire a0 A\nwire a1 A\nwire b0 B\nCNOT a0 a1\n")
    out["CNOT_b0_b1"] = parse("wire a0 A\nwire b0 B\nwire b1 B\nCNOT b0 b1\n")
    return out

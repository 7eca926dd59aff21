"""Evaluate a small two-party circuit under the shared Pauli pad.

Alice holds a0, Bob holds b0. Each gate is run by its subprotocol, the keys
are swapped at the end, and the decrypted output is compared with the
circuit applied directly to the input.
"""
from qtwoparty import ProtocolConfig, ideal_output, input_state, parse, run_protocol, trace_distance

CIRCUIT = """\
wire a0 A
wire b0 B
R b0
H b0
CNOT a0 b0
R a0
P b0
"""


def main():
    c = parse(CIRCUIT)
    print("predicted oracle calls:", c.counts.as_dict())
    for kind in ("zero", "plus", "epr"):
        psi = input_state(c, kind)
        out, tr = run_protocol(ProtocolConfig(c, seed=2024), psi)
        err = trace_distance(out, ideal_output(c, psi))
        print(f"{kind:>5}: distance to U rho U^+ = {err:.1e}, calls = {tr.counts().as_dict()}")

    # the key shares drift with every gate; only their XOR is meaningful
    _, tr = run_protocol(ProtocolConfig(c, seed=2024), input_state(c, "plus"))
    for step in tr.steps:
        kind = step.oracle["kind"] if step.oracle else "-"
        keys = {p: step.keys[p]["keys"] for p in "AB"}
        print(f"step {step.index} {step.phase:<10} {kind:<12} A={keys['A']} B={keys['B']}")


if __name__ == "__main__":
    main()

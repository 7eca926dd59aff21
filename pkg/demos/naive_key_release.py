"""Why the keys must be exchanged atomically.

If Bob announces his key shares first, an Alice who postpones one Bell
measurement of a nonlocal CNOT learns Bob's input: her views for Bob holding
|+> and |-> become perfectly distinguishable. With the SWAP oracle the same
attacker learns nothing.
"""
from qtwoparty import ProtocolConfig, PureState, parse, privacy_gap, receipt_view_distance, rushing_key_attacker
from qtwoparty.protocol import MINUS, PLUS, ZERO

c = parse("wire a0 A\nwire b0 B\nCNOT a0 b0\n")
pair = [PureState.product([ZERO, b], ["a0", "b0"]) for b in (PLUS, MINUS)]

for release in ("naive", "swap"):
    cfg = ProtocolConfig(c, release=release)
    d = receipt_view_distance(rushing_key_attacker(), cfg, *pair)
    rep = privacy_gap(cfg, rushing_key_attacker(), [("plus", pair[0]), ("minus", pair[1])])
    print(f"{release:>5}: view distance {d:.6f}  eps {rep.epsilon:.1e}  "
          f"violating steps {rep.violating_steps or 'none'}")

"""At the end of the protocol a specious party holds residue (x) output.

The rushing attacker passes too, even under naive release: its leak happens
at the announcement step, not at the end.
"""
from qtwoparty import ProtocolConfig, parse, purified_honest, rushing_check, rushing_key_attacker

for text in ("wire a0 A\nwire b0 B\nCNOT a0 b0\n", "wire a0 A\nwire b0 B\nR b0\nCNOT b0 a0\n"):
    c = parse(text)
    for adv in (purified_honest("A"), purified_honest("B"), rushing_key_attacker("A")):
        for release in ("swap", "naive"):
            r = rushing_check(adv, ProtocolConfig(c, release=release))
            print(f"{adv.role:<16} {adv.name} {release:<5} gates={len(c.gates)} "
                  f"delta_rush={r.delta_rush:.1e} residue spread={r.residue_spread:.1e} pass={r.passed}")

"""Sending the inputs one after the other cannot be private.

Both inputs start maximally entangled with references R_A and R_B. After the
first message Bob holds Alice's input and still holds his own, so for one
round he can rebuild both. The mutual information table shows who can
rebuild what after each round.
"""
from qtwoparty.impossibility import diagnose_rounds, naive_protocol, no_single_message_transition

p = naive_protocol()
print("round  I(R_A:B R_B)  I(R_B:A R_A)  I(R_A:A)  I(R_B:B)")
for d in diagnose_rounds(p):
    print(f"{d.round:>5}  {d.ra_b:12.6f}  {d.rb_a:12.6f}  {d.ra_a:8.4f}  {d.rb_b:8.4f}")

rep = no_single_message_transition(p)
print(rep.verdict)
print(f"best simulator distances: q=0 {rep.best_q0:.4f}, q=1 {rep.best_q1:.4f}")

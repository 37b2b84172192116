"""Solving TCP(q, A): verification, support enumeration and FB Newton."""
import numpy as np

from tcpkit.classify import classify_semi_positive
from tcpkit.solve import (
    WEAK, TcpInstance, counterexample_q, solve_fb_newton, solve_support_enum, verify_solution,
)
from tcpkit.tensor import Tensor, identity

inst = TcpInstance(identity(3, 2), [-4.0, 9.0])
print("x=(2,0):", verify_solution(inst, [2, 0]).accepted, " x=(1,0):", verify_solution(inst, [1, 0]).accepted)

rep = solve_support_enum(inst)
print("support enumeration:", [s.x for s in rep.solutions], "complete:", rep.complete)

fb = solve_fb_newton(inst, np.ones(2))
print("FB Newton from (1,1):", fb.solutions[0].x, "merit", fb.merit)

# A tensor that is not semi-positive has q > 0 with a nonzero solution
rng = np.random.default_rng(3)
A = Tensor(rng.normal(size=(3, 3, 3)))
v = classify_semi_positive(A)
print("semi-positive:", v.status.value)
if v.witness is not None:
    q = counterexample_q(A, v.witness, v.witness_set, WEAK)
    bad = TcpInstance(A, q)
    print("q =", q.round(4), "> 0; both 0 and the witness solve it:",
          verify_solution(bad, np.zeros(3)).accepted, verify_solution(bad, v.witness).accepted)

"""Seeded instance generation and sampled Q-tensor probing."""
from tcpkit.generate import DIAG_BOOSTED, MIXED, GenSpec, gen_instance, generate
from tcpkit.solve import q_tensor_probe, solve_any
from tcpkit.tensor import from_matrix, identity

spec = GenSpec(DIAG_BOOSTED, order=4, dim=3, seed=7, params=(50,))
A = generate(spec)
assert A == generate(spec)   # same spec, same tensor
print(spec.to_record())

inst = gen_instance(spec, MIXED, seed=1)
sol, method, _ = solve_any(inst)
print("q =", inst.q.round(3), "solved by", method, "x =", sol.x.round(4))

print("I(3,2):", q_tensor_probe(identity(3, 2), 50, seed=0).summary)
print("-I(2,2):", q_tensor_probe(from_matrix([[-1, 0], [0, -1]]), 8, seed=0).summary)

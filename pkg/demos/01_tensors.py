"""Building tensors and evaluating A x^{m-1} and A x^m."""
import numpy as np

from tcpkit.tensor import (
    build_tensor, from_matrix, identity, map_apply, poly_eval, principal_subtensor, symmetrize,
)

# Coordinates are 0-based in Python; files use 1-based indices.
A = build_tensor(3, 2, [((0, 0, 0), 1.0), ((1, 1, 1), 1.0)])
print(A, A == identity(3, 2))

x = np.array([2.0, 3.0])
print("A x^2 =", map_apply(A, x))          # (4, 9)
print("A x^3 at (1/2, 1/2) =", poly_eval(A, [0.5, 0.5]))

M = from_matrix([[0.0, 2.0], [0.0, 0.0]])
print("symmetric part:\n", symmetrize(M).data)

# restrict every index to {0, 2}
rng = np.random.default_rng(0)
T = symmetrize(rng.normal(size=(3, 3, 3)))
B = principal_subtensor(T, [0, 2])
print("B[0,0,1] == T[0,0,2]:", B.data[0, 0, 1] == T.data[0, 0, 2])

"""Three-valued classification of (strict) semi-positivity and copositivity."""
from tcpkit.classify import PROPERTIES, classify, simplex_minimize
from tcpkit.generate import DIAG_BOOSTED, SYMMETRIC_GAUSSIAN, GenSpec, generate
from tcpkit.tensor import from_matrix, identity, zeros

examples = {
    "I(3,2)": identity(3, 2),
    "zero(3,2)": zeros(3, 2),
    "[[1,-2],[-2,1]]": from_matrix([[1, -2], [-2, 1]]),
    "gaussian m=4 n=3": generate(GenSpec(SYMMETRIC_GAUSSIAN, 4, 3, seed=1)),
    "boosted m=3 n=4": generate(GenSpec(DIAG_BOOSTED, 3, 4, seed=2, params=(50,))),
}

for name, A in examples.items():
    print(name)
    for prop in PROPERTIES:
        v = classify(A, prop)
        extra = f" witness={v.witness.round(4)} on {v.witness_set}" if v.witness is not None else ""
        print(f"  {prop:24s} {v.status.value:8s}{extra}")

# the minimum of A x^m over the simplex decides copositivity
r = simplex_minimize(examples["gaussian m=4 n=3"])
print("min on simplex:", r.min_value, "at", r.minimizer.round(4), "kkt residual", r.kkt_res)

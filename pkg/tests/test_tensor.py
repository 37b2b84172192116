import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from tcpkit.tensor import (
    Tensor, build_tensor, embed, from_matrix, identity, is_symmetric, map_apply, map_apply_batch,
    map_jacobian, poly_eval, poly_eval_batch, principal_subtensor, subsets, symmetrize, zeros,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def shapes():
    return st.tuples(st.integers(2, 4), st.integers(1, 3))


@st.composite
def tensors(draw, symmetric=False):
    m, n = draw(shapes())
    data = draw(arrays(np.float64, (n,) * m, elements=finite))
    return symmetrize(data) if symmetric else Tensor(data)


def brute_poly(A, x):
    # plain loop over every index tuple
    D, n, m = A.data, A.dim, A.order
    total = 0.0
    for idx in itertools.product(range(n), repeat=m):
        term = D[idx]
        for i in idx:
            term *= x[i]
        total += term
    return total


def brute_map(A, x):
    D, n, m = A.data, A.dim, A.order
    out = np.zeros(n)
    for k in range(n):
        for idx in itertools.product(range(n), repeat=m - 1):
            term = D[(k,) + idx]
            for i in idx:
                term *= x[i]
            out[k] += term
    return out


class TestBuild:
    def test_identity_matrix(self):
        A = build_tensor(2, 2, [((0, 0), 1), ((1, 1), 1)])
        assert np.array_equal(A.data, np.eye(2))

    def test_identity_like_order3(self):
        A = build_tensor(3, 2, [((0, 0, 0), 1), ((1, 1, 1), 1)])
        assert A == identity(3, 2)
        assert A.data.sum() == 2

    def test_empty_is_zero(self):
        assert build_tensor(3, 2, []) == zeros(3, 2)

    @pytest.mark.parametrize("coords", [
        [((0, 0, 0), 1), ((0, 0, 0), 2)],
        [((0, 2, 0), 1)],
        [((0, 0), 1)],
        [((0, 0, 0), float("nan"))],
    ])
    def test_rejects_bad_coords(self, coords):
        with pytest.raises(ValueError):
            build_tensor(3, 2, coords)

    def test_read_only(self):
        A = identity(3, 2)
        with pytest.raises(ValueError):
            A.data[0, 0, 0] = 5.0


class TestEvaluation:
    def test_map_apply_diagonal(self):
        assert np.allclose(map_apply(identity(3, 2), [2, 3]), [4, 9])

    def test_map_apply_matrix(self):
        A = from_matrix([[0, -1], [-1, 0]])
        assert np.allclose(map_apply(A, [1, 1]), [-1, -1])

    def test_poly_eval_examples(self):
        assert poly_eval(identity(3, 2), [0.5, 0.5]) == pytest.approx(0.25, abs=1e-15)
        assert poly_eval(from_matrix([[0, -1], [-1, 0]]), [1, 1]) == pytest.approx(-2)

    def test_poly_eval_matches_triple_loop(self, rng):
        A = Tensor(rng.normal(size=(3, 3, 3)))
        for _ in range(20):
            x = rng.normal(size=3)
            assert poly_eval(A, x) == pytest.approx(brute_poly(A, x), rel=1e-12, abs=1e-12)

    @given(tensors(), st.data())
    def test_map_matches_loop(self, A, data):
        x = data.draw(arrays(np.float64, A.dim, elements=finite))
        assert np.allclose(map_apply(A, x), brute_map(A, x), rtol=1e-10, atol=1e-9)

    @given(tensors(), st.data())
    def test_zero_vector_and_homogeneity(self, A, data):
        x = data.draw(arrays(np.float64, A.dim, elements=finite))
        t = data.draw(st.floats(-3, 3))
        m = A.order
        assert np.all(map_apply(A, np.zeros(A.dim)) == 0)
        assert np.allclose(map_apply(A, t * x), t ** (m - 1) * map_apply(A, x), rtol=1e-9, atol=1e-8)
        assert poly_eval(A, t * x) == pytest.approx(t ** m * poly_eval(A, x), rel=1e-9, abs=1e-7)

    @given(tensors(), st.data())
    def test_poly_is_x_dot_map(self, A, data):
        x = data.draw(arrays(np.float64, A.dim, elements=finite))
        assert poly_eval(A, x) == pytest.approx(x @ map_apply(A, x), rel=1e-10, abs=1e-8)

    def test_batch_agrees(self, rng):
        A = Tensor(rng.normal(size=(4, 4, 4, 4)))
        X = rng.normal(size=(7, 4))
        assert np.allclose(map_apply_batch(A, X), [map_apply(A, x) for x in X])
        assert np.allclose(poly_eval_batch(A, X), [poly_eval(A, x) for x in X])

    def test_jacobian_finite_difference(self, rng):
        A = Tensor(rng.normal(size=(3, 3, 3, 3)))
        x = rng.uniform(size=3)
        h = 1e-6
        fd = np.column_stack([(map_apply(A, x + h * e) - map_apply(A, x - h * e)) / (2 * h) for e in np.eye(3)])
        assert np.allclose(map_jacobian(A, x), fd, rtol=1e-6, atol=1e-7)

    def test_gradient_of_form(self, rng):
        # for symmetric A the gradient of A x^m is m A x^{m-1}
        for m in (2, 3, 4):
            A = symmetrize(rng.normal(size=(3,) * m))
            x = rng.normal(size=3)
            h = 1e-5
            fd = np.array([(poly_eval(A, x + h * e) - poly_eval(A, x - h * e)) / (2 * h) for e in np.eye(3)])
            g = m * map_apply(A, x)
            assert np.linalg.norm(fd - g) <= 1e-6 * max(1.0, np.linalg.norm(g))

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            map_apply(identity(3, 2), [1.0, 2.0, 3.0])


class TestSymmetry:
    def test_symmetrize_matrix(self):
        assert np.array_equal(symmetrize(from_matrix([[0, 2], [0, 0]])).data, [[0, 1], [1, 0]])

    def test_fixed_point(self):
        A = identity(4, 3)
        assert symmetrize(A) == A

    def test_is_symmetric_examples(self):
        assert is_symmetric(identity(3, 4))
        assert not is_symmetric(from_matrix([[0, 2], [0, 0]]))

    @given(tensors())
    def test_symmetrize_exact_and_idempotent(self, A):
        S = symmetrize(A)
        assert is_symmetric(S, tol=0.0)
        assert np.allclose(symmetrize(S).data, S.data, rtol=0, atol=1e-12)

    def test_same_form(self, rng):
        A = Tensor(rng.normal(size=(2, 2, 2)))
        S = symmetrize(A)
        for x in rng.normal(size=(100, 2)):
            assert poly_eval(S, x) == pytest.approx(poly_eval(A, x), rel=1e-12, abs=1e-12)


class TestSubtensors:
    def test_relabel(self, rng):
        A = Tensor(rng.normal(size=(3, 3, 3)))
        B = principal_subtensor(A, [0, 2])
        assert B.dim == 2 and B.order == 3
        assert B.data[0, 0, 1] == A.data[0, 0, 2]
        assert B.data[1, 1, 1] == A.data[2, 2, 2]

    def test_singleton(self, rng):
        A = Tensor(rng.normal(size=(3, 3, 3, 3)))
        B = principal_subtensor(A, [1])
        assert B.dim == 1 and B.data.item() == A.data[1, 1, 1, 1]

    @pytest.mark.parametrize("N", [[], [0, 0], [3], [2, 1]])
    def test_bad_sets(self, N):
        with pytest.raises(ValueError):
            principal_subtensor(identity(3, 3), N)

    def test_embedding(self, rng):
        A = Tensor(rng.normal(size=(4, 4, 4)))
        for N in ([0, 2], [1, 2, 3], [3]):
            B = principal_subtensor(A, N)
            for z in rng.normal(size=(100, len(N))):
                x = embed(z, N, 4)
                assert poly_eval(B, z) == pytest.approx(poly_eval(A, x), rel=1e-12, abs=1e-12)

    def test_subsets_order(self):
        S = list(subsets(3))
        assert len(S) == 7
        assert S[:3] == [(0,), (1,), (2,)]
        assert S[-1] == (0, 1, 2)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tcpkit.generate import (
    DIAG_BOOSTED, IDENTITY, KINDS, MATRIX_EMBED, MIXED, NEG, NONNEG, NONNEGATIVE, POS, SYMMETRIC_GAUSSIAN,
    ZERO, GenSpec, gen_instance, generate, normals, raw_words, sample_q, uniforms,
)
from tcpkit.solve import solve_support_enum
from tcpkit.tensor import identity, is_symmetric, zeros


def test_identity_and_zero():
    assert generate(GenSpec(IDENTITY, 3, 2)) == identity(3, 2)
    assert generate(GenSpec(ZERO, 4, 3)) == zeros(4, 3)


def test_raw_stream_prefix_stable():
    # entry k does not depend on how many entries are drawn
    assert np.array_equal(raw_words(7, 0, 5), raw_words(7, 0, 50)[:5])
    assert not np.array_equal(raw_words(7, 0, 5), raw_words(7, 1, 5))
    assert not np.array_equal(raw_words(7, 0, 5), raw_words(8, 0, 5))


def test_uniform_and_normal_moments():
    u = uniforms(1, 0, 200_000)
    assert 0 <= u.min() and u.max() < 1
    assert abs(u.mean() - 0.5) < 5e-3
    z = normals(1, 0, 200_000)
    assert abs(z.mean()) < 1e-2 and abs(z.std() - 1) < 1e-2


@given(st.sampled_from([k for k in KINDS if k != MATRIX_EMBED]), st.integers(2, 4), st.integers(1, 3),
       st.integers(0, 2**40))
def test_deterministic(kind, m, n, seed):
    spec = GenSpec(kind, m, n, seed)
    assert generate(spec) == generate(spec)


def test_kinds_shape():
    assert is_symmetric(generate(GenSpec(SYMMETRIC_GAUSSIAN, 3, 3, 1)), tol=0.0)
    A = generate(GenSpec(NONNEGATIVE, 3, 3, 7))
    assert A.data.min() >= 0 and A.data.max() < 1
    S = generate(GenSpec(SYMMETRIC_GAUSSIAN, 4, 2, 9))
    B = generate(GenSpec(DIAG_BOOSTED, 4, 2, 9, (50,)))
    assert np.allclose((B + -S).data, identity(4, 2).scaled(50).data)
    M = generate(GenSpec(MATRIX_EMBED, 2, 2, 0, (1, 2, 3, 4)))
    assert np.array_equal(M.data, [[1, 2], [3, 4]])


@pytest.mark.parametrize("spec", [
    dict(kind="bogus", order=2, dim=2), dict(kind=IDENTITY, order=1, dim=2), dict(kind=IDENTITY, order=2, dim=0),
])
def test_bad_spec(spec):
    with pytest.raises(ValueError):
        GenSpec(**spec)


def test_matrix_embed_errors():
    with pytest.raises(ValueError):
        generate(GenSpec(MATRIX_EMBED, 3, 2, 0, (1, 2, 3, 4)))
    with pytest.raises(ValueError):
        generate(GenSpec(MATRIX_EMBED, 2, 2, 0, (1, 2, 3)))


def test_q_kinds():
    for s in range(20):
        assert sample_q(POS, 4, s).min() >= 0.1
        assert sample_q(NONNEG, 4, s).min() >= 0
        assert np.all(np.abs(sample_q(MIXED, 4, s)) <= 2)
        assert sample_q(NEG, 4, s).max() <= -0.1
    zeroed = sum(int(np.sum(sample_q(NONNEG, 4, s) == 0)) for s in range(100))
    assert 120 < zeroed < 280
    with pytest.raises(ValueError):
        sample_q("huge", 2, 0)


def test_instances():
    inst = gen_instance(GenSpec(IDENTITY, 2, 2), NEG, 1)
    rep = solve_support_enum(inst)
    assert np.allclose(rep.solutions[0].x, -inst.q)
    inst = gen_instance(GenSpec(ZERO, 3, 3), POS, 3)
    rep = solve_support_enum(inst)
    assert len(rep.solutions) == 1 and np.all(rep.solutions[0].x == 0)


def test_record():
    assert GenSpec(DIAG_BOOSTED, 3, 2, 5, (2,)).to_record() == {
        "kind": DIAG_BOOSTED, "order": 3, "dim": 2, "seed": 5, "params": [2.0]}

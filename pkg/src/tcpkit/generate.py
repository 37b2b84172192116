"""Seeded generators of structured tensors and TCP instances.

Random entries come from the counter-based Philox4x64 generator in
``numpy.random``: the key is derived from ``(seed, stream)`` and entry k of a
stream is the k-th raw 64-bit output, so every entry is a pure function of
``(seed, stream, k)``. Uniform and normal variates are produced from the raw
words here (53-bit uniforms, Box-Muller normals) instead of through
``numpy.random.Generator`` so the values do not depend on numpy's
distribution code.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import Tensor, identity, symmetrize

IDENTITY = "identity"
ZERO = "zero"
NONNEGATIVE = "nonnegative"
SYMMETRIC_GAUSSIAN = "symmetric_gaussian"
DIAG_BOOSTED = "diag_boosted"
MATRIX_EMBED = "matrix_embed"
KINDS = (IDENTITY, ZERO, NONNEGATIVE, SYMMETRIC_GAUSSIAN, DIAG_BOOSTED, MATRIX_EMBED)

POS = "pos"
NONNEG = "nonneg"
MIXED = "mixed"
NEG = "neg"
Q_KINDS = (POS, NONNEG, MIXED, NEG)

DEFAULT_BOOST = 50.0

# stream ids keep tensor entries, q vectors and zero masks independent
_TENSOR_STREAM = 0
_Q_STREAM = 1
_MASK_STREAM = 2


def raw_words(seed: int, stream: int, count: int) -> np.ndarray:
    """The first ``count`` raw 64-bit Philox outputs for ``(seed, stream)``."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be nonnegative")
    key = (int(seed) % (1 << 64)) | (int(stream) << 64)
    bg = np.random.Philox(key=key)
    return bg.random_raw(count).astype(np.uint64)


def uniforms(seed: int, stream: int, count: int) -> np.ndarray:
    """Uniform doubles in [0, 1) with 53 random bits each."""
    w = raw_words(seed, stream, count)
    return (w >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def normals(seed: int, stream: int, count: int) -> np.ndarray:
    """Standard normals by Box-Muller on consecutive uniform pairs."""
    u = uniforms(seed, stream, 2 * count).reshape(count, 2)
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    return r * np.cos(2.0 * np.pi * u[:, 1])


@dataclass(frozen=True)
class GenSpec:
    kind: str
    order: int
    dim: int
    seed: int = 0
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.order < 2 or self.dim < 1:
            raise ValueError("order must be >= 2 and dim >= 1")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    def to_record(self) -> dict:
        return {"kind": self.kind, "order": self.order, "dim": self.dim, "seed": self.seed,
                "params": list(self.params)}


def generate(spec: GenSpec) -> Tensor:
    m, n = spec.order, spec.dim
    shape = (n,) * m
    size = n ** m
    if spec.kind == IDENTITY:
        return identity(m, n)
    if spec.kind == ZERO:
        return Tensor(np.zeros(shape))
    if spec.kind == NONNEGATIVE:
        return Tensor(uniforms(spec.seed, _TENSOR_STREAM, size).reshape(shape))
    if spec.kind in (SYMMETRIC_GAUSSIAN, DIAG_BOOSTED):
        S = symmetrize(normals(spec.seed, _TENSOR_STREAM, size).reshape(shape))
        if spec.kind == SYMMETRIC_GAUSSIAN:
            return S
        beta = spec.params[0] if spec.params else DEFAULT_BOOST
        return S + identity(m, n).scaled(beta)
    if spec.kind == MATRIX_EMBED:
        if m != 2:
            raise ValueError("matrix_embed requires order 2")
        if len(spec.params) != n * n:
            raise ValueError(f"matrix_embed needs {n * n} params, got {len(spec.params)}")
        return Tensor(np.array(spec.params).reshape(n, n))
    raise AssertionError(spec.kind)


def sample_q(q_kind: str, dim: int, seed: int) -> np.ndarray:
    """POS ~ U(0.1, 2); NONNEG is POS with coordinates zeroed w.p. 1/2;
    MIXED ~ U(-2, 2); NEG ~ U(-2, -0.1)."""
    u = uniforms(seed, _Q_STREAM, dim)
    if q_kind == POS:
        return 0.1 + 1.9 * u
    if q_kind == NONNEG:
        mask = uniforms(seed, _MASK_STREAM, dim) < 0.5
        return np.where(mask, 0.0, 0.1 + 1.9 * u)
    if q_kind == MIXED:
        return -2.0 + 4.0 * u
    if q_kind == NEG:
        return -2.0 + 1.9 * u
    raise ValueError(f"unknown q kind {q_kind!r}; expected one of {Q_KINDS}")


def gen_instance(spec: GenSpec, q_kind: str, seed: int):
    from .solve import TcpInstance

    return TcpInstance(generate(spec), sample_q(q_kind, spec.dim, seed))


def random_int_matrix(n: int, seed: int, lo: int = -3, hi: int = 3) -> np.ndarray:
    """Integer matrix with iid entries uniform on {lo, ..., hi}."""
    u = uniforms(seed, _TENSOR_STREAM, n * n)
    return (lo + np.floor(u * (hi - lo + 1))).reshape(n, n)

"""Dense real tensors of order m and dimension n.

A tensor is stored as a read-only ``float64`` array of shape ``(n,) * m``.
All indices in the Python API are 0-based; file formats use 1-based
indices (see :mod:`tcpkit.io`).
"""
from __future__ import annotations

import itertools
import math

import numpy as np

SYMMETRY_TOL = 1e-12


class Tensor:
    """Immutable dense tensor ``A`` in T_{m,n}.

    >>> A = build_tensor(3, 2, [((0, 0, 0), 1.0), ((1, 1, 1), 1.0)])
    >>> A.order, A.dim
    (3, 2)
    """

    __slots__ = ("_data", "_trailing_sym")

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim < 2:
            raise ValueError(f"tensor order must be >= 2, got {arr.ndim}")
        n = arr.shape[0]
        if n < 1 or any(s != n for s in arr.shape):
            raise ValueError(f"tensor must be cubical, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr
        self._trailing_sym = None

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._data.shape == other._data.shape and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self):
        return f"Tensor(order={self.order}, dim={self.dim})"

    def scaled(self, t: float) -> "Tensor":
        return Tensor(t * self._data)

    def __add__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return Tensor(self._data + other._data)

    def __neg__(self):
        return Tensor(-self._data)

    def diagonal(self) -> np.ndarray:
        """Entries a_{i i ... i}."""
        idx = np.arange(self.dim)
        return self._data[(idx,) * self.order].copy()

    def row_sums(self) -> np.ndarray:
        """Sums over i_2..i_m of a_{k i_2 ... i_m}, i.e. ``A e^{m-1}``."""
        return self._data.reshape(self.dim, -1).sum(axis=1)

    def trailing_symmetric(self) -> np.ndarray:
        """Average of the entries over permutations of the last m-1 indices.

        ``A x^{m-1}`` only sees this part, and its Jacobian is
        ``(m-1) * trailing_symmetric() x^{m-2}``.
        """
        if self._trailing_sym is None:
            m = self.order
            perms = list(itertools.permutations(range(1, m)))
            acc = np.zeros_like(self._data)
            for p in perms:
                acc += np.transpose(self._data, (0,) + p)
            acc /= len(perms)
            acc.setflags(write=False)
            self._trailing_sym = acc
        return self._trailing_sym


def as_tensor(A) -> Tensor:
    return A if isinstance(A, Tensor) else Tensor(A)


def build_tensor(order: int, dim: int, coords=()) -> Tensor:
    """Build a tensor from ``(index_tuple, value)`` pairs; other entries are zero.

    Indices are 0-based. Duplicate tuples, out-of-range indices and
    non-finite values raise ``ValueError``.
    """
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    data = np.zeros((dim,) * order)
    seen = set()
    for pos, (idx, val) in enumerate(coords):
        idx = tuple(int(i) for i in idx)
        if len(idx) != order:
            raise ValueError(f"entry {pos}: index {idx} has length {len(idx)}, expected {order}")
        if any(i < 0 or i >= dim for i in idx):
            raise ValueError(f"entry {pos}: index {idx} out of range for dim {dim}")
        if idx in seen:
            raise ValueError(f"entry {pos}: duplicate index {idx}")
        val = float(val)
        if not math.isfinite(val):
            raise ValueError(f"entry {pos}: non-finite value {val}")
        seen.add(idx)
        data[idx] = val
    return Tensor(data)


def identity(order: int, dim: int) -> Tensor:
    """The identity-like tensor I_{m,n}: a_{i...i} = 1, zero elsewhere."""
    return build_tensor(order, dim, [((i,) * order, 1.0) for i in range(dim)])


def zeros(order: int, dim: int) -> Tensor:
    return Tensor(np.zeros((dim,) * order))


def from_matrix(M) -> Tensor:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return Tensor(M)


def _check_vec(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.dim,):
        raise ValueError(f"vector of shape {x.shape} does not match tensor dim {A.dim}")
    return x


def _contract(T: np.ndarray, x: np.ndarray, times: int) -> np.ndarray:
    # contracts the last axis with x, `times` times
    for _ in range(times):
        T = T @ x
    return T


def _contract_batch(T: np.ndarray, X: np.ndarray, times: int) -> np.ndarray:
    # X has shape (p, n); result has shape (p,) + T.shape[:-times]
    if times == 0:
        return np.broadcast_to(T, (X.shape[0],) + T.shape).copy()
    R = np.tensordot(X, T, axes=([1], [T.ndim - 1]))
    for _ in range(times - 1):
        R = np.einsum("p...j,pj->p...", R, X)
    return R


def map_apply(A, x) -> np.ndarray:
    """The vector ``A x^{m-1}`` with i-th component sum a_{i i2..im} x_{i2}..x_{im}."""
    A = as_tensor(A)
    x = _check_vec(A, x)
    return _contract(A.data, x, A.order - 1)


def map_apply_batch(A, X) -> np.ndarray:
    """Row-wise ``A x^{m-1}`` for a ``(p, n)`` array of points."""
    A = as_tensor(A)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != A.dim:
        raise ValueError(f"points of width {X.shape[1]} do not match tensor dim {A.dim}")
    return _contract_batch(A.data, X, A.order - 1)


def map_jacobian(A, x) -> np.ndarray:
    """Jacobian J[k, j] = d(A x^{m-1})_k / dx_j."""
    A = as_tensor(A)
    x = _check_vec(A, x)
    m = A.order
    return (m - 1) * _contract(A.trailing_symmetric(), x, m - 2)


def map_jacobian_batch(A, X) -> np.ndarray:
    A = as_tensor(A)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    m = A.order
    return (m - 1) * _contract_batch(A.trailing_symmetric(), X, m - 2)


def poly_eval(A, x) -> float:
    """The homogeneous form ``A x^m = x . (A x^{m-1})``."""
    A = as_tensor(A)
    x = _check_vec(A, x)
    return float(x @ _contract(A.data, x, A.order - 1))


def poly_eval_batch(A, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return np.einsum("pi,pi->p", X, map_apply_batch(A, X))


def symmetrize(A) -> Tensor:
    """Average of A over all permutations of its indices.

    The result is symmetric and has the same form ``A x^m``.
    """
    A = as_tensor(A)
    m = A.order
    acc = np.zeros_like(A.data)
    perms = list(itertools.permutations(range(m)))
    for p in perms:
        acc += np.transpose(A.data, p)
    acc /= len(perms)
    # summation order differs between permuted entries; copy the value at the
    # sorted index so the result is exactly symmetric
    idx = np.sort(np.indices(acc.shape).reshape(m, -1), axis=0)
    return Tensor(acc[tuple(idx)].reshape(acc.shape))


def is_symmetric(A, tol: float = SYMMETRY_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    A = as_tensor(A)
    D = A.data
    return all(np.max(np.abs(D - np.transpose(D, p))) <= tol
               for p in itertools.permutations(range(A.order)))


def check_index_set(N, dim: int) -> tuple:
    """Validate a 0-based index set: nonempty, strictly increasing, in range."""
    N = tuple(int(i) for i in N)
    if not N:
        raise ValueError("index set must be nonempty")
    if any(b <= a for a, b in zip(N, N[1:])):
        raise ValueError(f"index set {N} must be strictly increasing")
    if N[0] < 0 or N[-1] >= dim:
        raise ValueError(f"index set {N} out of range for dim {dim}")
    return N


def principal_subtensor(A, N) -> Tensor:
    """The principal sub-tensor with all m indices restricted to N."""
    A = as_tensor(A)
    N = check_index_set(N, A.dim)
    return Tensor(A.data[np.ix_(*([N] * A.order))])


def embed(z, N, dim: int) -> np.ndarray:
    """Place the components of z on the coordinates N; zero elsewhere."""
    x = np.zeros(dim)
    x[list(N)] = z
    return x


def subsets(n: int):
    """Nonempty subsets of range(n), by increasing size then lexicographically."""
    for r in range(1, n + 1):
        yield from itertools.combinations(range(n), r)

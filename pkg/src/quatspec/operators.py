"""Quaternionic matrices and their complex and real linear realizations.

A matrix A over the quaternions acts on column vectors of H^n by left
multiplication, which is a right-linear operator.  Internally A is stored
as the pair (x, y) of complex arrays determined by writing each entry as

    q = a + b i + c j + d k = (a + b i) + j (c - d i),

so x = a + b i and y = c - d i.  With vectors split the same way,
right scalar multiplication by points of the distinguished slice becomes
ordinary complex scaling, and A turns into the 2n x 2n complex adjoint

    chi(A) = [[x, -conj(y)], [y, conj(x)]].

The real representation realizes any real-linear operator on H^n as a
4n x 4n real matrix in the component basis; coordinates are grouped by
component (all a's, then b's, c's, d's), which for n = 1 is the plain
(1, i, j, k) basis.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, StructureViolation
from .quaternion import Quaternion

__all__ = [
    "QMatrix",
    "complex_adjoint",
    "adjoint_structure_residual",
    "from_complex_adjoint",
    "left_mult_rep",
    "right_mult_rep",
    "OperatorExpr",
    "real_representation",
    "q_pencil",
    "delta",
    "vector_to_slice_coords",
    "vector_from_slice_coords",
    "vector_to_real_coords",
    "vector_from_real_coords",
]


def _as_quaternion(v) -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    if isinstance(v, complex):
        return Quaternion(v.real, v.imag)
    raise TypeError(f"cannot interpret {v!r} as a quaternion")


class QMatrix:
    """Immutable n x n quaternion matrix."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        x = np.ascontiguousarray(x, dtype=complex)
        y = np.ascontiguousarray(y, dtype=complex)
        if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape != y.shape:
            raise DimensionMismatch("component arrays must be square and equal shape")
        x.flags.writeable = False
        y.flags.writeable = False
        self.x = x
        self.y = y

    # -- construction ------------------------------------------------------

    @classmethod
    def from_components(cls, a, b, c, d) -> "QMatrix":
        a, b, c, d = (np.asarray(m, dtype=float) for m in (a, b, c, d))
        return cls(a + 1j * b, c - 1j * d)

    @classmethod
    def from_entries(cls, rows) -> "QMatrix":
        qs = [[_as_quaternion(v) for v in row] for row in rows]
        n = len(qs)
        if any(len(row) != n for row in qs):
            raise DimensionMismatch("entry rows must form a square matrix")
        a = np.array([[q.a for q in row] for row in qs], dtype=float)
        b = np.array([[q.b for q in row] for row in qs], dtype=float)
        c = np.array([[q.c for q in row] for row in qs], dtype=float)
        d = np.array([[q.d for q in row] for row in qs], dtype=float)
        return cls.from_components(a, b, c, d)

    @classmethod
    def zeros(cls, n: int) -> "QMatrix":
        return cls(np.zeros((n, n), dtype=complex), np.zeros((n, n), dtype=complex))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))

    @classmethod
    def diag(cls, values) -> "QMatrix":
        qs = [_as_quaternion(v) for v in values]
        x = np.diag([complex(q.a, q.b) for q in qs])
        y = np.diag([complex(q.c, -q.d) for q in qs])
        return cls(x, y)

    @classmethod
    def scalar(cls, n: int, q) -> "QMatrix":
        """q times the identity."""
        return cls.diag([q] * n)

    # -- inspection --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def entry(self, r: int, c: int) -> Quaternion:
        xv = self.x[r, c]
        yv = self.y[r, c]
        return Quaternion(xv.real, xv.imag, yv.real, -yv.imag)

    def entries(self) -> list[list[Quaternion]]:
        return [[self.entry(r, c) for c in range(self.n)] for r in range(self.n)]

    def components(self):
        """Real component arrays (a, b, c, d)."""
        return (self.x.real.copy(), self.x.imag.copy(),
                self.y.real.copy(), -self.y.imag.copy())

    @cached_property
    def norm(self) -> float:
        """Frobenius norm, the operator-norm surrogate used throughout."""
        return float(np.sqrt(np.sum(np.abs(self.x) ** 2) + np.sum(np.abs(self.y) ** 2)))

    @cached_property
    def squared(self) -> "QMatrix":
        return self @ self

    # -- algebra -----------------------------------------------------------

    def _check_same_n(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"size {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same_n(other)
        return QMatrix(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same_n(other)
        return QMatrix(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return QMatrix(-self.x, -self.y)

    def __mul__(self, scale):
        if isinstance(scale, (int, float)):
            return QMatrix(self.x * scale, self.y * scale)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same_n(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return QMatrix(x1 @ x2 - np.conj(y1) @ y2,
                       y1 @ x2 + np.conj(x1) @ y2)

    def scalar_left(self, q) -> "QMatrix":
        """Entrywise product q * entry."""
        q = _as_quaternion(q)
        p1 = complex(q.a, q.b)
        p2 = complex(q.c, -q.d)
        return QMatrix(p1 * self.x - np.conj(p2) * self.y,
                       p2 * self.x + np.conj(p1) * self.y)

    def scalar_right(self, q) -> "QMatrix":
        """Entrywise product entry * q."""
        q = _as_quaternion(q)
        p1 = complex(q.a, q.b)
        p2 = complex(q.c, -q.d)
        return QMatrix(self.x * p1 - np.conj(self.y) * p2,
                       self.y * p1 + np.conj(self.x) * p2)

    def power(self, k: int) -> "QMatrix":
        if k < 0:
            raise ValueError("negative matrix powers are not defined here")
        out = QMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, xs) -> list[Quaternion]:
        """Image of a column vector of quaternions."""
        v1, v2 = _vector_split(xs, self.n)
        r1 = self.x @ v1 - np.conj(self.y) @ v2
        r2 = self.y @ v1 + np.conj(self.x) @ v2
        return _vector_join(r1, r2)

    def distance(self, other: "QMatrix") -> float:
        return (self - other).norm

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.x.shape == other.x.shape
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.y, other.y)))

    __hash__ = None

    def __repr__(self):
        return f"QMatrix(n={self.n})"


def _vector_split(xs, n):
    qs = [_as_quaternion(v) for v in xs]
    if len(qs) != n:
        raise DimensionMismatch(f"vector length {len(qs)} vs matrix size {n}")
    v1 = np.array([complex(q.a, q.b) for q in qs])
    v2 = np.array([complex(q.c, -q.d) for q in qs])
    return v1, v2


def _vector_join(v1, v2):
    return [Quaternion(z1.real, z1.imag, z2.real, -z2.imag)
            for z1, z2 in zip(v1, v2)]


def vector_to_slice_coords(xs) -> np.ndarray:
    """Stack the split components into the length-2n complex coordinate vector."""
    n = len(xs)
    v1, v2 = _vector_split(xs, n)
    return np.concatenate([v1, v2])


def vector_from_slice_coords(v) -> list[Quaternion]:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size % 2:
        raise DimensionMismatch("slice coordinate vector must have even length")
    n = v.size // 2
    return _vector_join(v[:n], v[n:])


def vector_to_real_coords(xs) -> np.ndarray:
    """Length-4n real coordinates, grouped by component."""
    qs = [_as_quaternion(v) for v in xs]
    return np.concatenate([
        [q.a for q in qs], [q.b for q in qs],
        [q.c for q in qs], [q.d for q in qs],
    ]).astype(float)


def vector_from_real_coords(v) -> list[Quaternion]:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size % 4:
        raise DimensionMismatch("real coordinate vector must have length 4n")
    n = v.size // 4
    return [Quaternion(v[i], v[n + i], v[2 * n + i], v[3 * n + i]) for i in range(n)]


# -- complex adjoint -------------------------------------------------------

def complex_adjoint(A: QMatrix) -> np.ndarray:
    """2n x 2n complex matrix of A acting on slice coordinates."""
    return np.block([[A.x, -np.conj(A.y)], [A.y, np.conj(A.x)]])


def _adjoint_blocks(M: np.ndarray):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch("complex adjoint must be square of even size")
    n = M.shape[0] // 2
    return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]


def adjoint_structure_residual(M: np.ndarray) -> float:
    """Frobenius distance from M to the nearest complex adjoint."""
    m11, m12, m21, m22 = _adjoint_blocks(M)
    x = 0.5 * (m11 + np.conj(m22))
    y = 0.5 * (m21 - np.conj(m12))
    rec = np.block([[x, -np.conj(y)], [y, np.conj(x)]])
    return float(np.linalg.norm(M - rec))


def from_complex_adjoint(M: np.ndarray, tol: float = 1e-9) -> QMatrix:
    """Invert the embedding, averaging the redundant blocks.

    Raises StructureViolation when the block structure residual exceeds
    tol * (1 + ||M||_F).
    """
    m11, m12, m21, m22 = _adjoint_blocks(M)
    x = 0.5 * (m11 + np.conj(m22))
    y = 0.5 * (m21 - np.conj(m12))
    A = QMatrix(x, y)
    rec = np.block([[x, -np.conj(y)], [y, np.conj(x)]])
    resid = float(np.linalg.norm(np.asarray(M, dtype=complex) - rec))
    scale = 1.0 + float(np.linalg.norm(M))
    if resid > tol * scale:
        raise StructureViolation(
            f"structure residual {resid:.3e} exceeds {tol:.1e} * {scale:.3e}")
    return A


# -- real representation ---------------------------------------------------

def left_mult_rep(A: QMatrix) -> np.ndarray:
    """4n x 4n real matrix of x -> A x in grouped component coordinates."""
    a, b, c, d = A.components()
    return np.block([
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ])


def right_mult_rep(q, n: int) -> np.ndarray:
    """4n x 4n real matrix of x -> x q."""
    q = _as_quaternion(q)
    r4 = np.array([
        [q.a, -q.b, -q.c, -q.d],
        [q.b, q.a, q.d, -q.c],
        [q.c, -q.d, q.a, q.b],
        [q.d, q.c, -q.b, q.a],
    ])
    return np.kron(r4, np.eye(n))


class OperatorExpr:
    """Real-linear operator on H^n, kept as its 4n x 4n real matrix.

    Expressions are built from matrices and right scalar multiplications
    and combined with +, -, @ (composition) and one-sided scalar products.
    Because the realization is an algebra homomorphism, eager matrix
    arithmetic is exact.
    """

    def __init__(self, n: int, mat: np.ndarray):
        self.n = n
        self.mat = np.asarray(mat, dtype=float)
        if self.mat.shape != (4 * n, 4 * n):
            raise DimensionMismatch("operator matrix must be 4n x 4n")

    @classmethod
    def matrix(cls, A: QMatrix) -> "OperatorExpr":
        return cls(A.n, left_mult_rep(A))

    @classmethod
    def right_mult(cls, q, n: int) -> "OperatorExpr":
        return cls(n, right_mult_rep(q, n))

    @classmethod
    def identity(cls, n: int) -> "OperatorExpr":
        return cls(n, np.eye(4 * n))

    def _check(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"operator sizes {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return OperatorExpr(self.n, self.mat + other.mat)

    def __sub__(self, other):
        self._check(other)
        return OperatorExpr(self.n, self.mat - other.mat)

    def __neg__(self):
        return OperatorExpr(self.n, -self.mat)

    def __matmul__(self, other):
        self._check(other)
        return OperatorExpr(self.n, self.mat @ other.mat)

    def scalar_left(self, q) -> "OperatorExpr":
        """The operator x -> q * (T x)."""
        q = _as_quaternion(q)
        lrep = left_mult_rep(QMatrix.scalar(self.n, q))
        return OperatorExpr(self.n, lrep @ self.mat)

    def scalar_right(self, q) -> "OperatorExpr":
        """The operator x -> T(q x)."""
        q = _as_quaternion(q)
        lrep = left_mult_rep(QMatrix.scalar(self.n, q))
        return OperatorExpr(self.n, self.mat @ lrep)


def real_representation(expr) -> np.ndarray:
    """Real matrix of an operator expression (or of a plain QMatrix)."""
    if isinstance(expr, QMatrix):
        return left_mult_rep(expr)
    if isinstance(expr, OperatorExpr):
        return expr.mat.copy()
    raise TypeError("expected a QMatrix or OperatorExpr")


# -- pencils ---------------------------------------------------------------

def q_pencil(A: QMatrix, q) -> QMatrix:
    """Second order pencil A^2 - 2 Re(q) A + |q|^2 I.

    Depends on q only through Re(q) and |q|, hence is constant on the
    conjugation sphere of q.
    """
    q = _as_quaternion(q)
    n = A.n
    out = A.squared - (2.0 * q.real) * A + q.norm_sq() * QMatrix.identity(n)
    return out


def delta(A: QMatrix, z: complex) -> np.ndarray:
    """z I - chi(A), the slice restriction of right-multiplication by z minus A."""
    z = complex(z)
    return z * np.eye(2 * A.n, dtype=complex) - complex_adjoint(A)

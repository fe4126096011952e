"""The S-spectrum of a quaternionic matrix and the maps that probe it.

Every spectral question about a quaternion matrix A is answered through
the complex adjoint chi(A): its eigenvalues come in conjugate pairs and
their conjugation spheres form the S-spectrum.  The pencil

    Q_q(A) = A^2 - 2 Re(q) A + |q|^2 I

is singular exactly on those spheres, which gives an independent
membership test that never mentions eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    AlphaInSpectrum,
    NoConvergence,
    OddRealMultiplicity,
    SeriesDiverges,
    Singular,
)
from .operators import (
    QMatrix,
    complex_adjoint,
    from_complex_adjoint,
    left_mult_rep,
    q_pencil,
)
from .quaternion import Quaternion, Sphere

__all__ = [
    "eigenvalues",
    "SphereSet",
    "s_spectrum",
    "s_spectral_radius",
    "neumann_coefficients",
    "q_pencil_inverse",
    "s_resolvent",
    "Classification",
    "classify",
    "DistanceResult",
    "distance_to_spectrum",
    "quaternion_matrix_inverse",
]

# Relative threshold on the smallest singular value of the pencil's real
# representation, below which a point is declared spectral.
CLASSIFY_REL_TOL = 1e-10

SERIES_TERM_CAP = 10 ** 6


def eigenvalues(M: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues of a complex matrix, residual checked.

    The backend solver is free; the contract is that every returned
    lambda satisfies smin(lambda I - M) <= tol * ||M||_F.  Failure of
    either the solver or the check raises NoConvergence.
    """
    M = np.asarray(M, dtype=complex)
    try:
        lam = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigenvalue iteration failed: {exc}") from exc
    scale = float(np.linalg.norm(M))
    eye = np.eye(M.shape[0], dtype=complex)
    for lv in lam:
        smin = np.linalg.svd(lv * eye - M, compute_uv=False)[-1]
        if smin > tol * scale:
            raise NoConvergence(
                f"eigenvalue residual {smin:.3e} exceeds {tol:.1e} * {scale:.3e}")
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


@dataclass(frozen=True)
class SphereSet:
    """Finite union of conjugation spheres with multiplicities."""

    spheres: tuple[tuple[Sphere, int], ...]
    tol: float

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.spheres)

    def max_abs(self) -> float:
        return max(s.abs_max() for s, _ in self.spheres)

    def min_param_distance(self, alpha: float, beta: float) -> float:
        return min(s.param_distance(alpha, beta) for s, _ in self.spheres)

    def contains(self, q: Quaternion, tol: float | None = None) -> bool:
        t = self.tol if tol is None else tol
        return self.min_param_distance(q.real, abs(q.imag)) <= t

    def expanded(self) -> list[Sphere]:
        out = []
        for s, m in self.spheres:
            out.extend([s] * m)
        return out

    def match_distance(self, other: "SphereSet") -> float:
        """Smallest worst-case pairing distance between the two multisets.

        Infinite when total multiplicities differ.  Sizes at hand are
        tiny, so optimal matching by permutation search is fine; beyond
        eight spheres a sorted greedy pairing is used instead.
        """
        left = self.expanded()
        right = other.expanded()
        if len(left) != len(right):
            return math.inf
        key = lambda s: (s.re, s.im_norm)
        left = sorted(left, key=key)
        right = sorted(right, key=key)
        if len(left) > 8:
            return max(a.param_distance(b.re, b.im_norm)
                       for a, b in zip(left, right))
        import itertools

        best = math.inf
        for perm in itertools.permutations(range(len(right))):
            worst = max(left[i].param_distance(right[p].re, right[p].im_norm)
                        for i, p in enumerate(perm))
            best = min(best, worst)
        return best


def _cluster(points: list[tuple[float, float]], tol: float) -> list[list[int]]:
    # single linkage union-find; n is small
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if math.hypot(points[i][0] - points[j][0],
                          points[i][1] - points[j][1]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def s_spectrum(A: QMatrix, tol: float | None = None) -> SphereSet:
    """Conjugation spheres of the eigenvalues of chi(A).

    Eigenvalues are clustered in the (re, |im|) half plane with the given
    tolerance (default 1e-8 * (1 + ||A||)).  A cluster on the real axis
    must contain an even number of eigenvalues, half of which count
    toward its multiplicity; otherwise OddRealMultiplicity is raised.
    """
    if tol is None:
        tol = 1e-8 * (1.0 + A.norm)
    lam = eigenvalues(complex_adjoint(A))
    pts = [(float(lv.real), float(abs(lv.imag))) for lv in lam]
    spheres: list[tuple[Sphere, int]] = []
    for members in _cluster(pts, tol):
        alpha = sum(pts[i][0] for i in members) / len(members)
        beta = sum(pts[i][1] for i in members) / len(members)
        if beta <= tol:
            if len(members) % 2:
                raise OddRealMultiplicity(
                    f"real cluster at {alpha:.6g} holds {len(members)} eigenvalues")
            spheres.append((Sphere(alpha, 0.0), len(members) // 2))
        else:
            mult = sum(1 for i in members if lam[i].imag > 0)
            if 2 * mult != len(members):
                raise OddRealMultiplicity(
                    f"conjugate pairing broke at ({alpha:.6g}, {beta:.6g})")
            spheres.append((Sphere(alpha, beta), mult))
    spheres.sort(key=lambda t: (t[0].re, t[0].im_norm))
    out = SphereSet(tuple(spheres), tol)
    if out.total_multiplicity() != A.n:
        raise OddRealMultiplicity("sphere multiplicities do not sum to n")
    if out.max_abs() > A.norm + tol:
        raise NoConvergence("spectral sphere escaped the norm ball")
    return out


def s_spectral_radius(A: QMatrix, method: str = "eig") -> float:
    """Largest norm over the S-spectrum.

    "eig" reads it off chi(A).  "power" estimates lim ||A^N||^(1/N) by
    repeated squaring with renormalization, halting when successive
    estimates agree to 1 percent.
    """
    if method == "eig":
        lam = eigenvalues(complex_adjoint(A))
        return float(max(abs(lam)))
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    nrm = A.norm
    if nrm == 0.0:
        return 0.0
    C = A * (1.0 / nrm)
    log_gamma = math.log(nrm)
    est_prev = None
    for m in range(1, 61):
        C2 = C @ C
        eta = C2.norm
        if eta == 0.0:
            return 0.0
        C = C2 * (1.0 / eta)
        log_gamma = 2.0 * log_gamma + math.log(eta)
        est = math.exp(log_gamma / (1 << m))
        if est_prev is not None and m >= 3:
            if abs(est - est_prev) <= 0.01 * max(est, 1e-300):
                return est
        est_prev = est
    raise NoConvergence("power estimate did not settle within 60 doublings")


def neumann_coefficients(q: Quaternion, count: int) -> list[Quaternion]:
    """Coefficients a_n = sum_k q^(-k-1) conj(q)^(-n+k-1), n < count.

    Computed in honest quaternion arithmetic; each a_n is real up to
    roundoff, which callers may verify through its imaginary components.
    """
    qi = q.inverse()
    qbi = q.conjugate().inverse()
    # ascending power tables q^-1 .. q^-(count+1)
    pi = [qi]
    pb = [qbi]
    for _ in range(count):
        pi.append(pi[-1] * qi)
        pb.append(pb[-1] * qbi)
    out = []
    for n in range(count):
        acc = Quaternion()
        for k in range(n + 1):
            acc = acc + pi[k] * pb[n - k]
        out.append(acc)
    return out


def _neumann_pencil_inverse(A: QMatrix, q: Quaternion, tol: float) -> QMatrix:
    rad = s_spectral_radius(A, "eig")
    if abs(q) <= rad * (1.0 + 1e-12):
        raise SeriesDiverges(
            f"|q| = {abs(q):.6g} is inside the spectral radius {rad:.6g}")
    qi = q.inverse()
    qbi = q.conjugate().inverse()
    pi = [qi]
    pb = [qbi]
    total = QMatrix.zeros(A.n)
    P = QMatrix.identity(A.n)
    for n in range(SERIES_TERM_CAP):
        while len(pi) < n + 2:
            pi.append(pi[-1] * qi)
            pb.append(pb[-1] * qbi)
        acc = Quaternion()
        for k in range(n + 1):
            acc = acc + pi[k] * pb[n - k]
        if max(abs(acc.b), abs(acc.c), abs(acc.d)) > 1e-12 * (1.0 + abs(acc)):
            raise NoConvergence("series coefficient lost realness")
        term = acc.a * P
        total = total + term
        if term.norm <= tol * (1.0 + total.norm):
            return total
        P = P @ A
    raise NoConvergence("pencil series hit the term cap")


def _chi_inverse(A: QMatrix, M: np.ndarray, rel_floor: float) -> np.ndarray:
    smin = np.linalg.svd(M, compute_uv=False)[-1]
    if smin <= rel_floor:
        raise Singular(f"pencil is singular here (smin = {smin:.3e})")
    return np.linalg.inv(M)


def q_pencil_inverse(A: QMatrix, q, method: str = "direct",
                     tol: float = 1e-12) -> QMatrix:
    """Inverse of the pencil Q_q(A).

    "direct" inverts the complex adjoint and pulls the result back.
    "neumann" sums Q_q(A)^-1 = sum_n a_n A^n with the real coefficients
    a_n, valid for |q| beyond the spectral radius; tol is its truncation
    threshold.  Singularity of the pencil raises Singular.
    """
    q = q if isinstance(q, Quaternion) else Quaternion.from_complex(q)
    if method == "neumann":
        return _neumann_pencil_inverse(A, q, tol)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    Qp = q_pencil(A, q)
    M = complex_adjoint(Qp)
    floor = CLASSIFY_REL_TOL * (1.0 + A.norm ** 2)
    inv = _chi_inverse(A, M, floor)
    return from_complex_adjoint(inv, tol=1e-8)


def s_resolvent(A: QMatrix, s, side: str = "L", method: str = "formula",
                tol: float = 1e-12) -> QMatrix:
    """Left or right S-resolvent of A at s.

    formula:  L(s) = -Q_s(A)^-1 (A - conj(s) I)
              R(s) = -(A - conj(s) I) Q_s(A)^-1
    series:   L(s) = sum A^n s^(-n-1),  R(s) = sum s^(-n-1) A^n,
              valid for |s| > ||A||; tol is the truncation threshold.
    """
    s = s if isinstance(s, Quaternion) else Quaternion.from_complex(s)
    if side not in ("L", "R"):
        raise ValueError(f"side must be L or R, not {side!r}")
    n = A.n
    if method == "formula":
        Qinv = q_pencil_inverse(A, s, "direct")
        B = A - QMatrix.scalar(n, s.conjugate())
        return -(Qinv @ B) if side == "L" else -(B @ Qinv)
    if method != "series":
        raise ValueError(f"unknown method {method!r}")
    if abs(s) <= A.norm:
        raise SeriesDiverges(
            f"|s| = {abs(s):.6g} is not beyond the norm bound {A.norm:.6g}")
    si = s.inverse()
    coeff = si
    P = QMatrix.identity(n)
    total = QMatrix.zeros(n)
    for _ in range(SERIES_TERM_CAP):
        term = P.scalar_right(coeff) if side == "L" else P.scalar_left(coeff)
        total = total + term
        if term.norm <= tol * (1.0 + total.norm):
            return total
        P = P @ A
        coeff = coeff * si
    raise NoConvergence("resolvent series hit the term cap")


class Classification(NamedTuple):
    verdict: str  # "point_spectrum" or "resolvent"
    smin: float
    threshold: float


def classify(A: QMatrix, q) -> Classification:
    """Spectral membership test through the pencil, no eigenvalues involved.

    q lies on the S-spectrum exactly when the real representation of
    Q_q(A) is singular; numerically, when its smallest singular value
    drops below 1e-10 * (1 + ||A||^2).
    """
    q = q if isinstance(q, Quaternion) else Quaternion.from_complex(q)
    rep = left_mult_rep(q_pencil(A, q))
    smin = float(np.linalg.svd(rep, compute_uv=False)[-1])
    threshold = CLASSIFY_REL_TOL * (1.0 + A.norm ** 2)
    verdict = "point_spectrum" if smin <= threshold else "resolvent"
    return Classification(verdict, smin, threshold)


def quaternion_matrix_inverse(A: QMatrix) -> QMatrix:
    """Inverse of an invertible quaternion matrix via its complex adjoint."""
    M = complex_adjoint(A)
    smin = np.linalg.svd(M, compute_uv=False)[-1]
    if smin <= 1e-14 * (1.0 + float(np.linalg.norm(M))):
        raise Singular(f"matrix is singular (smin = {smin:.3e})")
    return from_complex_adjoint(np.linalg.inv(M), tol=1e-8)


class DistanceResult(NamedTuple):
    geometric: float
    via_radius: float


def distance_to_spectrum(A: QMatrix, alpha: float) -> DistanceResult:
    """Distance from a real point to the S-spectrum, computed two ways.

    Geometrically it is the least distance to any spectral sphere; it
    also equals 1 / r_S((alpha I - A)^-1).  Both values are returned and
    cross-checked.  A spectral alpha raises AlphaInSpectrum.
    """
    alpha = float(alpha)
    if classify(A, Quaternion(alpha)).verdict == "point_spectrum":
        raise AlphaInSpectrum(f"alpha = {alpha:.6g} lies on the S-spectrum")
    spheres = s_spectrum(A)
    geo = spheres.min_param_distance(alpha, 0.0)
    B = QMatrix.scalar(A.n, Quaternion(alpha)) - A
    r = s_spectral_radius(quaternion_matrix_inverse(B), "eig")
    via = 1.0 / r
    if abs(geo - via) > 1e-6 * (1.0 + geo):
        raise NoConvergence(
            f"distance cross-check failed: {geo:.12g} vs {via:.12g}")
    return DistanceResult(geo, via)

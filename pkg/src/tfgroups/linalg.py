"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer matrices hold ``int`` entries,
rational ones hold :class:`fractions.Fraction`.  Nothing here ever touches
floating point.

Normal-form conventions:

* :func:`hnf` is row style: ``U @ A == H``, ``H`` upper echelon with positive
  pivots and the entries above each pivot reduced into ``[0, pivot)``.
* :func:`snf` returns ``U, S, V`` with ``U @ A @ V == S`` and the diagonal
  of ``S`` forming a divisibility chain of non-negative integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple of Fraction
Matrix = list  # list of rows


def to_fraction(x) -> Fraction:
    """Parse ``x`` (int, Fraction or a string like ``"-3/4"``) exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    """``"a/b"`` in lowest terms, or ``"a"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def qvec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def is_zero(v: Sequence) -> bool:
    return not any(v)


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def shape(A: Matrix, ncols: Optional[int] = None) -> tuple[int, int]:
    if A:
        return len(A), len(A[0])
    return 0, (ncols or 0)


def matmul(A: Matrix, B: Matrix, inner: Optional[int] = None, ncols: Optional[int] = None) -> Matrix:
    """Product of two dense matrices.  ``inner``/``ncols`` resolve empty shapes."""
    m = len(A)
    n = len(B[0]) if B else (ncols or 0)
    k = len(B) if B else (inner or 0)
    out = []
    for i in range(m):
        row = A[i]
        out.append([sum((row[t] * B[t][j] for t in range(k)), 0) for j in range(n)])
    return out


def vecmat(v: Sequence, A: Matrix, ncols: int) -> Vector:
    """Row vector times matrix."""
    out = [Fraction(0)] * ncols
    for vi, row in zip(v, A):
        if vi:
            for j in range(ncols):
                if row[j]:
                    out[j] += vi * row[j]
    return tuple(out)


def matvec(A: Matrix, v: Sequence) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A)


def transpose(A: Matrix, ncols: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*A)]


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scal(c, v: Sequence) -> Vector:
    c = to_fraction(c)
    return tuple(c * a for a in v)


def det(A: Matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = -result
        result *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return result


def common_denominator(values: Iterable) -> int:
    d = 1
    for x in values:
        d = lcm(d, Fraction(x).denominator)
    return d


def content(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


def integer_scaled(rows: Sequence[Sequence]) -> tuple[Matrix, int]:
    """Clear all denominators at once: returns ``(D*rows, D)`` with integer entries."""
    D = common_denominator(x for row in rows for x in row)
    return [[int(Fraction(x) * D) for x in row] for row in rows], D


# --------------------------------------------------------------------------
# Hermite normal form


def hnf(A: Matrix, ncols: Optional[int] = None) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.  Returns ``(H, U)`` with ``U`` unimodular and ``U·A = H``."""
    m, n = shape(A, ncols)
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine every row below r into row r on column c
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [x y; -q p] has determinant 1
            H[r], H[i] = (
                [x * s + y * t for s, t in zip(H[r], H[i])],
                [-q * s + p * t for s, t in zip(H[r], H[i])],
            )
            U[r], U[i] = (
                [x * s + y * t for s, t in zip(U[r], U[i])],
                [-q * s + p * t for s, t in zip(U[r], U[i])],
            )
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [s - f * t for s, t in zip(H[i], H[r])]
                U[i] = [s - f * t for s, t in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_rank(H: Matrix) -> int:
    return sum(1 for row in H if any(row))


def lattice_basis(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """A ℤ-basis (HNF rows) of the lattice spanned by rational ``rows``."""
    if not rows:
        return []
    M, D = integer_scaled(rows)
    H, _ = hnf(M, ncols)
    return [tuple(Fraction(x, D) for x in row) for row in H if any(row)]


def integer_left_kernel(A: Matrix, ncols: int) -> list[tuple[int, ...]]:
    """ℤ-basis of ``{x ∈ ℤ^m : x·A = 0}`` for a rational ``m × ncols`` matrix."""
    m = len(A)
    if m == 0:
        return []
    M, _ = integer_scaled(A) if ncols else ([[] for _ in A], 1)
    H, U = hnf(M, ncols)
    return [tuple(U[i]) for i in range(m) if not any(H[i])]


# --------------------------------------------------------------------------
# Smith normal form


def snf(A: Matrix, ncols: Optional[int] = None) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(U, S, V)`` with ``U·A·V = S``."""
    m, n = shape(A, ncols)
    S = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in S:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = S[i][t] // piv
                if q:
                    add_row(i, t, -q)
                if S[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = S[t][j] // piv
                if q:
                    add_col(j, t, -q)
                if S[t][j]:
                    dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if not any(S[i][j] for i in range(t, m) for j in range(t, n)):
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def invariant_factors(A: Matrix, ncols: Optional[int] = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, S, _ = snf(A, ncols)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


# --------------------------------------------------------------------------
# rational elimination


def rref(A: Matrix, ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over ℚ with zero rows dropped; also the pivot columns."""
    _, n = shape(A, ncols)
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(A: Matrix, ncols: Optional[int] = None) -> int:
    return len(rref(A, ncols)[0])


def kernel_basis(A: Matrix, ncols: Optional[int] = None) -> list[Vector]:
    """Basis of the right kernel ``{x : A·x = 0}`` over ℚ."""
    _, n = shape(A, ncols)
    R, pivots = rref(A, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def left_kernel_basis(A: Matrix, ncols: int) -> list[Vector]:
    """Basis of ``{x : x·A = 0}`` over ℚ."""
    return kernel_basis(transpose(A, ncols), len(A))


def solve(A: Matrix, b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """Some ``x`` with ``A·x = b`` over ℚ, or ``None`` if the system is inconsistent."""
    m, n = shape(A, ncols)
    if len(b) != m:
        raise ValueError(f"dimension mismatch: matrix has {m} rows, right-hand side {len(b)}")
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return tuple(x)


def solve_left(A: Matrix, b: Sequence, ncols: int) -> Optional[Vector]:
    """Some ``x`` with ``x·A = b``."""
    return solve(transpose(A, ncols), b, len(A))


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A ℚ-subspace of ℚ^d held by its reduced row echelon basis (unique per subspace)."""

    ambient_dim: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return subspace_contains(self, v)


def subspace_span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    rows = [list(map(to_fraction, v)) for v in vectors]
    for r in rows:
        if len(r) != ambient_dim:
            raise ValueError(f"vector of length {len(r)} in ambient dimension {ambient_dim}")
    R, _ = rref(rows, ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in R))


def full_space(d: int) -> Subspace:
    return subspace_span(identity(d), d)


def zero_space(d: int) -> Subspace:
    return Subspace(d, ())


def _check_dims(*spaces: Subspace) -> None:
    if len({W.ambient_dim for W in spaces}) > 1:
        raise ValueError("subspaces live in different ambient dimensions")


def subspace_contains(W: Subspace, v: Sequence) -> bool:
    if len(v) != W.ambient_dim:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {W.ambient_dim}")
    w = [to_fraction(x) for x in v]
    # reduce against the echelon basis
    for row in W.basis:
        pc = next(i for i, x in enumerate(row) if x)
        if w[pc]:
            f = w[pc]
            w = [a - f * b for a, b in zip(w, row)]
    return not any(w)


def subspace_sum(W1: Subspace, W2: Subspace) -> Subspace:
    _check_dims(W1, W2)
    return subspace_span(W1.basis + W2.basis, W1.ambient_dim)


def annihilator(W: Subspace) -> list[Vector]:
    """Basis of ``{k : w·k = 0 for all w ∈ W}``."""
    return kernel_basis([list(r) for r in W.basis], W.ambient_dim)


def subspace_intersect(W1: Subspace, W2: Subspace) -> Subspace:
    _check_dims(W1, W2)
    d = W1.ambient_dim
    if not W1.basis or not W2.basis:
        return zero_space(d)
    # x ∈ W1 ∩ W2  iff  x = a·B1 with a·B1·K2 = 0
    K2 = annihilator(W2)
    if not K2:
        return W1
    B1 = [list(r) for r in W1.basis]
    BK = matmul(B1, transpose(K2, d), d, len(K2))
    coeffs = left_kernel_basis(BK, len(K2))
    return subspace_span((vecmat(a, B1, d) for a in coeffs), d)


def coordinates(W: Subspace, v: Sequence) -> Optional[Vector]:
    """Coefficients of ``v`` in the echelon basis of ``W`` (``None`` if ``v ∉ W``)."""
    if not subspace_contains(W, v):
        return None
    return tuple(to_fraction(v[next(i for i, x in enumerate(row) if x)]) for row in W.basis)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a·x + b·y = g = gcd(a, b) ≥ 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0

"""Brute-force reference procedures for refereeing the decision procedures.

Nothing here calls into :mod:`tfgroups.linalg` or the decision routines of
:mod:`tfgroups.groups`; only the group data model is shared.  Membership is
decided by writing every coefficient in the normal form ``a/m`` with ``m`` a
bounded product of the generator's primes and solving the resulting integer
system with a small self-contained elimination.

Answers are sound for "yes".  A "no" only says that no representation exists
with denominators inside the exponent bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .groups import LocalizedGroup

YES = "yes"
NO_WITHIN_BOUNDS = "no_within_bounds"


@dataclass(frozen=True)
class OracleBounds:
    exponent_bound: int = 3
    coeff_bound: int = 8
    k_max: int = 12

    def __post_init__(self):
        if min(self.exponent_bound, self.coeff_bound, self.k_max) < 0:
            raise ValueError("oracle bounds must be non-negative")


DEFAULT_BOUNDS = OracleBounds()


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _integer_solvable(rows: list[list[int]], target: list[int]) -> bool:
    """Is ``target`` an integer combination of ``rows``?

    Echelonizes the row lattice column by column with Euclid steps, then peels
    the target off pivot by pivot.
    """
    basis = [list(r) for r in rows if any(r)]
    n = len(target)
    echelon = []
    col = 0
    while basis and col < n:
        active = [r for r in basis if r[col] != 0]
        rest = [r for r in basis if r[col] == 0]
        if not active:
            col += 1
            continue
        piv = active[0]
        for r in active[1:]:
            g, x, y = _egcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [x * s + y * t for s, t in zip(piv, r)]
            other = [b * s - a * t for s, t in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        echelon.append((col, piv))
        basis = [r for r in rest if any(r)]
        col += 1
    t = list(target)
    for col, piv in echelon:
        if any(t[:col]):
            return False
        if t[col] % piv[col]:
            return False
        f = t[col] // piv[col]
        t = [s - f * u for s, u in zip(t, piv)]
    return not any(t)


def _lcm_den(values) -> int:
    d = 1
    for x in values:
        den = Fraction(x).denominator
        d = d * den // gcd(d, den)
    return d


def oracle_member(v: Sequence, G: LocalizedGroup, bounds: OracleBounds = DEFAULT_BOUNDS) -> str:
    """``"yes"`` if ``v = Σ (a_j/m_j)·v_j`` with ``m_j`` a product of ``P_j``-primes to exponents ≤ bound.

    Every denominator pattern divides the maximal one (all exponents at the
    bound), and ``a/m = (a·m'/m)/m'`` for ``m | m'``, so a single system with
    the maximal pattern covers them all.
    """
    v = [Fraction(x) for x in v]
    if len(v) != G.ambient_dim:
        raise ValueError("dimension mismatch")
    if not any(v):
        return YES
    scaled = []
    for g in G.generators:
        m = 1
        for p in g.primes:
            m *= p ** bounds.exponent_bound
        scaled.append([Fraction(x) / m for x in g.vector])
    if not scaled:
        return NO_WITHIN_BOUNDS
    D = _lcm_den(list(v) + [x for r in scaled for x in r])
    rows = [[int(x * D) for x in r] for r in scaled]
    return YES if _integer_solvable(rows, [int(x * D) for x in v]) else NO_WITHIN_BOUNDS


def oracle_inf_div(v: Sequence, G: LocalizedGroup, p: int, n_max: int = 5,
                   bounds: OracleBounds = DEFAULT_BOUNDS) -> bool:
    """``v/p^n ∈ G`` for ``n = 0..n_max`` by enumeration.

    The exponent bound is raised by ``n`` for the n-th check so that dividing
    by ``p^n`` cannot by itself push a member outside the search window.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    v = [Fraction(x) for x in v]
    for n in range(n_max + 1):
        b = OracleBounds(bounds.exponent_bound + n, bounds.coeff_bound, bounds.k_max)
        if oracle_member([x / p**n for x in v], G, b) != YES:
            return False
    return True


def _combinations(m: int, c: int):
    """Integer vectors in ``[-c, c]^m`` ordered by L1 norm, then lexicographically."""
    vecs = list(itertools.product(range(-c, c + 1), repeat=m))
    vecs.sort(key=lambda t: (sum(map(abs, t)), t))
    return vecs


def oracle_witness_search(g: Sequence, G: LocalizedGroup, primes, bounds: OracleBounds = DEFAULT_BOUNDS,
                          n_max: int = 5) -> Optional[tuple[int, tuple]]:
    """Search ``k ≤ k_max`` and bounded integer combinations ``z`` of ``p₃``-generators.

    ``primes`` is any object with ``p3`` and ``p4`` attributes.  A hit needs
    ``z`` infinitely ``p₃``-divisible and ``k·g + z`` infinitely
    ``p₄``-divisible, both checked with :func:`oracle_inf_div`.
    """
    g = [Fraction(x) for x in g]
    p3, p4 = primes.p3, primes.p4
    if not any(g):
        return 1, tuple(Fraction(0) for _ in g)
    cands = [gen.vector for gen in G.generators if p3 in gen.primes]
    for k in range(1, bounds.k_max + 1):
        for coeffs in _combinations(len(cands), bounds.coeff_bound):
            z = [Fraction(0)] * len(g)
            for a, vec in zip(coeffs, cands):
                if a:
                    z = [s + a * t for s, t in zip(z, vec)]
            kgz = [k * s + t for s, t in zip(g, z)]
            if not oracle_inf_div(kgz, G, p4, n_max, bounds):
                continue
            if oracle_inf_div(z, G, p3, n_max, bounds):
                return k, tuple(z)
    return None

"""Prime-localized subgroups of ℚ^d.

A :class:`LocalizedGroup` is a finite sum ``Σ_j ℤ[1/P_j]·v_j`` of cyclic
modules over localizations of ℤ.  Every group the K̂ machinery builds is of
this form, and the form is closed under sums, direct sums, scaling and
intersection with a rational subspace.

Local-global principle
----------------------
For a subgroup ``G`` of ℚ^d, ``G = ⋂_q G_(q)`` over all primes ``q``, and at a
prime ``q`` the localization splits as::

    G_(q) = W_q + L_q,     W_q = span_ℚ{v_j : q ∈ P_j},
                           L_q = ℤ_(q)-span{v_j : q ∉ P_j}.

Away from :func:`relevant_primes` the lattice part is saturated in its span,
so membership reduces to finitely many local tests, each one a Smith normal
form computation in the quotient ℚ^d / W_q.

Divisible parts
---------------
``p^ω G = G ∩ W_p``.  Sketch: if ``g ∈ G ∩ W_p`` then ``g/p^n`` lies in
``W_p ⊆ G_(p)`` and in ``G_(q)`` for every ``q ≠ p`` (``p`` is a unit there),
so ``g/p^n ∈ G``.  Conversely ``g ∈ p^ω G`` forces the image of ``g`` in
``ℚ^d/W_p`` into ``⋂_n p^n·π(L_p)``, which is zero because ``π(L_p)`` is a
finitely generated free ℤ_(p)-module.  The identity is exercised against a
brute-force oracle in the test suite.

Purity
------
For torsion-free groups ``H ≤_p G`` iff ``H = G ∩ span_ℚ(H)``, which is how
:func:`is_pure` decides it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from sympy import isprime, primefactors

from . import linalg as la
from .linalg import Subspace


class GroupError(ValueError):
    """Invalid group data or a violated precondition."""


# --------------------------------------------------------------------------
# primes


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int):
        raise GroupError(f"{p!r} is not an integer prime")
    if not isprime(p):
        raise GroupError(f"{p} is not prime")
    return p


def prime_set(primes: Iterable[int]) -> tuple[int, ...]:
    """Validated, strictly sorted tuple of distinct primes."""
    return tuple(sorted({check_prime(p) for p in primes}))


def _p_part(x: int, primes: Sequence[int]) -> int:
    """Largest divisor of ``x`` supported on ``primes``."""
    x = abs(x)
    out = 1
    for p in primes:
        while x % p == 0:
            x //= p
            out *= p
    return out


def _valuation(x: Fraction, p: int) -> Optional[int]:
    """p-adic valuation of a rational; ``None`` for zero."""
    if x == 0:
        return None
    n, d, v = x.numerator, x.denominator, 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


# --------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class Generator:
    """The cyclic ℤ[1/P]-module ``ℤ[1/P]·vector``."""

    vector: tuple
    primes: tuple = ()

    def canonical(self) -> Optional["Generator"]:
        """Scale away the P-unit part of the content; ``None`` for the zero vector.

        The result has ``content = a/b`` with no prime of ``P`` dividing ``a``
        or ``b`` and a positive sign.  It is integral whenever every
        denominator prime lies in ``P``.
        """
        v = tuple(la.to_fraction(x) for x in self.vector)
        if la.is_zero(v):
            return None
        primes = prime_set(self.primes)
        D = la.common_denominator(v)
        ints = [int(x * D) for x in v]
        num = la.content(ints)
        factor = Fraction(_p_part(D, primes), _p_part(num, primes))
        v = tuple(x * factor for x in v)
        # sign normalisation: ℤ[1/P]·v = ℤ[1/P]·(-v)
        lead = next(x for x in v if x)
        if lead < 0:
            v = tuple(-x for x in v)
        return Generator(v, primes)


@dataclass(frozen=True)
class LocalizedGroup:
    """The subgroup ``Σ_j ℤ[1/P_j]·v_j`` of ℚ^ambient_dim.

    Construct through :func:`group` (which canonicalizes) unless the
    generators are already canonical.  The empty generator list is the zero
    group.
    """

    ambient_dim: int
    generators: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for g in self.generators:
            if len(g.vector) != self.ambient_dim:
                raise GroupError(
                    f"generator of length {len(g.vector)} in ambient dimension {self.ambient_dim}"
                )

    # -- cached derived data -------------------------------------------------

    @cached_property
    def matrix(self) -> list:
        return [list(g.vector) for g in self.generators]

    @cached_property
    def span(self) -> Subspace:
        return la.subspace_span(self.matrix, self.ambient_dim)

    @property
    def rank(self) -> int:
        return self.span.dim

    @cached_property
    def all_primes(self) -> tuple:
        return tuple(sorted({p for g in self.generators for p in g.primes}))

    def divisible_span(self, p: int) -> Subspace:
        """``span_ℚ{v_j : p ∈ P_j}``, which equals the span of ``p^ω G``."""
        key = ("W", p)
        if key not in self._cache:
            self._cache[key] = la.subspace_span(
                (g.vector for g in self.generators if p in g.primes), self.ambient_dim
            )
        return self._cache[key]

    def is_zero(self) -> bool:
        return not self.generators

    def __len__(self):
        return len(self.generators)


def group(ambient_dim: int, generators: Iterable) -> LocalizedGroup:
    """Build a canonical group from ``(vector, primes)`` pairs or :class:`Generator` s."""
    gens = []
    for g in generators:
        if not isinstance(g, Generator):
            vec, primes = g
            g = Generator(tuple(la.to_fraction(x) for x in vec), tuple(primes))
        if len(g.vector) != ambient_dim:
            raise GroupError(f"generator of length {len(g.vector)} in ambient dimension {ambient_dim}")
        gens.append(g)
    return canonicalize(LocalizedGroup(ambient_dim, tuple(gens)))


def zero_group(ambient_dim: int) -> LocalizedGroup:
    return LocalizedGroup(ambient_dim, ())


def canonicalize(G: LocalizedGroup) -> LocalizedGroup:
    """Drop zero generators, normalise each one, remove exact duplicates (order kept)."""
    seen = set()
    out = []
    for g in G.generators:
        c = g.canonical()
        if c is not None and c not in seen:
            seen.add(c)
            out.append(c)
    return LocalizedGroup(G.ambient_dim, tuple(out))


def _check_vector(v: Sequence, G: LocalizedGroup) -> tuple:
    if len(v) != G.ambient_dim:
        raise GroupError(f"vector of length {len(v)} in ambient dimension {G.ambient_dim}")
    return tuple(la.to_fraction(x) for x in v)


def _check_same_dim(*groups: LocalizedGroup) -> None:
    if len({G.ambient_dim for G in groups}) > 1:
        raise GroupError(
            "ambient dimension mismatch: " + ", ".join(str(G.ambient_dim) for G in groups)
        )


# --------------------------------------------------------------------------
# primes that matter


def relevant_primes(G: LocalizedGroup) -> tuple[int, ...]:
    """Generator primes, denominator primes and invariant-factor primes.

    Outside this set every localization ``G_(q)`` equals ``span(G) ∩ ℤ_(q)^d``.
    """
    if "relevant" in G._cache:
        return G._cache["relevant"]
    ps = set(G.all_primes)
    if G.generators:
        M, D = la.integer_scaled(G.matrix)
        ps.update(primefactors(D))
        for f in la.invariant_factors(M, G.ambient_dim):
            ps.update(primefactors(f))
    out = tuple(sorted(ps))
    G._cache["relevant"] = out
    return out


# --------------------------------------------------------------------------
# membership


def _local_data(G: LocalizedGroup, q: int):
    """Precomputed Smith data for the test ``x ∈ G_(q)``.

    Returns ``(K, V, diag, D)``: ``K`` projects ℚ^d onto ℚ^d/W_q (columns
    annihilate ``W_q``), the remaining generators project to the integer
    matrix ``D·[v_j K]`` with Smith form ``U·A·V = diag``.
    """
    key = ("local", q)
    if key in G._cache:
        return G._cache[key]
    d = G.ambient_dim
    K = la.annihilator(G.divisible_span(q))  # list of column vectors
    k = len(K)
    if k == 0:
        data = (K, None, None, None)
    else:
        Kt = la.transpose(K, d)  # d × k
        rows = [la.vecmat(g.vector, Kt, k) for g in G.generators if q not in g.primes]
        if rows:
            A, D = la.integer_scaled(rows)
            _, S, V = la.snf(A, k)
            diag = [S[i][i] for i in range(min(len(S), k))]
        else:
            D, V, diag = 1, la.identity(k), []
        data = (Kt, V, diag, D)
    G._cache[key] = data
    return data


def _local_member(v: tuple, G: LocalizedGroup, q: int) -> bool:
    Kt, V, diag, D = _local_data(G, q)
    if V is None:
        return True
    k = len(V)
    t = la.vecmat(v, Kt, k)
    c = la.vecmat(tuple(x * D for x in t), V, k)
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if ci != 0:
                return False
        elif ci != 0 and _valuation(ci, q) < _valuation(Fraction(di), q):
            return False
    return True


def member(v: Sequence, G: LocalizedGroup) -> bool:
    """Decide ``v ∈ G``."""
    v = _check_vector(v, G)
    if la.is_zero(v):
        return True
    if not G.generators or not la.subspace_contains(G.span, v):
        return False
    primes = set(relevant_primes(G))
    for x in v:
        primes.update(primefactors(x.denominator))
    return all(_local_member(v, G, q) for q in sorted(primes))


def is_inf_divisible(v: Sequence, G: LocalizedGroup, p: int) -> bool:
    """Decide whether ``v/p^n ∈ G`` for every ``n ≥ 0``."""
    check_prime(p)
    v = _check_vector(v, G)
    return member(v, G) and la.subspace_contains(G.divisible_span(p), v)


def membership_order(v: Sequence, G: LocalizedGroup) -> int:
    """Least ``k > 0`` with ``k·v ∈ G``, or 0 when no multiple of ``v`` lies in ``G``."""
    v = _check_vector(v, G)
    if la.is_zero(v):
        return 1
    coeffs = la.solve_left(G.matrix, v, G.ambient_dim) if G.generators else None
    if coeffs is None:
        return 0
    # N·v lies in the integer span of the generators
    n = la.common_denominator(coeffs)
    for q in primefactors(n):
        while n % q == 0 and member(la.scal(n // q, v), G):
            n //= q
    return n


# --------------------------------------------------------------------------
# group arithmetic


def sum_groups(G: LocalizedGroup, H: LocalizedGroup) -> LocalizedGroup:
    _check_same_dim(G, H)
    return canonicalize(LocalizedGroup(G.ambient_dim, G.generators + H.generators))


def direct_sum(G: LocalizedGroup, H: LocalizedGroup) -> LocalizedGroup:
    """Block embedding into ℚ^(d₁+d₂): ``G`` on the first coordinates, ``H`` on the rest."""
    z1, z2 = la.zeros(H.ambient_dim), la.zeros(G.ambient_dim)
    gens = [Generator(g.vector + z1, g.primes) for g in G.generators]
    gens += [Generator(z2 + h.vector, h.primes) for h in H.generators]
    return canonicalize(LocalizedGroup(G.ambient_dim + H.ambient_dim, tuple(gens)))


def pad(G: LocalizedGroup, before: int = 0, after: int = 0) -> LocalizedGroup:
    """Embed ``G`` into a larger coordinate space by adding zero coordinates."""
    a, b = la.zeros(before), la.zeros(after)
    gens = tuple(Generator(a + g.vector + b, g.primes) for g in G.generators)
    return LocalizedGroup(G.ambient_dim + before + after, gens)


def scale(G: LocalizedGroup, n: int) -> LocalizedGroup:
    """The subgroup ``n·G``."""
    if isinstance(n, bool) or not isinstance(n, int) or n <= 0:
        raise GroupError(f"scale factor must be a positive integer, got {n!r}")
    gens = tuple(Generator(la.scal(n, g.vector), g.primes) for g in G.generators)
    return canonicalize(LocalizedGroup(G.ambient_dim, gens))


def map_group(G: LocalizedGroup, f, ambient_dim: int) -> LocalizedGroup:
    """Image of ``G`` under a ℚ-linear map ``f`` given as a callable on vectors."""
    gens = tuple(Generator(tuple(f(g.vector)), g.primes) for g in G.generators)
    return canonicalize(LocalizedGroup(ambient_dim, gens))


# --------------------------------------------------------------------------
# containment


def _generator_in(g: Generator, G: LocalizedGroup) -> bool:
    return member(g.vector, G) and all(
        la.subspace_contains(G.divisible_span(p), g.vector) for p in g.primes
    )


def contains_group(H: LocalizedGroup, G: LocalizedGroup) -> bool:
    """``True`` iff ``H ⊆ G`` as sets."""
    _check_same_dim(H, G)
    return all(_generator_in(g, G) for g in H.generators)


def equals_group(H: LocalizedGroup, G: LocalizedGroup) -> bool:
    return contains_group(H, G) and contains_group(G, H)


def prune(G: LocalizedGroup) -> LocalizedGroup:
    """Drop generators that the remaining ones already produce.

    Generators with fewer primes are tried first, so a lattice vector that is
    covered by a localized one disappears rather than the other way round.
    """
    gens = list(G.generators)
    order = sorted(range(len(gens)), key=lambda i: (len(gens[i].primes), i))
    alive = set(range(len(gens)))
    for i in order:
        rest = LocalizedGroup(G.ambient_dim, tuple(gens[j] for j in sorted(alive - {i})))
        if _generator_in(gens[i], rest):
            alive.discard(i)
    return LocalizedGroup(G.ambient_dim, tuple(gens[j] for j in sorted(alive)))


# --------------------------------------------------------------------------
# intersections with subspaces


def intersect_subspace(G: LocalizedGroup, W: Subspace) -> LocalizedGroup:
    """A presentation of ``G ∩ W``.

    Coefficient vectors ``c`` with ``Σ c_j v_j ∈ W`` form a rational space
    ``C``.  The result is assembled from

    * the lattice ``{c ∈ ℤ^m ∩ C}·M``, which is right at every prime outside
      the generator primes;
    * for each generator prime ``q``, the divisible part ``W_q ∩ W`` carried
      with prime set ``{q}``;
    * for each generator prime ``q``, lifts of a ℤ-basis of the saturated
      projection of ``C`` onto the coordinates with ``q ∉ P_j``, rescaled by a
      ``q``-unit so that they lie in ``G``.

    These agree with ``G ∩ W`` after localizing at every prime, hence
    globally.
    """
    d = G.ambient_dim
    if W.ambient_dim != d:
        raise GroupError(f"subspace of dimension {W.ambient_dim} in ambient dimension {d}")
    if not G.generators or not W.basis:
        return zero_group(d)
    M = G.matrix
    m = len(M)
    K = la.annihilator(W)
    k = len(K)
    if k:
        B = la.matmul(M, la.transpose(K, d), d, k)
        C = la.left_kernel_basis(B, k)
        lattice_coeffs = la.integer_left_kernel(B, k)
    else:
        B = [[] for _ in range(m)]
        C = [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
        lattice_coeffs = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    if not C:
        return zero_group(d)

    lattice = [la.vecmat(c, M, d) for c in lattice_coeffs]
    divisible = []
    for q in G.all_primes:
        J = [j for j in range(m) if q in G.generators[j].primes]
        Jc = [j for j in range(m) if j not in J]
        # divisible part: coefficients supported on J
        BJ = [B[j] for j in J]
        for cJ in la.left_kernel_basis(BJ, k) if k else [
            tuple(Fraction(int(a == b)) for b in range(len(J))) for a in range(len(J))
        ]:
            D = la.common_denominator(cJ)
            vec = la.zeros(d)
            for j, cj in zip(J, cJ):
                vec = la.add(vec, la.scal(cj * D, M[j]))
            if not la.is_zero(vec):
                divisible.append(Generator(vec, (q,)))
        if not Jc:
            continue
        # lattice part at q: saturate the projection of C onto the Jc coordinates
        proj = [[c[j] for j in Jc] for c in C]
        Y = la.subspace_span(proj, len(Jc))
        if not Y.basis:
            continue
        ann = la.annihilator(Y)
        if ann:
            sat = la.integer_left_kernel(la.transpose(ann, len(Jc)), len(ann))
        else:
            sat = [tuple(int(a == b) for b in range(len(Jc))) for a in range(len(Jc))]
        for y in sat:
            t = la.solve_left(proj, y, len(Jc))
            c = la.vecmat(t, [list(r) for r in C], m)
            s = la.common_denominator(c[j] for j in J)
            s //= _p_part(s, (q,))
            lattice.append(la.vecmat(la.scal(s, c), M, d))

    gens = [Generator(v, ()) for v in la.lattice_basis(lattice, d)] + divisible
    return prune(canonicalize(LocalizedGroup(d, tuple(gens))))


def p_omega(G: LocalizedGroup, p: int) -> LocalizedGroup:
    """``p^ω G``: the elements divisible by every power of ``p``."""
    check_prime(p)
    return intersect_subspace(G, G.divisible_span(p))


def pure_closure(S: Iterable[Sequence], G: LocalizedGroup) -> LocalizedGroup:
    """Smallest pure subgroup of ``G`` containing the vectors ``S``."""
    S = [_check_vector(v, G) for v in S]
    for v in S:
        if not member(v, G):
            raise GroupError(f"pure_closure: {[la.fraction_str(x) for x in v]} is not in the group")
    return intersect_subspace(G, la.subspace_span(S, G.ambient_dim))


def pure_closure_of_group(H: LocalizedGroup, G: LocalizedGroup) -> LocalizedGroup:
    """``G ∩ span(H)``, the pure closure of a subgroup ``H ⊆ G``."""
    _check_same_dim(H, G)
    return intersect_subspace(G, H.span)


def impurity_witness(H: LocalizedGroup, G: LocalizedGroup) -> Optional[Generator]:
    """A generator of ``G ∩ span(H)`` not inside ``H``, or ``None`` when ``H`` is pure."""
    _check_same_dim(H, G)
    if not contains_group(H, G):
        raise GroupError("purity test needs H ⊆ G")
    closure = intersect_subspace(G, H.span)
    return next((g for g in closure.generators if not _generator_in(g, H)), None)


def is_pure(H: LocalizedGroup, G: LocalizedGroup) -> bool:
    """``H ≤_p G``, i.e. ``qH = H ∩ qG`` for every prime ``q``."""
    return impurity_witness(H, G) is None


# --------------------------------------------------------------------------
# sampling


def random_element(G: LocalizedGroup, seed, exponent_bound: int = 3, coeff_bound: int = 8) -> tuple:
    """Deterministic pseudo-random ``Σ (a_j/m_j)·v_j`` with bounded numerators and denominators."""
    if exponent_bound < 0 or coeff_bound < 0:
        raise GroupError("bounds must be non-negative")
    rng = random.Random(seed)
    v = la.zeros(G.ambient_dim)
    for g in G.generators:
        a = rng.randint(-coeff_bound, coeff_bound)
        m = 1
        for p in g.primes:
            m *= p ** rng.randint(0, exponent_bound)
        if a:
            v = la.add(v, la.scal(Fraction(a, m), g.vector))
    return v


# --------------------------------------------------------------------------
# JSON


def to_json(G: LocalizedGroup) -> dict:
    G = canonicalize(G)
    return {
        "ambient_dim": G.ambient_dim,
        "generators": [
            {"vector": [la.fraction_str(x) for x in g.vector], "primes": list(g.primes)}
            for g in G.generators
        ],
    }


def from_json(data) -> LocalizedGroup:
    """Parse and validate the group format; errors name the offending location."""
    if not isinstance(data, dict):
        raise GroupError("group: expected a JSON object")
    d = data.get("ambient_dim")
    if isinstance(d, bool) or not isinstance(d, int) or d < 0:
        raise GroupError("ambient_dim: expected a non-negative integer")
    gens_data = data.get("generators")
    if not isinstance(gens_data, list):
        raise GroupError("generators: expected a list")
    gens = []
    for i, gd in enumerate(gens_data):
        where = f"generators[{i}]"
        if not isinstance(gd, dict):
            raise GroupError(f"{where}: expected an object")
        vec = gd.get("vector")
        primes = gd.get("primes", [])
        if not isinstance(vec, list):
            raise GroupError(f"{where}.vector: expected a list")
        if len(vec) != d:
            raise GroupError(f"{where}.vector: length {len(vec)} but ambient_dim is {d}")
        try:
            vec = tuple(la.to_fraction(x) for x in vec)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise GroupError(f"{where}.vector: {exc}") from None
        if not isinstance(primes, list):
            raise GroupError(f"{where}.primes: expected a list")
        for j, p in enumerate(primes):
            try:
                check_prime(p)
            except GroupError as exc:
                raise GroupError(f"{where}.primes[{j}]: {exc}") from None
        gens.append(Generator(vec, tuple(primes)))
    return canonicalize(LocalizedGroup(d, tuple(gens)))

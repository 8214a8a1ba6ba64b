"""The class K̂ of torsion-free groups and the constructions built on it.

A nonzero group ``G`` is in K̂ when either

1. ``G = p₁^ω G`` and ``p^ω G = 0`` for all ``p ≠ p₁`` (class K1), or
2. (a) every ``g ∈ p₁^ω G`` has at most one ``z ∈ p₃^ω G`` with
   ``g + z ∈ p₄^ω G`` and (b) some ``k > 0``, ``z ∈ p₃^ω G`` give
   ``k·g + z ∈ p₄^ω G`` (class K2).

All divisible parts are pure subgroups whose spans are the spaces
``W_p = span{v_j : p ∈ P_j}`` (see :mod:`tfgroups.groups`).  That turns both
halves of condition 2 into linear algebra:

* (a) fails iff ``p₃^ω G ∩ p₄^ω G ≠ 0``, and a nonzero vector of
  ``W₃ ∩ W₄`` has an integer multiple in ``G``, hence in both parts.  So (a)
  is ``W₃ ∩ W₄ = 0``.
* (b) asks ``k·g ∈ p₃^ω G + p₄^ω G`` for some ``k``; every vector in the span
  of that sum has such a multiple, so (b) is ``W₁ ⊆ W₃ + W₄``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from . import linalg as la
from .groups import (
    Generator,
    GroupError,
    LocalizedGroup,
    canonicalize,
    check_prime,
    contains_group,
    direct_sum,
    equals_group,
    from_json,
    group,
    intersect_subspace,
    is_inf_divisible,
    is_pure,
    map_group,
    member,
    membership_order,
    p_omega,
    pad,
    sum_groups,
    to_json,
    zero_group,
)
from .linalg import Subspace


# --------------------------------------------------------------------------
# parameters and labels


@dataclass(frozen=True)
class PrimeTuple:
    p1: int = 2
    p3: int = 3
    p4: int = 5
    p5: int = 7

    def __post_init__(self):
        ps = [check_prime(p) for p in (self.p1, self.p3, self.p4, self.p5)]
        if len(set(ps)) != 4:
            raise GroupError(f"primes must be pairwise distinct, got {ps}")

    @classmethod
    def parse(cls, text: str) -> "PrimeTuple":
        try:
            parts = [int(x) for x in text.split(",")]
        except ValueError:
            raise GroupError(f"--primes: expected four comma-separated integers, got {text!r}") from None
        if len(parts) != 4:
            raise GroupError(f"--primes: expected four primes, got {len(parts)}")
        return cls(*parts)

    def as_list(self) -> list[int]:
        return [self.p1, self.p3, self.p4, self.p5]


DEFAULT_PRIMES = PrimeTuple()


class Kind(str, Enum):
    ZERO = "Zero"
    K1 = "K1"
    K2 = "K2"
    NOT_IN_KHAT = "NotInKhat"


class Reason(str, Enum):
    FAILS_1_AND_2A = "FailsCond1AndCond2a"
    FAILS_1_AND_2B = "FailsCond1AndCond2b"


@dataclass(frozen=True)
class ClassLabel:
    kind: Kind
    reason: Optional[Reason] = None
    details: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        return self.kind.value

    def to_json(self) -> dict:
        out = {"label": self.kind.value}
        if self.reason is not None:
            out["reason"] = self.reason.value
        if self.details:
            out["details"] = self.details
        return out


def _vec_json(v) -> list[str]:
    return [la.fraction_str(x) for x in v]


def _integral_multiple(v: Sequence, G: LocalizedGroup) -> tuple:
    """A positive integer multiple of ``v ∈ span(G)`` lying in ``G``."""
    return la.scal(membership_order(v, G), v)


# --------------------------------------------------------------------------
# conditions


def check_2a(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> bool:
    """At most one ``p₃``-witness per element, i.e. ``p₃^ω G ∩ p₄^ω G = 0``."""
    return la.subspace_intersect(G.divisible_span(primes.p3), G.divisible_span(primes.p4)).dim == 0


def check_2b(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> bool:
    """Every element of ``p₁^ω G`` has a witness, i.e. ``W₁ ⊆ W₃ + W₄``."""
    W34 = la.subspace_sum(G.divisible_span(primes.p3), G.divisible_span(primes.p4))
    return all(la.subspace_contains(W34, v) for v in G.divisible_span(primes.p1).basis)


def _cond1_failure(G: LocalizedGroup, primes: PrimeTuple) -> Optional[dict]:
    """Why ``G`` is not in K1, or ``None`` if it is."""
    W1 = G.divisible_span(primes.p1)
    for g in G.generators:
        if not la.subspace_contains(W1, g.vector):
            return {"check": "not_p1_divisible", "element": _vec_json(g.vector)}
    for q in sorted(set(G.all_primes) | {primes.p3, primes.p4, primes.p5}):
        if q == primes.p1:
            continue
        W = G.divisible_span(q)
        if W.dim:
            return {
                "check": "nonzero_p_omega",
                "prime": q,
                "element": _vec_json(_integral_multiple(W.basis[0], G)),
            }
    return None


def classify(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> ClassLabel:
    """Zero, K1, K2 or NotInKhat (with the checks that failed).

    Primes that occur in no generator have ``W_p = 0`` and therefore
    ``p^ω G = 0``, so condition 1 only needs the generator primes.
    """
    G = canonicalize(G)
    if G.is_zero():
        return ClassLabel(Kind.ZERO)
    c1 = _cond1_failure(G, primes)
    if c1 is None:
        return ClassLabel(Kind.K1)
    ok_a, ok_b = check_2a(G, primes), check_2b(G, primes)
    if ok_a and ok_b:
        return ClassLabel(Kind.K2)
    details = {"cond1": c1}
    if not ok_a:
        W = la.subspace_intersect(G.divisible_span(primes.p3), G.divisible_span(primes.p4))
        details["cond2a"] = {
            "check": "p3_p4_parts_meet",
            "element": _vec_json(_integral_multiple(W.basis[0], G)),
        }
    if not ok_b:
        W34 = la.subspace_sum(G.divisible_span(primes.p3), G.divisible_span(primes.p4))
        bad = next(v for v in G.divisible_span(primes.p1).basis if not la.subspace_contains(W34, v))
        details["cond2b"] = {"check": "no_witness", "element": _vec_json(_integral_multiple(bad, G))}
    reason = Reason.FAILS_1_AND_2A if not ok_a else Reason.FAILS_1_AND_2B
    return ClassLabel(Kind.NOT_IN_KHAT, reason, details)


def in_khat(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> bool:
    return classify(G, primes).kind is not Kind.NOT_IN_KHAT


def _require_class(G, primes, allowed, what):
    label = classify(G, primes)
    if label.kind not in allowed:
        raise GroupError(f"{what}: group classifies as {label.kind.value}")
    return label


# --------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class WitnessPair:
    k: int
    z: tuple


def _decompose(g: Sequence, W3: Subspace, W4: Subspace) -> Optional[tuple[tuple, tuple]]:
    """``g = a + b`` with ``a ∈ W3``, ``b ∈ W4``; unique when the spaces meet trivially."""
    d = len(g)
    basis = list(W3.basis) + list(W4.basis)
    if not basis:
        return (la.zeros(d), la.zeros(d)) if la.is_zero(g) else None
    t = la.solve_left([list(r) for r in basis], g, d)
    if t is None:
        return None
    n3 = len(W3.basis)
    a = la.vecmat(t[:n3], [list(r) for r in W3.basis], d) if n3 else la.zeros(d)
    return a, la.sub(g, a)


def find_witness(g: Sequence, G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> WitnessPair:
    """The least ``k`` and its ``z ∈ p₃^ω G`` with ``k·g + z ∈ p₄^ω G``.

    Valid ``k`` form the ideal of integers sending both components of
    ``g = a + b`` (``a ∈ W₃``, ``b ∈ W₄``) into ``G``; ``z = -k·a``.
    """
    G = canonicalize(G)
    g = tuple(la.to_fraction(x) for x in g)
    _require_class(G, primes, {Kind.K2}, "find_witness")
    if not is_inf_divisible(g, G, primes.p1):
        raise GroupError("find_witness: element is not in the p1-divisible part")
    if la.is_zero(g):
        return WitnessPair(1, la.zeros(G.ambient_dim))
    parts = _decompose(g, G.divisible_span(primes.p3), G.divisible_span(primes.p4))
    assert parts is not None, "condition 2(b) holds, so the decomposition exists"
    a, b = parts
    ka = membership_order(a, G)
    kb = membership_order(b, G)
    assert ka and kb
    k = lcm(ka, kb)
    return WitnessPair(k, la.scal(-k, a))


# --------------------------------------------------------------------------
# closure


@dataclass
class ClosureTrace:
    stages: list  # [(kind, LocalizedGroup)], kind in {"span", "purify", "witness"}
    final: LocalizedGroup
    case: int
    witnesses: list = field(default_factory=list)  # [(parent, WitnessPair)]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "final": to_json(self.final),
            "stages": [{"kind": k, "group": to_json(G)} for k, G in self.stages],
            "witnesses": [
                {"parent": _vec_json(g), "k": w.k, "z": _vec_json(w.z)} for g, w in self.witnesses
            ],
        }


def closure_op(
    elements: Iterable[Sequence],
    G: LocalizedGroup,
    primes: PrimeTuple = DEFAULT_PRIMES,
    base: Optional[LocalizedGroup] = None,
) -> ClosureTrace:
    """Smallest pure K̂-subgroup of ``G`` containing ``elements`` (and ``base``).

    Case 1 happens iff the pure closure ``C`` of the input is in K1 or zero:
    ``C`` sits inside every pure subgroup containing the input, and pure
    subgroups of a K1 group are K1.  Otherwise rounds of *purify* and
    *adjoin the witnesses of the p₁-part generators* run to a fixed point.
    Witnesses of generators suffice: if ``k_i·u_i + z_i ∈ p₄^ω`` then a
    combination ``Σ c_i u_i`` has the witness ``Σ (K c_i/k_i) z_i`` for a
    common multiple ``K``.  Each non-final round grows the span, so at most
    ``dim + 1`` rounds occur.
    """
    G = canonicalize(G)
    d = G.ambient_dim
    _require_class(G, primes, {Kind.ZERO, Kind.K1, Kind.K2}, "closure_op")
    elements = [tuple(la.to_fraction(x) for x in v) for v in elements]
    for v in elements:
        if len(v) != d:
            raise GroupError(f"closure_op: element of length {len(v)} in ambient dimension {d}")
        if not member(v, G):
            raise GroupError(f"closure_op: element {_vec_json(v)} is not in the ambient group")
    gens = [Generator(v, ()) for v in elements]
    if base is not None:
        if base.ambient_dim != d or not contains_group(base, G):
            raise GroupError("closure_op: base is not a subgroup of the ambient group")
        gens = list(base.generators) + gens
    spanned = canonicalize(LocalizedGroup(d, tuple(gens)))
    current = intersect_subspace(G, spanned.span)
    stages = [("span", spanned), ("purify", current)]
    if classify(current, primes).kind in (Kind.ZERO, Kind.K1):
        return ClosureTrace(stages, current, 1)

    witnesses = []
    cap = 3 * d + 3
    for _ in range(cap):
        part = p_omega(current, primes.p1)
        new = []
        for gen in part.generators:
            w = find_witness(gen.vector, G, primes)
            witnesses.append((gen.vector, w))
            if not la.is_zero(w.z):
                new.append(Generator(w.z, ()))
        adjoined = sum_groups(current, LocalizedGroup(d, tuple(new)))
        if adjoined.span == current.span:
            # every witness already lies in the pure subgroup ``current``
            return ClosureTrace(stages, current, 2, witnesses)
        stages.append(("witness", adjoined))
        current = intersect_subspace(G, adjoined.span)
        stages.append(("purify", current))
    raise AssertionError("closure_op exceeded its round cap")


# --------------------------------------------------------------------------
# Galois types


@dataclass
class GaloisTypeHandle:
    ambient: LocalizedGroup
    base: LocalizedGroup
    element: tuple
    closure: LocalizedGroup
    trace: ClosureTrace
    provenance: list  # one dict per closure generator
    primes: PrimeTuple = DEFAULT_PRIMES

    def to_json(self) -> dict:
        return {
            "ambient": to_json(self.ambient),
            "base": to_json(self.base),
            "element": _vec_json(self.element),
            "closure": to_json(self.closure),
            "case": self.trace.case,
            "provenance": self.provenance,
        }


def _provenance(closure, base, element, witnesses):
    d = closure.ambient_dim
    with_elem = sum_groups(base, LocalizedGroup(d, (Generator(element, ()),))) if not la.is_zero(element) else base
    zs = [w.z for _, w in witnesses if not la.is_zero(w.z)]
    zspan = la.subspace_span(zs, d)
    tags = []
    for gen in closure.generators:
        single = LocalizedGroup(d, (gen,))
        if contains_group(single, base):
            tags.append({"tag": "from_base"})
        elif zs and la.subspace_contains(zspan, gen.vector):
            tag = {"tag": "forced_witness", "k": None, "parent": None}
            for parent, w in witnesses:
                if not la.is_zero(w.z) and la.subspace_span([w.z, gen.vector], d).dim == 1:
                    tag = {"tag": "forced_witness", "k": w.k, "parent": _vec_json(parent)}
                    break
            tags.append(tag)
        elif contains_group(single, with_elem):
            tags.append({"tag": "from_element"})
        else:
            tags.append({"tag": "forced_by_division"})
    return tags


def gtype(b: Sequence, base: LocalizedGroup, N: LocalizedGroup,
          primes: PrimeTuple = DEFAULT_PRIMES) -> GaloisTypeHandle:
    """Galois type of ``b`` over ``base`` inside ``N``, held through its closure."""
    base, N = canonicalize(base), canonicalize(N)
    b = tuple(la.to_fraction(x) for x in b)
    if base.ambient_dim != N.ambient_dim:
        raise GroupError("gtype: base and ambient live in different dimensions")
    if not contains_group(base, N):
        raise GroupError("gtype: base is not a subgroup of the ambient group")
    if not is_pure(base, N):
        raise GroupError("gtype: base is not pure in the ambient group")
    if not member(b, N):
        raise GroupError("gtype: element is not in the ambient group")
    trace = closure_op([b], N, primes, base=base)
    prov = _provenance(trace.final, base, b, trace.witnesses)
    return GaloisTypeHandle(N, base, b, trace.final, trace, prov, primes)


@dataclass
class LinearIso:
    """A ℚ-linear map given on a basis of its domain's span."""

    ambient_dim: int
    sources: list
    images: list

    def __call__(self, v: Sequence) -> tuple:
        d = self.ambient_dim
        t = la.solve_left([list(s) for s in self.sources], v, d) if self.sources else None
        if t is None:
            if la.is_zero(v):
                return la.zeros(d)
            raise GroupError("vector outside the domain of the isomorphism")
        return la.vecmat(t, [list(i) for i in self.images], d)

    def to_json(self) -> dict:
        return {
            "sources": [_vec_json(s) for s in self.sources],
            "images": [_vec_json(i) for i in self.images],
        }


@dataclass
class TypeComparison:
    equal: bool
    iso: Optional[LinearIso]
    reason: str

    def __bool__(self):
        return self.equal


class _Builder:
    """Grows a linear map one (source, image) pair at a time, checking consistency."""

    def __init__(self, d):
        self.d = d
        self.sources, self.images = [], []

    def add(self, s, i) -> bool:
        if la.is_zero(s):
            return la.is_zero(i)
        if self.sources:
            t = la.solve_left([list(x) for x in self.sources], s, self.d)
            if t is not None:
                return la.vecmat(t, [list(x) for x in self.images], self.d) == tuple(i)
        self.sources.append(tuple(s))
        self.images.append(tuple(i))
        return True

    def apply(self, v):
        return LinearIso(self.d, self.sources, self.images)(v)


def gtype_equal(t1: GaloisTypeHandle, t2: GaloisTypeHandle) -> TypeComparison:
    """Decide ``gtp(b₁/A; N₁) = gtp(b₂/A; N₂)`` by building the only possible isomorphism.

    Any isomorphism of closures fixing the base and sending ``b₁ ↦ b₂`` is
    ℚ-linear on spans, so it is pinned down on ``span(A ∪ {b₁})``.  On each
    new ``p₁``-divisible direction ``g`` the witness component ``a`` (with
    ``g - a ∈ p₄``-part) must go to the witness component of ``f(g)`` in the
    target, by uniqueness of witnesses.  The candidate is then checked to be
    injective and to carry one closure onto the other.
    """
    if t1.base.ambient_dim != t2.base.ambient_dim or t1.base.generators != t2.base.generators:
        raise GroupError("gtype_equal: the two types are over different base presentations")
    if t1.primes != t2.primes:
        raise GroupError("gtype_equal: the two types use different prime tuples")
    primes = t1.primes
    d = t1.closure.ambient_dim
    c1, c2 = t1.closure, t2.closure
    f = _Builder(d)
    for gen in t1.base.generators:
        f.add(gen.vector, gen.vector)
    if not f.add(t1.element, t2.element):
        return TypeComparison(False, None, "element image conflicts with the base")

    k1 = classify(c1, primes).kind
    if k1 is Kind.K2:
        W1 = c1.divisible_span(primes.p1)
        W3a, W4a = c1.divisible_span(primes.p3), c1.divisible_span(primes.p4)
        W3b, W4b = c2.divisible_span(primes.p3), c2.divisible_span(primes.p4)
        while True:
            dom = la.subspace_span(f.sources, d)
            grew = False
            for g in la.subspace_intersect(dom, W1).basis:
                a, _ = _decompose(g, W3a, W4a)
                target = _decompose(f.apply(g), W3b, W4b)
                if target is None:
                    return TypeComparison(
                        False, None, f"no witness for the image of {_vec_json(g)} in the second closure"
                    )
                before = len(f.sources)
                if not f.add(a, target[0]):
                    return TypeComparison(False, None, "forced witness images are inconsistent")
                grew |= len(f.sources) > before
            if not grew:
                break

    dom = la.subspace_span(f.sources, d)
    if dom != c1.span:
        raise AssertionError("forced map does not cover the first closure")
    if la.rank([list(i) for i in f.images], d) != len(f.images):
        return TypeComparison(False, None, "forced map is not injective")
    iso = LinearIso(d, f.sources, f.images)
    image = map_group(c1, iso, d)
    if not contains_group(image, c2):
        return TypeComparison(False, None, "image of the first closure is not inside the second")
    if not contains_group(c2, image):
        return TypeComparison(False, None, "forced map is not onto the second closure")
    return TypeComparison(True, iso, "forced map is an isomorphism of closures")


# --------------------------------------------------------------------------
# witness families


def _check_n(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GroupError(f"n must be a positive integer, got {n!r}")


def _unit(i: int, d: int) -> tuple:
    return tuple(Fraction(int(i == j)) for j in range(d))


def x_(alpha: int, n: int) -> tuple:
    """Coordinate vector ``x_α`` in ℚ^{2n} (x block first, then z block)."""
    return _unit(alpha, 2 * n)


def z_(alpha: int, n: int) -> tuple:
    return _unit(n + alpha, 2 * n)


def build_G_base(n: int, primes: PrimeTuple = DEFAULT_PRIMES) -> LocalizedGroup:
    """``⟨p₁^{-k} x_α⟩`` inside ℚ^{2n}."""
    _check_n(n)
    return group(2 * n, [(x_(a, n), [primes.p1]) for a in range(n)])


def build_G_U(n: int, U: Iterable[int] = (), primes: PrimeTuple = DEFAULT_PRIMES) -> LocalizedGroup:
    """``⟨p₁^{-k} x_α, p₃^{-k} z_α, p₄^{-k}(x_α+z_α), p₅^{-k} z_β : β ∈ U⟩``."""
    _check_n(n)
    U = sorted(set(U))
    if any(not isinstance(b, int) or b < 0 or b >= n for b in U):
        raise GroupError(f"U must be a subset of 0..{n - 1}, got {U}")
    gens = []
    for a in range(n):
        gens.append((x_(a, n), [primes.p1]))
        gens.append((z_(a, n), [primes.p3]))
        gens.append((la.add(x_(a, n), z_(a, n)), [primes.p4]))
    for b in U:
        gens.append((z_(b, n), [primes.p5]))
    return group(2 * n, gens)


# --------------------------------------------------------------------------
# joint embedding and extensions


def jep_witness(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> LocalizedGroup:
    """A K2 group containing a K1 group ``G`` purely, on ``d + rank`` coordinates.

    New coordinates ``z_i`` are matched with a maximal independent set
    ``g_i`` of generator vectors; the group adds ``p₃^{-n} z_i`` and
    ``p₄^{-n}(g_i + z_i)``.  ``G`` sits on the first ``d`` coordinates.
    """
    G = canonicalize(G)
    label = _require_class(G, primes, {Kind.ZERO, Kind.K1}, "jep_witness")
    if label.kind is Kind.ZERO:
        return G
    d = G.ambient_dim
    chosen = []
    for gen in G.generators:
        if la.rank([list(v) for v in chosen + [gen.vector]], d) > len(chosen):
            chosen.append(gen.vector)
    r = len(chosen)
    H = pad(G, after=r)
    gens = list(H.generators)
    for i, g in enumerate(chosen):
        zi = _unit(d + i, d + r)
        gens.append(Generator(zi, (primes.p3,)))
        gens.append(Generator(la.add(g + la.zeros(r), zi), (primes.p4,)))
    return canonicalize(LocalizedGroup(d + r, tuple(gens)))


@dataclass
class JointEmbedding:
    H: LocalizedGroup
    blocks: list  # (offset, width) of each input inside H; width 0 for the zero group


def _lift(G, primes):
    kind = classify(G, primes).kind
    if kind is Kind.NOT_IN_KHAT:
        raise GroupError("joint_embed: input is not in K-hat")
    if kind is Kind.ZERO:
        return None
    if kind is Kind.K1:
        return jep_witness(G, primes)
    return G


def joint_embed(G1: LocalizedGroup, G2: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> JointEmbedding:
    """Common K̂ extension: lift K1 inputs to K2, then take the direct sum.

    A zero input embeds trivially and contributes no coordinates.
    """
    L1, L2 = _lift(canonicalize(G1), primes), _lift(canonicalize(G2), primes)
    parts = [L for L in (L1, L2) if L is not None]
    if not parts:
        return JointEmbedding(zero_group(0), [(0, 0), (0, 0)])
    H = parts[0] if len(parts) == 1 else direct_sum(parts[0], parts[1])
    blocks, off = [], 0
    for G, L in ((G1, L1), (G2, L2)):
        if L is None:
            blocks.append((off, 0))
        else:
            blocks.append((off, G.ambient_dim))
            off += L.ambient_dim
    return JointEmbedding(H, blocks)


def embed_block(G: LocalizedGroup, offset: int, total: int) -> LocalizedGroup:
    """Place ``G`` on coordinates ``offset .. offset+d`` of ℚ^total."""
    return pad(G, before=offset, after=total - offset - G.ambient_dim)


def proper_extension(G: LocalizedGroup, primes: PrimeTuple = DEFAULT_PRIMES) -> LocalizedGroup:
    """A strictly larger K̂ group in which ``G`` (on the leading coordinates) is pure.

    K1 groups use their JEP witness; zero and K2 groups get a direct summand
    ``build_G_U(1, ∅)`` attached.
    """
    G = canonicalize(G)
    kind = _require_class(G, primes, {Kind.ZERO, Kind.K1, Kind.K2}, "proper_extension").kind
    if kind is Kind.K1:
        return jep_witness(G, primes)
    return direct_sum(G, build_G_U(1, (), primes))


# --------------------------------------------------------------------------
# experiments


def subsets(n: int) -> list[tuple[int, ...]]:
    """All subsets of ``0..n-1``, by size then lexicographically."""
    return [c for k in range(n + 1) for c in itertools.combinations(range(n), k)]


@dataclass
class InstabilityReport:
    n: int
    subsets: list
    equal: list  # equal[i][j] for types i, j
    distinct_types: int
    distinguishing: list  # one fact per unequal pair

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "subsets": [list(U) for U in self.subsets],
            "equality_matrix": self.equal,
            "distinct_types": self.distinct_types,
            "expected_types": 2**self.n,
            "distinguishing_facts": self.distinguishing,
        }


EXPERIMENT_CAP = 4


def instability_report(n: int, primes: PrimeTuple = DEFAULT_PRIMES, cap: Optional[int] = EXPERIMENT_CAP) -> InstabilityReport:
    """Types of ``z₀`` over ``G_base(n)`` inside every ``G_U(n, U)``, compared pairwise."""
    _check_n(n)
    if cap is not None and n > cap:
        raise GroupError(f"n = {n} exceeds the experiment cap {cap}")
    base = build_G_base(n, primes)
    Us = subsets(n)
    groups = [build_G_U(n, U, primes) for U in Us]
    types = [gtype(z_(0, n), base, GU, primes) for GU in groups]
    m = len(types)
    eq = [[i == j for j in range(m)] for i in range(m)]
    facts = []
    for i in range(m):
        for j in range(i + 1, m):
            res = gtype_equal(types[i], types[j])
            eq[i][j] = eq[j][i] = res.equal
            if not res.equal:
                beta = min(set(Us[i]) ^ set(Us[j]))
                facts.append({
                    "pair": [list(Us[i]), list(Us[j])],
                    "beta": beta,
                    "z_beta_p5_divisible": [
                        is_inf_divisible(z_(beta, n), groups[i], primes.p5),
                        is_inf_divisible(z_(beta, n), groups[j], primes.p5),
                    ],
                    "reason": res.reason,
                })
    classes = []
    for i in range(m):
        if not any(eq[i][c] for c in classes):
            classes.append(i)
    return InstabilityReport(n, Us, eq, len(classes), facts)


@dataclass
class ObstructionCertificate:
    n: int
    U: tuple
    V: tuple
    primes: PrimeTuple
    beta: int
    groups: dict  # name -> group JSON
    facts: list  # each {"id", "kind", "group", ..., "expected"}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "U": list(self.U),
            "V": list(self.V),
            "primes": self.primes.as_list(),
            "beta": self.beta,
            "groups": self.groups,
            "facts": self.facts,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ObstructionCertificate":
        return cls(
            data["n"], tuple(data["U"]), tuple(data["V"]), PrimeTuple(*data["primes"]),
            data["beta"], data["groups"], data["facts"],
        )


def amalgamation_certificate(n: int, U: Iterable[int], V: Iterable[int],
                             primes: PrimeTuple = DEFAULT_PRIMES) -> ObstructionCertificate:
    """Checkable facts behind the failure to amalgamate ``G_U ≥_p G_base ≤_p G_V``.

    In an amalgam inside K̂ the two copies of ``z_α`` would both be the unique
    ``p₃``-witness for ``x_α`` and so coincide; the ``p₅``-divisibility of
    ``z_β`` then transfers between sides, contradicting the F4 facts.  That
    last step is an argument, not a computation.
    """
    _check_n(n)
    U, V = tuple(sorted(set(U))), tuple(sorted(set(V)))
    if U == V:
        raise GroupError("amalgamation_certificate needs U != V")
    base, GU, GV = build_G_base(n, primes), build_G_U(n, U, primes), build_G_U(n, V, primes)
    beta = min(set(U) ^ set(V))
    groups = {"G_base": to_json(base), "G_U": to_json(GU), "G_V": to_json(GV)}
    facts = []

    def fact(fid, kind, expected, **kw):
        facts.append({"id": fid, "kind": kind, "expected": expected, **kw})

    fact("F1.U", "pure", True, sub="G_base", group="G_U")
    fact("F1.V", "pure", True, sub="G_base", group="G_V")
    for side in ("G_U", "G_V"):
        for a in range(n):
            fact(f"F2.{side}.z{a}", "inf_divisible", True, group=side,
                 vector=_vec_json(z_(a, n)), prime=primes.p3)
            fact(f"F2.{side}.x{a}+z{a}", "inf_divisible", True, group=side,
                 vector=_vec_json(la.add(x_(a, n), z_(a, n))), prime=primes.p4)
    fact("F3.U", "check_2a", True, group="G_U")
    fact("F3.V", "check_2a", True, group="G_V")
    with_beta = "G_U" if beta in U else "G_V"
    without = "G_V" if with_beta == "G_U" else "G_U"
    zb = _vec_json(z_(beta, n))
    fact("F4.with", "inf_divisible", True, group=with_beta, vector=zb, prime=primes.p5)
    fact("F4.without", "inf_divisible", False, group=without, vector=zb, prime=primes.p5)
    return ObstructionCertificate(n, U, V, primes, beta, groups, facts)


def check_fact(cert: ObstructionCertificate, f: dict) -> bool:
    """Re-evaluate one fact; ``True`` when the computed value matches ``expected``."""
    G = from_json(cert.groups[f["group"]])
    kind = f["kind"]
    if kind == "pure":
        H = from_json(cert.groups[f["sub"]])
        value = contains_group(H, G) and is_pure(H, G)
    elif kind == "inf_divisible":
        value = is_inf_divisible(tuple(la.to_fraction(x) for x in f["vector"]), G, f["prime"])
    elif kind == "check_2a":
        value = check_2a(G, cert.primes)
    else:
        raise GroupError(f"unknown fact kind {kind!r}")
    return value == f["expected"]


def verify_certificate(cert: ObstructionCertificate) -> bool:
    """Recheck the certificate's structure, its groups and every fact."""
    try:
        U, V = set(cert.U), set(cert.V)
        if U == V or cert.beta not in U ^ V:
            return False
        expected = {
            "G_base": build_G_base(cert.n, cert.primes),
            "G_U": build_G_U(cert.n, cert.U, cert.primes),
            "G_V": build_G_U(cert.n, cert.V, cert.primes),
        }
        for name, G in expected.items():
            if not equals_group(from_json(cert.groups[name]), G):
                return False
        ids = {f["id"] for f in cert.facts}
        needed = {"F1.U", "F1.V", "F3.U", "F3.V", "F4.with", "F4.without"}
        if not needed <= ids:
            return False
        side = {f["id"]: f["group"] for f in cert.facts}
        with_beta = "G_U" if cert.beta in U else "G_V"
        if side["F4.with"] != with_beta or side["F4.without"] == with_beta:
            return False
        return all(check_fact(cert, f) for f in cert.facts)
    except (KeyError, TypeError, ValueError):
        return False

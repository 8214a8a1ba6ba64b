"""Shared fixture groups and reference presentations for the test modules."""

from fractions import Fraction

from tfgroups import linalg as la
from tfgroups.groups import group, zero_group
from tfgroups.kclass import PrimeTuple, build_G_base, build_G_U, subsets, x_, z_

DEFAULT = PrimeTuple()
ALT = PrimeTuple(11, 13, 17, 19)
PRIME_TUPLES = [DEFAULT, ALT]


def Zloc(*primes):
    """ℤ[1/P] inside ℚ¹."""
    return group(1, [((1,), primes)])


def k1_fixtures(pt=DEFAULT):
    p = pt.p1
    return {
        "Z[1/p1]": Zloc(p),
        "G_base(1)": build_G_base(1, pt),
        "G_base(2)": build_G_base(2, pt),
        "G_base(3)": build_G_base(3, pt),
        "skew rank 2": group(3, [((1, 1, 0), [p]), ((0, 1, 3), [p])]),
    }


def all_fixtures(pt=DEFAULT):
    """Eight K̂ groups: zero, five K1 groups, two K2 groups."""
    fx = {"zero": zero_group(1)}
    fx.update(k1_fixtures(pt))
    fx["G_empty(1)"] = build_G_U(1, (), pt)
    fx["G_{1}(2)"] = build_G_U(2, (1,), pt)
    return fx


def family_cases(max_n=3):
    return [(n, U) for n in range(1, max_n + 1) for U in subsets(n)]


def family_pomega_rhs(n, U, p, pt=DEFAULT):
    """Hand transcription of the four p^ω identities for G_U."""
    d = 2 * n
    if p == pt.p1:
        gens = [(x_(a, n), [pt.p1]) for a in range(n)]
    elif p == pt.p3:
        gens = [(z_(a, n), [pt.p3]) for a in range(n)] + [(z_(b, n), [pt.p5]) for b in U]
    elif p == pt.p4:
        gens = [(la.add(x_(a, n), z_(a, n)), [pt.p4]) for a in range(n)]
    elif p == pt.p5:
        gens = [(z_(b, n), [q]) for b in U for q in (pt.p3, pt.p5)]
    else:
        gens = []
    return group(d, gens)


def frac_vec(*xs):
    return tuple(Fraction(x) for x in xs)


def rand_group(rng, primes, max_dim=3, max_gens=3, entry=4, p_prob=0.4):
    """Small random group over the given primes."""
    d = rng.randint(1, max_dim)
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        v = [rng.randint(-entry, entry) for _ in range(d)]
        gens.append((v, [p for p in primes if rng.random() < p_prob]))
    return group(d, gens)


def rand_probe(rng, G, primes, outsider=23):
    """A member of G, or a member nudged by a small fraction (often a non-member)."""
    from tfgroups.groups import random_element

    v = random_element(G, rng.randint(0, 10**9), exponent_bound=1, coeff_bound=4)
    if rng.random() < 0.4:
        return v
    v = list(v)
    i = rng.randrange(G.ambient_dim)
    v[i] += Fraction(rng.randint(-3, 3), rng.choice(list(primes) + [1, 1, outsider]))
    return tuple(v)

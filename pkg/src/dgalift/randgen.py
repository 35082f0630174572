"""Seeded random instances for the property suites.

Unconstrained random matrices essentially never square to zero, so
square-zero differentials come from structured families: fixture matrices
over the variable-free subalgebra conjugated by random units.  Everything
is driven by an explicit `random.Random` so runs are reproducible.
"""

from __future__ import annotations

import random
from typing import Optional

from .algebra import AlgElem, Signature, component_monomials
from .field import Field
from .module import Differential, DOpPair, FreeModule, GradedMap, invert_unit


def rand_scalar(field: Field, rng: random.Random, nonzero: bool = False):
    while True:
        c = field.of_int(rng.randint(-3, 3))
        if not nonzero or c != field.zero:
            return c


def rand_elem(
    sig: Signature,
    degree: int,
    rng: random.Random,
    poly_bound: int = 1,
    max_terms: int = 2,
) -> AlgElem:
    monos = component_monomials(sig, degree, poly_bound)
    if not monos:
        return sig.zero()
    out = {}
    k = rng.randint(1, max_terms)
    for _ in range(k):
        m = monos[rng.randrange(len(monos))]
        c = rand_scalar(sig.field, rng)
        if c == sig.field.zero:
            continue
        s = sig.field.add(out.get(m, sig.field.zero), c)
        if s == sig.field.zero:
            out.pop(m, None)
        else:
            out[m] = s
    return AlgElem(sig, out)


def rand_homogeneous(sig, rng, max_degree: int = 4, poly_bound: int = 1) -> AlgElem:
    for _ in range(6):
        e = rand_elem(sig, rng.randint(0, max_degree), rng, poly_bound)
        if not e.is_zero():
            return e
    return sig.one()


def rand_map(
    module: FreeModule,
    degree: int,
    rng: random.Random,
    poly_bound: int = 1,
    density: float = 0.7,
) -> GradedMap:
    entries = {}
    for r in range(module.rank):
        for c in range(module.rank):
            want = module.degrees[c] + degree - module.degrees[r]
            if want < 0 or rng.random() > density:
                continue
            e = rand_elem(module.sig, want, rng, poly_bound, max_terms=1)
            if not e.is_zero():
                entries[(r, c)] = e
    return GradedMap(module, degree, entries, check=False)


def rand_diff(module: FreeModule, rng: random.Random, poly_bound: int = 1) -> Differential:
    """A random element of the differential family (no square-zero promise)."""
    return Differential(rand_map(module, -1, rng, poly_bound))


def rand_dop(module: FreeModule, d: Differential, rng: random.Random, degree: Optional[int] = None) -> DOpPair:
    if degree is None:
        degree = rng.randint(-2, 1)
    return DOpPair(
        rand_map(module, degree, rng),
        rand_map(module, degree + 1, rng),
        d,
    )


def rand_unit(
    module: FreeModule,
    rng: random.Random,
    poly_bound: int = 1,
    strict_raising: bool = True,
) -> GradedMap:
    """Identity plus one nilpotent off-diagonal entry (square zero).

    The inverse is then the identity minus the same entry, so polygen
    degrees of the inverse match the unit; conjugations stay inside
    predictable solver bounds.
    """
    one = GradedMap.identity(module)
    spots = []
    for r in range(module.rank):
        for c in range(module.rank):
            if r == c:
                continue
            want = module.degrees[c] - module.degrees[r]
            if want < 0:
                continue
            if strict_raising and want == 0:
                continue
            spots.append((r, c, want))
    rng.shuffle(spots)
    for r, c, want in spots:
        e = rand_elem(module.sig, want, rng, poly_bound, max_terms=1)
        if not e.is_zero():
            return one + GradedMap(module, 0, {(r, c): e}, check=False)
    return one


def unit_poly_degree(u: GradedMap) -> int:
    return max((v.poly_degree() for v in u.entries.values()), default=0)


class FixturePool:
    """Shared signatures, modules, and square-zero differentials per field."""

    def __init__(self, field: Field):
        self.field = field
        self.S3 = Signature(field, ["a"]).adjoin("X", 1, "a")
        base = Signature(field, ["a", "b"]).adjoin("W1", 1, "a").adjoin("W2", 1, "b")
        self.S1 = base.adjoin("X", 2, "b*W1 - a*W2")
        self.Sodd3 = self.S1.adjoin("Z", 3, "X + W1*W2")
        self.S2 = (
            Signature(field, ["a", "b", "c"])
            .adjoin("X1", 1, "a*b")
            .adjoin("X2", 1, "a*c")
            .adjoin("Y", 2, "c*X1 - b*X2")
        )

        self.N3 = FreeModule(self.S3, [("f0", 0), ("f1", 1), ("f2", 2)])
        self.d3 = Differential(
            GradedMap(
                self.N3,
                -1,
                {
                    (0, 1): self.S3.parse("a"),
                    (1, 2): self.S3.parse("a"),
                    (0, 2): -self.S3.parse("a*X"),
                },
            )
        )
        self.N1 = FreeModule(self.S1, [("e0", 0), ("e1", 3)])
        self.d1 = Differential(
            GradedMap(self.N1, -1, {(0, 1): self.S1.parse("X + W1*W2")})
        )
        self.NK = FreeModule(
            self.S1, [("k0", 0), ("k1", 1), ("k2", 1), ("k3", 2)]
        )
        self.dK = Differential(
            GradedMap(
                self.NK,
                -1,
                {
                    (0, 1): self.S1.parse("a"),
                    (0, 2): self.S1.parse("b"),
                    (1, 3): self.S1.parse("b"),
                    (2, 3): -self.S1.parse("a"),
                },
            )
        )
        self.Nodd = FreeModule(self.Sodd3, [("g0", 0), ("g1", 4)])
        self.dodd = Differential(
            GradedMap(self.Nodd, -1, {(0, 1): self.Sodd3.parse("b*X*W1 - a*X*W2")})
        )
        # small general-purpose modules for operator identities
        self.M2_S3 = FreeModule(self.S3, [("e0", 0), ("e1", 2)])
        self.M2_S1 = FreeModule(self.S1, [("e0", 0), ("e1", 2)])
        self.M2_odd = FreeModule(self.Sodd3, [("e0", 0), ("e1", 3)])

    def any_signature(self, rng: random.Random) -> Signature:
        return [self.S3, self.S1, self.Sodd3, self.S2][rng.randrange(4)]

    def module_with_var(self, rng: random.Random):
        """A module together with the top variable of its signature."""
        mod = [self.N3, self.M2_S3, self.M2_S1, self.M2_odd][rng.randrange(4)]
        return mod, mod.sig.top_variable.name

    def square_zero_instance(self, rng: random.Random):
        """A square-zero differential, conjugated into general position."""
        mod, d = [
            (self.N3, self.d3),
            (self.N1, self.d1),
            (self.NK, self.dK),
            (self.Nodd, self.dodd),
        ][rng.randrange(4)]
        u = rand_unit(mod, rng)
        if u == GradedMap.identity(mod):
            return mod, d, mod.sig.top_variable.name
        return mod, d.conjugate(u, invert_unit(u)), mod.sig.top_variable.name

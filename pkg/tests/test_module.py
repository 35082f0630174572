import pytest

from dgalift import QQ, Signature, diff
from dgalift.errors import NotInvertibleError, SchemaError
from dgalift.module import (
    Differential,
    DOpPair,
    FreeModule,
    GradedMap,
    apply_diff,
    apply_map,
    bracket,
    bracket_diff,
    bracket_diff2,
    compose,
    direct_sum,
    dop_normalize,
    idempotent,
    invert_unit,
    is_scalar_cycle,
    left_mult,
    sharp_map,
    shift,
    square_of,
    twofold_extension,
    unit_elementary,
)


def test_apply_map_identity(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 2)])
    x = mod.elem([("e0", "X"), ("e1", "a")])
    assert apply_map(GradedMap.identity(mod), x) == x


def test_apply_map_degree_zero_scalar(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 2)])
    la = left_mult(mod, S1.parse("a"))
    for name in mod.names:
        assert apply_map(la, mod.basis_elem(name)) == mod.elem([(name, "a")])


def test_apply_map_single_entry(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    f = GradedMap.single(mod, "e0", "e1", S1.parse("W1"))
    x = mod.elem([("e1", "W2")])
    assert apply_map(f, x) == mod.elem([("e0", "W1*W2")])


def test_apply_diff_free(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    free = Differential.free(mod)
    # sign is (-1)^{basis degree}
    assert apply_diff(free, mod.elem([("e1", "X")])) == mod.elem(
        [("e1", "a*W2 - b*W1")]
    )
    assert apply_diff(free, mod.basis_elem("e1")).is_zero()


def test_apply_diff_square_zero_fixture(N3):
    mod, d = N3
    assert apply_diff(d, apply_diff(d, mod.basis_elem("f2"))).is_zero()
    assert d.square_zero


def test_compose_matrix_units(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1), ("e2", 2)])
    assert compose(unit_elementary(mod, 0, 1), unit_elementary(mod, 1, 2)) == (
        unit_elementary(mod, 0, 2)
    )
    assert compose(idempotent(mod, 0), idempotent(mod, 1)).is_zero()
    f = GradedMap.single(mod, "e0", "e1", S1.parse("W1"))
    assert compose(f, GradedMap.identity(mod)) == f


def test_left_mult_commute(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    la, lb = left_mult(mod, S1.parse("a*W1")), left_mult(mod, S1.parse("b*W2"))
    assert bracket(la, lb).is_zero()


def test_left_mult_one_is_identity(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    assert left_mult(mod, S1.one()) == GradedMap.identity(mod)


def test_left_mult_sign(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    lw = left_mult(mod, S1.parse("W1"))
    assert lw.entry("e0", "e0") == S1.parse("W1")
    assert lw.entry("e1", "e1") == S1.parse("-W1")


def test_bracket_odd_self(S1):
    mod = FreeModule(S1, [("e0", 0), ("e1", 1)])
    f = GradedMap.single(mod, "e0", "e1", S1.parse("a"), degree=-1)
    assert bracket(f, f) == compose(f, f).scale(2)


def test_square_of_examples(S3, N3):
    mod, d = N3
    assert square_of(Differential.free(mod)).is_zero()
    assert square_of(d).is_zero()
    rank2 = FreeModule(S3, [("e0", 0), ("e1", 2)])
    dd = Differential(GradedMap(rank2, -1, {(0, 1): S3.parse("X")}))
    sq = square_of(dd)
    assert sq == GradedMap.single(rank2, "e0", "e1", S3.parse("a"), degree=-2)


def test_bracket_diff_examples(S1, N3):
    mod, d = N3
    assert bracket_diff(d, GradedMap.identity(mod)).is_zero()
    b = mod.sig.parse("a*X")
    assert bracket_diff(Differential.free(mod), left_mult(mod, b)) == left_mult(
        mod, diff(b)
    )
    assert bracket_diff2(d, d) == square_of(d).scale(2)


def test_dop_normalize_forms(N3):
    mod, d = N3
    g = GradedMap.single(mod, "f0", "f1", mod.sig.parse("a"), degree=-1)
    p = dop_normalize([[d, g]], d)
    assert p.f == bracket_diff(d, g)
    assert p.g == -g  # (-1)^{|g|} g with |g| odd
    q = dop_normalize([[g]], d)
    assert q.f == g and q.g.is_zero()
    sq = dop_normalize([[d, d]], d)
    assert sq.f == square_of(d) and sq.g.is_zero()


def test_idempotents_sum(N3):
    mod, _ = N3
    total = GradedMap.zero(mod, 0)
    for i in range(mod.rank):
        total = total + idempotent(mod, i)
    assert total == GradedMap.identity(mod)
    assert apply_map(idempotent(mod, 1), mod.basis_elem(1)) == mod.basis_elem(1)
    assert apply_map(idempotent(mod, 1), mod.basis_elem(0)).is_zero()
    eps = idempotent(mod, 2)
    assert compose(eps, eps) == eps


def test_invert_unit_identity(N3):
    mod, _ = N3
    one = GradedMap.identity(mod)
    assert invert_unit(one) == one


def test_invert_unit_nilpotent(N3):
    mod, _ = N3
    n = GradedMap.single(mod, "f0", "f1", mod.sig.parse("X"), degree=0)
    u = GradedMap.identity(mod) + n
    assert invert_unit(u) == GradedMap.identity(mod) - n


def test_invert_unit_random_roundtrip(S1):
    import random

    from dgalift.randgen import rand_unit

    mod = FreeModule(S1, [("e0", 0), ("e1", 1), ("e2", 2)])
    rng = random.Random(5)
    one = GradedMap.identity(mod)
    for _ in range(15):
        u = rand_unit(mod, rng, poly_bound=2)
        v = compose(u, rand_unit(mod, rng))
        vi = invert_unit(v)
        assert compose(v, vi) == one and compose(vi, v) == one


def test_invert_unit_rejects_singular(N3):
    mod, _ = N3
    u = GradedMap.identity(mod) + GradedMap.single(
        mod, "f0", "f0", mod.sig.parse("a"), degree=0
    )
    with pytest.raises(NotInvertibleError):
        invert_unit(u)  # 1 + a is not invertible in a polynomial ring


def test_is_scalar_cycle(N3):
    mod, d = N3
    b = mod.sig.parse("a")
    assert is_scalar_cycle(left_mult(mod, b), d) == b
    assert is_scalar_cycle(idempotent(mod, 0), d) is None
    zero = GradedMap.zero(mod, -2)
    assert is_scalar_cycle(zero, d) == mod.sig.zero()
    # left multiplication by a non-cycle commutes with matrix units but not with d
    w = Signature(QQ, ["a"]).adjoin("X", 1, "a").parse("X")
    assert is_scalar_cycle(left_mult(mod, mod.sig.parse("X")), d) is None


def test_shift_and_direct_sum(N3):
    mod, _ = N3
    assert shift(mod, 0) is mod
    sh = shift(mod, -1)
    assert sh.degrees == (1, 2, 3)
    both = direct_sum(mod, sh)
    assert both.rank == 6
    with pytest.raises(SchemaError):
        direct_sum(mod, mod)


def test_twofold_extension(N3):
    mod, d = N3
    dbl, ds = twofold_extension(mod, d, -1)
    assert dbl.rank == 6
    assert ds.square_zero
    r = mod.rank
    for (i, j), v in d.matrix.entries.items():
        assert ds.matrix.entry(i + r, j + r) == -v  # (-1)^k with k = -1


def test_sharp_map_sign(N3):
    mod, d = N3
    sig = mod.sig
    dbl, _ = twofold_extension(mod, d, -1)
    for text in ["a", "X", "a*X"]:
        b = sig.parse(text)
        assert sharp_map(left_mult(mod, b), dbl, -1) == left_mult(dbl, b)


def test_dop_apply_matches_composition(N3):
    mod, d = N3
    f = GradedMap.single(mod, "f0", "f1", mod.sig.parse("a"), degree=-1)
    p = DOpPair.of_map(f, d).compose(DOpPair.of_diff(d))
    x = mod.elem([("f2", "X"), ("f1", "a")])
    assert p.apply(x) == f.apply(d.apply(x))

import pytest

from dgalift import QQ, Signature
from dgalift.module import Differential, FreeModule, GradedMap


@pytest.fixture(scope="session")
def S1():
    return (
        Signature(QQ, ["a", "b"])
        .adjoin("W1", 1, "a")
        .adjoin("W2", 1, "b")
        .adjoin("X", 2, "b*W1 - a*W2")
    )


@pytest.fixture(scope="session")
def S2():
    return (
        Signature(QQ, ["a", "b", "c"])
        .adjoin("X1", 1, "a*b")
        .adjoin("X2", 1, "a*c")
        .adjoin("Y", 2, "c*X1 - b*X2")
    )


@pytest.fixture(scope="session")
def S3():
    return Signature(QQ, ["a"]).adjoin("X", 1, "a")


@pytest.fixture(scope="session")
def N3(S3):
    """Rank-3 fixture with a square-zero differential depending on X."""
    mod = FreeModule(S3, [("f0", 0), ("f1", 1), ("f2", 2)])
    d = Differential(
        GradedMap(
            mod,
            -1,
            {
                (0, 1): S3.parse("a"),
                (1, 2): S3.parse("a"),
                (0, 2): -S3.parse("a*X"),
            },
        )
    )
    return mod, d


@pytest.fixture(scope="session")
def N1(S1):
    """Rank-2 fixture whose obstruction never bounds (non-liftable)."""
    mod = FreeModule(S1, [("e0", 0), ("e1", 3)])
    d = Differential(GradedMap(mod, -1, {(0, 1): S1.parse("X + W1*W2")}))
    return mod, d


@pytest.fixture(scope="session")
def N1prime(S1):
    """A module obtained by twisting a variable-free differential by a unit."""
    mod = FreeModule(S1, [("e0", 0), ("e1", 1), ("e2", 3)])
    m_flat = Differential(
        GradedMap(
            mod,
            -1,
            {
                (0, 1): S1.parse("a"),
                (1, 2): S1.parse("b*W1 - a*W2"),
                (0, 2): S1.parse("a*W1*W2"),
            },
        )
    )
    u0 = GradedMap.identity(mod) + GradedMap(mod, 0, {(0, 2): S1.parse("X*W1")})
    return mod, m_flat.conjugate(u0), m_flat, u0

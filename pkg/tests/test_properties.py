"""Seeded property suites over both supported fields.

The heavy acceptance run lives in test_acceptance.py; this file keeps a
faster pass over every suite so ordinary development runs still exercise
all the identities.
"""

import pytest

from dgalift.field import QQ, PrimeField
from dgalift.randgen import FixturePool
from dgalift.selftest import SUITES, run_suite

FIELDS = [QQ, PrimeField(5)]
_POOLS = {f.key(): FixturePool(f) for f in FIELDS}


@pytest.mark.parametrize("field", FIELDS, ids=["Q", "F5"])
@pytest.mark.parametrize("name", [name for name, _ in SUITES])
def test_suite(field, name):
    result = run_suite(name, field, seed=20240412, iters=60, pool=_POOLS[field.key()])
    assert result["failures"] == 0, result


def test_selftest_transcript_shape():
    from dgalift.selftest import run_selftest

    res = run_selftest(seed=5, iters=3)
    assert res["all_passed"]
    assert len(res["suites"]) == 2 * len(SUITES)
    # determinism of the whole transcript
    assert res == run_selftest(seed=5, iters=3)

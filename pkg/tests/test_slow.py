"""Long-running exact constructions (tens of seconds), excluded from the
default run.

Run with:  pytest -m slow tests/test_slow.py -v -s
"""

import time
from fractions import Fraction

import pytest

from posmon.witness import prime_sum_refutation, verify_almost_not_nearly


@pytest.mark.slow
def test_prime_sum_refutation_for_one_half():
    """The candidate q = 1/2 excludes the prime 2, so the greedy reciprocal
    sum must pass 5/2 on the odd primes alone; the crossover sits in the
    millions.  The construction is deterministic and its replay is exact."""
    start = time.monotonic()
    cert = prime_sum_refutation(Fraction(1, 2))
    assert cert.excluded == (2,)
    assert cert.count == 361_138
    assert cert.last_prime == 5_195_977
    cert.verify()
    print(
        f"PASS slow prime-sum: q=1/2 needs {cert.count} odd primes "
        f"up to {cert.last_prime} ({time.monotonic() - start:.1f}s)"
    )


@pytest.mark.slow
def test_report_certifies_one_half_with_raised_cap():
    rep = verify_almost_not_nearly(1, candidates=[Fraction(1, 2)], prime_cap=10_000_000)
    assert rep.skipped == ()
    assert len(rep.certificates) == 1
    assert rep.certificates[0].excluded == (2,)

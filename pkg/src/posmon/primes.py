"""Small number-theory helpers: prime generation, factoring, and the
Calkin-Wilf enumeration of the nonnegative rationals.

Everything here is deterministic and pure; results are cached where the
call pattern warrants it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator

_SMALL_SIEVE_LIMIT = 1 << 16


@lru_cache(maxsize=None)
def primes_below(limit: int) -> tuple[int, ...]:
    """All primes p < limit, by a plain sieve of Eratosthenes."""
    if limit <= 2:
        return ()
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return tuple(i for i in range(limit) if flags[i])


def iter_primes() -> Iterator[int]:
    """Yield 2, 3, 5, ... indefinitely, growing the sieve as needed."""
    limit = _SMALL_SIEVE_LIMIT
    start = 0
    while True:
        ps = primes_below(limit)
        yield from ps[start:]
        start = len(ps)
        limit *= 4


def nth_prime(n: int) -> int:
    """The n-th prime, 1-indexed (nth_prime(1) == 2)."""
    if n < 1:
        raise ValueError("prime index must be >= 1")
    return first_primes(n)[-1]


@lru_cache(maxsize=None)
def first_primes(n: int) -> tuple[int, ...]:
    """The first n primes."""
    out = []
    for p in iter_primes():
        out.append(p)
        if len(out) == n:
            return tuple(out)
    raise AssertionError("unreachable")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < _SMALL_SIEVE_LIMIT:
        ps = primes_below(_SMALL_SIEVE_LIMIT)
        # binary search not worth it at this size
        return n in ps if n < 100 else _trial_division(n)
    return _trial_division(n)


def _trial_division(n: int) -> bool:
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def prime_support(n: int) -> tuple[int, ...]:
    """Sorted primes dividing n (empty for n == 1)."""
    return tuple(sorted(factorize(n)))


def calkin_wilf(count: int) -> tuple[Fraction, ...]:
    """The first `count` elements of Q>=0 in a fixed deterministic order:
    0 followed by the Calkin-Wilf sequence 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...

    Every nonnegative rational appears exactly once.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    out: list[Fraction] = []
    if count > 0:
        out.append(Fraction(0))
    q = Fraction(1)
    while len(out) < count:
        out.append(q)
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)
    return tuple(out)

"""Small number-theory helpers: a growable prime sieve, factorization, v_p, Omega."""

from __future__ import annotations

from functools import lru_cache

from .errors import NotPrimeError

_sieve_limit = 1
_is_prime = bytearray(b"\x00\x00")
_primes: list[int] = []


def _grow(limit: int) -> None:
    global _sieve_limit, _is_prime, _primes
    if limit <= _sieve_limit:
        return
    limit = max(limit, 2 * _sieve_limit, 1024)
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    _is_prime = flags
    _primes = [i for i in range(2, limit + 1) if flags[i]]
    _sieve_limit = limit


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    _grow(n)
    return bool(_is_prime[n])


def primes_up_to(n: int) -> list[int]:
    """All primes p <= n, ascending."""
    if n < 2:
        return []
    _grow(n)
    lo, hi = 0, len(_primes)
    while lo < hi:
        mid = (lo + hi) // 2
        if _primes[mid] <= n:
            lo = mid + 1
        else:
            hi = mid
    return _primes[:lo]


def nth_prime(i: int) -> int:
    """The i-th prime, 1-based (nth_prime(1) == 2)."""
    if i < 1:
        raise ValueError(f"prime index must be >= 1, got {i}")
    limit = 1024
    while True:
        _grow(limit)
        if len(_primes) >= i:
            return _primes[i - 1]
        limit *= 2


def prime_index(p: int) -> int:
    """Inverse of nth_prime."""
    if not is_prime(p):
        raise NotPrimeError(p)
    return len(primes_up_to(p))


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...) with p ascending.

    Trial division by sieved primes; inputs in this library are small.
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    m = n
    _grow(min(int(n**0.5) + 1, 1 << 20))
    for p in _primes:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def vp(p: int, n: int) -> int:
    """Exponent of the prime p in n."""
    if not is_prime(p):
        raise NotPrimeError(p)
    if n < 1:
        raise ValueError(f"vp needs n >= 1, got {n}")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@lru_cache(maxsize=65536)
def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(e for _, e in factorize(n))


def is_smooth(n: int, primes) -> bool:
    """True if every prime factor of n lies in ``primes``."""
    allowed = set(primes)
    return all(p in allowed for p, _ in factorize(n))


@lru_cache(maxsize=256)
def divisor_table(N: int) -> tuple[tuple[int, ...], ...]:
    """divisor_table(N)[n] lists the divisors of n ascending (index 0 unused)."""
    table: list[list[int]] = [[] for _ in range(N + 1)]
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            table[m].append(d)
    return tuple(tuple(t) for t in table)

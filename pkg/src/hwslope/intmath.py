"""Exact integer helpers: primality, valuations, determinants, characteristic polynomials."""

from fractions import Fraction
from math import isqrt

from .errors import NotPrime

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p!r} is not a prime")


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, ascending (sieve of Eratosthenes)."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for k in range(2, isqrt(hi) + 1):
        if sieve[k]:
            sieve[k * k :: k] = bytearray(len(range(k * k, hi + 1, k)))
    return [k for k in range(max(lo, 2), hi + 1) if sieve[k]]


def prime_factors(n: int) -> set[int]:
    """Distinct prime divisors of a non-zero integer, by trial division."""
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


def valuation(x, p: int) -> int | None:
    """p-adic valuation of an integer or Fraction; None stands for +infinity (x == 0)."""
    if x == 0:
        return None
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def det_bareiss(m: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def charpoly_berkowitz(m: list[list[int]]) -> list[int]:
    """Coefficients of det(tI - m), leading first, using only ring operations.

    Berkowitz's method: grow the leading principal submatrix one row and
    column at a time and multiply by a lower-triangular Toeplitz matrix.
    """
    n = len(m)
    poly = [1]
    for k in range(n):
        a = m[k][k]
        row = m[k][:k]
        col = [m[r][k] for r in range(k)]
        # first Toeplitz column: 1, -a, -R C, -R M C, ..., -R M^(k-1) C
        toeplitz = [1, -a]
        vec = col
        for _ in range(k):
            toeplitz.append(-sum(x * y for x, y in zip(row, vec)))
            vec = [sum(m[r][c] * vec[c] for c in range(k)) for r in range(k)]
        poly = [
            sum(toeplitz[r - c] * poly[c] for c in range(min(r, len(poly) - 1) + 1))
            for r in range(k + 2)
        ]
    return poly


def discriminant(coeffs_desc: list[int]) -> int:
    """Discriminant of an integer polynomial given leading coefficient first."""
    f = list(coeffs_desc)
    while f and f[0] == 0:
        f.pop(0)
    n = len(f) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    df = [c * (n - k) for k, c in enumerate(f[:-1])]
    res = resultant(f, df)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, r = divmod(sign * res, f[0])
    assert r == 0
    return q


def resultant(f: list[int], h: list[int]) -> int:
    """Resultant via the Sylvester determinant; both inputs leading first."""
    m, n = len(f) - 1, len(h) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(h) + [0] * (size - n - 1 - i))
    return det_bareiss(rows)

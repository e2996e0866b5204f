"""Dense polynomials over F_p as coefficient lists, lowest degree first.

Only what the field layer needs: products and remainders modulo a fixed
polynomial, powers of ``x`` and gcds for the irreducibility test.
"""

from __future__ import annotations

from typing import List, Sequence

Poly = List[int]


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence[int]) -> int:
    return len(trim(a)) - 1


def sub(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def mul(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = (out[i + j] + ai * bj) % p
    return trim(out)


def rem(a: Sequence[int], m: Sequence[int], p: int) -> Poly:
    m = trim(m)
    if not m:
        raise ZeroDivisionError("polynomial remainder by zero")
    a = trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = trim(a)
    return a


def mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> Poly:
    return rem(mul(a, b, p), m, p)


def powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    base = rem(a, m, p)
    while e > 0:
        if e & 1:
            result = mulmod(result, base, m, p)
        base = mulmod(base, base, m, p)
        e >>= 1
    return rem(result, m, p)


def gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b, p)
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = [(c * inv_lead) % p for c in a]
    return a


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors by trial division (fine below ~10^12)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return prime_factors(n) == [n]


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin's test: m | x^(p^d) - x and gcd(x^(p^(d/r)) - x, m) = 1 for primes r | d."""
    m = trim(m)
    d = len(m) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]

    def frob_power(k: int) -> Poly:
        # x^(p^k) mod m by k successive p-th powers
        t = x
        for _ in range(k):
            t = powmod(t, p, m, p)
        return t

    if trim(sub(frob_power(d), x, p)) != []:
        return False
    for r in prime_factors(d):
        g = gcd(sub(frob_power(d // r), x, p), m, p)
        if len(g) != 1:
            return False
    return True

"""Regenerate the builtin modulus table shipped with scatterlab.

For each (p, d) the table holds the monic primitive polynomial of degree d
over F_p with the smallest base-p encoding (coefficients lowest degree
first).  Primitive moduli make ``x`` a generator of the multiplicative group.

    python scripts/gen_moduli.py > src/scatterlab/gf/moduli.json
"""

import json
import sys

from scatterlab.gf import poly

MAX_DEGREE = {2: 32, 3: 20, 5: 13, 7: 11, 11: 9, 13: 8, 17: 7, 19: 7, 23: 6,
              29: 6, 31: 6, 37: 5, 41: 5, 43: 5, 47: 5, 53: 5, 59: 5, 61: 5,
              67: 4, 71: 4, 73: 4, 79: 4, 83: 4, 89: 4, 97: 4}
# every prime field up to 2^10, at the degrees that still get log tables
TABLE_SIZE = 1 << 20


def primes_below(n):
    sieve = [True] * n
    sieve[0:2] = [False, False]
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = [False] * len(sieve[i * i::i])
    return [i for i, is_p in enumerate(sieve) if is_p]


def max_degrees():
    out = dict(MAX_DEGREE)
    for p in primes_below(1 << 10):
        if p not in out:
            d = 1
            while p ** (d + 1) <= TABLE_SIZE:
                d += 1
            out[p] = d
    return out


def digits(v, p, length):
    out = []
    for _ in range(length):
        out.append(v % p)
        v //= p
    return out


def is_primitive(m, p):
    d = len(m) - 1
    order = p ** d - 1
    for r in poly.prime_factors(order):
        if poly.powmod([0, 1], order // r, m, p) == [1]:
            return False
    return poly.powmod([0, 1], order, m, p) == [1]


def smallest_primitive(p, d):
    for r in range(p ** d):
        m = digits(r, p, d) + [1]
        if m[0] == 0:
            continue
        if poly.is_irreducible(m, p) and is_primitive(m, p):
            return m
    raise RuntimeError(f"no primitive polynomial found for p={p}, d={d}")


def main():
    table = {}
    for p, dmax in max_degrees().items():
        table[str(p)] = {str(d): smallest_primitive(p, d) for d in range(1, dmax + 1)}
        print(f"p={p} done", file=sys.stderr)
    lines = []
    for p, row in table.items():
        body = ",\n".join(f'  "{d}": {json.dumps(m)}' for d, m in row.items())
        lines.append(f'"{p}": {{\n{body}\n }}')
    sys.stdout.write("{\n" + ",\n".join(lines) + "\n}\n")


if __name__ == "__main__":
    main()

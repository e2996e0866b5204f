"""Symbolic exponents that are reduced modulo M without being materialised.

The quantities appearing in the power-residue conditions, such as
``C_{h,l} = (q^{hl} - 1)/(q^h - 1)`` or ``q^a - 1``, quickly outgrow machine
words.  Everything here is evaluated modulo a caller-supplied modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple, Union


def geometric_sum_mod(r: int, length: int, modulus: int) -> int:
    """``1 + r + ... + r^(length-1)`` mod ``modulus`` in O(log length) steps."""
    if modulus == 1 or length <= 0:
        return 0
    if length == 1:
        return 1 % modulus
    if length % 2:
        return (1 + r * geometric_sum_mod(r, length - 1, modulus)) % modulus
    half = geometric_sum_mod(r, length // 2, modulus)
    return half * (1 + pow(r, length // 2, modulus)) % modulus


class ExpSpec:
    """Base class; subclasses implement ``mod`` and ``to_json``."""

    def mod(self, modulus: int) -> int:
        raise NotImplementedError

    def value(self) -> int:
        """The exact integer.  Only sensible for small parameters."""
        raise NotImplementedError

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError

    def __mul__(self, other: "ExpLike") -> "Prod":
        return Prod((self, as_exp(other)))

    def __add__(self, other: "ExpLike") -> "Sum":
        return Sum((self, as_exp(other)))


@dataclass(frozen=True)
class IntExp(ExpSpec):
    n: int

    def mod(self, modulus: int) -> int:
        return self.n % modulus

    def value(self) -> int:
        return self.n

    def to_json(self):
        return {"kind": "int", "value": self.n}


@dataclass(frozen=True)
class Cyc(ExpSpec):
    """``C_{h,l} = (q^{hl} - 1)/(q^h - 1)``, evaluated as ``sum_{i<l} q^{hi}``."""

    q: int
    h: int
    l: int

    def mod(self, modulus: int) -> int:
        return geometric_sum_mod(pow(self.q, self.h, modulus), self.l, modulus)

    def value(self) -> int:
        return (self.q ** (self.h * self.l) - 1) // (self.q ** self.h - 1)

    def to_json(self):
        return {"kind": "cyc", "q": self.q, "h": self.h, "l": self.l}


@dataclass(frozen=True)
class QPowMinus1(ExpSpec):
    """``q^a - 1``."""

    q: int
    a: int

    def mod(self, modulus: int) -> int:
        return (pow(self.q, self.a, modulus) - 1) % modulus

    def value(self) -> int:
        return self.q ** self.a - 1

    def to_json(self):
        return {"kind": "qpow_minus1", "q": self.q, "a": self.a}


@dataclass(frozen=True)
class Prod(ExpSpec):
    factors: Tuple[ExpSpec, ...]

    def mod(self, modulus: int) -> int:
        out = 1 % modulus
        for f in self.factors:
            out = out * f.mod(modulus) % modulus
        return out

    def value(self) -> int:
        return math.prod(f.value() for f in self.factors)

    def to_json(self):
        return {"kind": "prod", "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class Sum(ExpSpec):
    terms: Tuple[ExpSpec, ...]

    def mod(self, modulus: int) -> int:
        return sum(t.mod(modulus) for t in self.terms) % modulus

    def value(self) -> int:
        return sum(t.value() for t in self.terms)

    def to_json(self):
        return {"kind": "sum", "terms": [t.to_json() for t in self.terms]}


ExpLike = Union[int, ExpSpec]


def as_exp(e: ExpLike) -> ExpSpec:
    if isinstance(e, ExpSpec):
        return e
    if isinstance(e, int):
        return IntExp(e)
    raise TypeError(f"not an exponent: {e!r}")


def reduce_exponent(e: ExpLike, modulus: int) -> int:
    """``e mod modulus`` as an integer in ``[0, modulus)``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if isinstance(e, int):
        return e % modulus
    return e.mod(modulus)


def exp_from_json(obj: Dict[str, Any]) -> ExpSpec:
    kind = obj.get("kind")
    if kind == "int":
        return IntExp(int(obj["value"]))
    if kind == "cyc":
        return Cyc(int(obj["q"]), int(obj["h"]), int(obj["l"]))
    if kind == "qpow_minus1":
        return QPowMinus1(int(obj["q"]), int(obj["a"]))
    if kind == "prod":
        return Prod(tuple(exp_from_json(f) for f in obj["factors"]))
    if kind == "sum":
        return Sum(tuple(exp_from_json(t) for t in obj["terms"]))
    raise ValueError(f"unknown exponent kind {kind!r}")

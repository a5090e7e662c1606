"""Ground rings: the integers, prime fields and the rationals."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """A coefficient ring.

    ``kind`` is one of ``"Z"``, ``"Q"`` or ``"F"``; ``p`` is the characteristic
    for prime fields and 0 otherwise.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F" and not _is_prime(self.p):
            raise ValueError(f"F{self.p}: characteristic must be prime")
        if self.kind != "F" and self.p != 0:
            raise ValueError(f"{self.kind} has characteristic 0")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return INTEGERS
        if text in ("Q", "QQ"):
            return RATIONALS
        m = re.fullmatch(r"F_?(\d+)|GF\((\d+)\)", text)
        if m:
            return cls("F", int(m.group(1) or m.group(2)))
        raise ValueError(f"cannot parse ring {text!r} (expected Z, Q or Fp)")

    def __str__(self):
        return f"F{self.p}" if self.kind == "F" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p

    def reduce(self, x):
        if self.kind == "F":
            return int(x) % self.p
        if self.kind == "Q":
            return Fraction(x)
        return int(x)

    def inverse(self, x):
        x = self.reduce(x)
        if x == 0:
            raise ZeroDivisionError("zero is not invertible")
        if self.kind == "F":
            return pow(x, -1, self.p)
        if self.kind == "Q":
            return 1 / x
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def is_unit(self, x) -> bool:
        x = self.reduce(x)
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0


INTEGERS = Ring("Z")
RATIONALS = Ring("Q")
F2 = Ring("F", 2)


def prime_field(p: int) -> Ring:
    return Ring("F", p)

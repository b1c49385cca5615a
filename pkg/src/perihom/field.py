"""Exact scalar arithmetic over a prime field F_p or the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """A fixed coefficient field: F_p ("Fp") or the rationals ("Q").

    Scalars are plain ints in [0, p) for Fp and Fractions for Q.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"modulus must be prime, got {self.p}")
        elif self.kind == "Q":
            if self.p is not None:
                raise ValueError("rationals take no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # -- element constructors ------------------------------------------------

    @property
    def zero(self):
        return 0 if self.kind == "Fp" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "Fp" else Fraction(1)

    def of(self, x):
        """Coerce an int, Fraction or "num/den" string to a field element."""
        if self.kind == "Fp":
            if isinstance(x, str):
                x = int(x)
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer mod {self.p}")
                x = x.numerator
            return x % self.p
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "Fp" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "Fp" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "Fp" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "Fp" else -a

    def inv(self, a):
        if self.kind == "Fp":
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- serialization -------------------------------------------------------

    def scalar_to_json(self, a):
        if self.kind == "Fp":
            return int(a)
        if a.denominator == 1:
            return int(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def to_json(self) -> dict:
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Q"}

    @staticmethod
    def from_json(d: dict) -> "Field":
        if d.get("kind") == "Fp":
            return Field("Fp", int(d["p"]))
        if d.get("kind") == "Q":
            return Field("Q")
        raise ValueError(f"bad field spec {d!r}")


F2 = Field("Fp", 2)
QQ = Field("Q")

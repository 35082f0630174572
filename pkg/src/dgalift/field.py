"""Exact coefficient fields: the rationals and the prime fields.

Scalars are plain Python values so that the hot arithmetic paths stay
cheap: `Fraction` over the rationals, `int` residues in ``[0, p)`` over a
prime field.  A `Field` object supplies the operations and owns
formatting / parsing of scalar literals.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SchemaError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Interface shared by `RationalField` and `PrimeField`."""

    zero = None
    one = None

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def of_int(self, n: int):
        raise NotImplementedError

    def of_fraction(self, num: int, den: int):
        raise NotImplementedError

    def fmt(self, x) -> str:
        raise NotImplementedError

    def key(self):
        """Hashable structural identity, used for signature compatibility."""
        raise NotImplementedError

    def to_doc(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class RationalField(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / x

    def of_int(self, n: int):
        return Fraction(n)

    def of_fraction(self, num: int, den: int):
        return Fraction(num, den)

    def fmt(self, x) -> str:
        return str(x)

    def key(self):
        return ("Q",)

    def to_doc(self) -> dict:
        return {"type": "Q"}

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise SchemaError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, x, y):
        return (x + y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(x, self.p - 2, self.p)

    def of_int(self, n: int):
        return n % self.p

    def of_fraction(self, num: int, den: int):
        return self.mul(self.of_int(num), self.inv(self.of_int(den)))

    def fmt(self, x) -> str:
        return str(x % self.p)

    def key(self):
        return ("Fp", self.p)

    def to_doc(self) -> dict:
        return {"type": "Fp", "p": self.p}

    def __repr__(self):
        return f"F{self.p}"


QQ = RationalField()


def field_from_doc(doc: dict) -> Field:
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("field descriptor must be {'type': 'Q'} or {'type': 'Fp', 'p': <prime>}")
    if doc["type"] == "Q":
        return QQ
    if doc["type"] == "Fp":
        if "p" not in doc or not isinstance(doc["p"], int):
            raise SchemaError("Fp field descriptor needs an integer 'p'")
        return PrimeField(doc["p"])
    raise SchemaError(f"unknown field type {doc['type']!r}")


def field_from_spec(text: str) -> Field:
    """Parse a command-line field spec: ``q`` or ``fp:<p>``."""
    t = text.strip().lower()
    if t == "q":
        return QQ
    if t.startswith("fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise SchemaError(f"bad field spec {text!r}") from None
        return PrimeField(p)
    raise SchemaError(f"bad field spec {text!r} (expected 'q' or 'fp:<p>')")

"""Finite-or-aleph quantities and the totally ordered monoids built from them.

A ``Value`` is either an exact nonnegative rational or a symbolic aleph
indexed by an ordinal below omega squared.  Addition follows cardinal
arithmetic: a finite amount is absorbed by any aleph and two alephs add to
the larger one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from dimscale.errors import PreconditionError


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """The ordinal ``omega * omega_part + finite``."""

    omega_part: int = 0
    finite: int = 0

    def __post_init__(self):
        if self.omega_part < 0 or self.finite < 0:
            raise PreconditionError("ordinals are nonnegative")

    def __lt__(self, other: "Ordinal") -> bool:
        return (self.omega_part, self.finite) < (other.omega_part, other.finite)

    @property
    def is_limit(self) -> bool:
        return self.finite == 0 and self.omega_part > 0

    def succ(self) -> "Ordinal":
        return Ordinal(self.omega_part, self.finite + 1)

    def pred(self) -> "Ordinal":
        if self.finite == 0:
            raise PreconditionError(f"{self} has no predecessor")
        return Ordinal(self.omega_part, self.finite - 1)

    def __str__(self):
        if self.omega_part == 0:
            return str(self.finite)
        head = "w" if self.omega_part == 1 else f"w*{self.omega_part}"
        return head if self.finite == 0 else f"{head}+{self.finite}"

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        m = re.fullmatch(r"(?:w(?:\*(\d+))?(?:\+(\d+))?|(\d+))", text.strip())
        if not m:
            raise PreconditionError(f"bad ordinal {text!r}")
        if m.group(3) is not None:
            return cls(0, int(m.group(3)))
        return cls(int(m.group(1) or 1), int(m.group(2) or 0))


@total_ordering
@dataclass(frozen=True)
class Value:
    """``Value.fin(q)`` or ``Value.aleph(i)``; compare and add like cardinals."""

    amount: Fraction | None = None
    index: Ordinal | None = None

    def __post_init__(self):
        if (self.amount is None) == (self.index is None):
            raise PreconditionError("a value is either finite or an aleph")
        if self.amount is not None:
            if not isinstance(self.amount, Fraction):
                object.__setattr__(self, "amount", Fraction(self.amount))
            if self.amount < 0:
                raise PreconditionError("values are nonnegative")

    @classmethod
    def fin(cls, q) -> "Value":
        return cls(amount=Fraction(q))

    @classmethod
    def aleph(cls, i) -> "Value":
        return cls(index=i if isinstance(i, Ordinal) else Ordinal(0, int(i)))

    @property
    def is_finite(self) -> bool:
        return self.amount is not None

    def _key(self):
        return (0, self.amount, Ordinal()) if self.is_finite else (1, Fraction(0), self.index)

    def __lt__(self, other: "Value") -> bool:
        return self._key() < other._key()

    def __add__(self, other: "Value") -> "Value":
        if self.is_finite and other.is_finite:
            return Value.fin(self.amount + other.amount)
        return max(self, other)

    def meet(self, other: "Value") -> "Value":
        return min(self, other)

    def successor(self) -> "Value":
        """Immediate successor in the cardinal scale ``{0} U alephs``."""
        if self.is_finite:
            if self.amount != 0:
                raise PreconditionError("successor is defined on 0 and alephs only")
            return Value.aleph(0)
        return Value.aleph(self.index.succ())

    def __str__(self):
        if self.is_finite:
            return f"fin:{self.amount}"
        return f"aleph:{self.index}"

    def short(self) -> str:
        """Compact form used in element labels: ``3``, ``7/2``, ``a0``, ``aw+1``."""
        return str(self.amount) if self.is_finite else f"a{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Value":
        kind, _, rest = text.strip().partition(":")
        try:
            if kind == "fin":
                return cls.fin(Fraction(rest))
            if kind == "aleph":
                return cls.aleph(Ordinal.parse(rest))
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"bad value literal {text!r}") from exc
        raise PreconditionError(f"bad value literal {text!r}")


ZERO = Value.fin(0)


def least_difference(a: Value, b: Value) -> Value:
    """Least ``x`` with ``b <= a + x`` (requires ``a <= b``)."""
    if not a <= b:
        raise PreconditionError("least difference needs a <= b")
    if b.is_finite:
        return Value.fin(b.amount - a.amount)
    return ZERO if a == b else b


def largest_difference(a: Value, b: Value) -> Value:
    """Largest ``c`` with ``a + c <= b`` (requires ``a <= b``)."""
    if not a <= b:
        raise PreconditionError("largest difference needs a <= b")
    if b.is_finite:
        return Value.fin(b.amount - a.amount)
    return b


KINDS = ("Z", "Q", "Two")


@dataclass(frozen=True)
class ValueMonoid:
    """One of Z_gamma, Q_gamma, 2_gamma, possibly truncated.

    ``bound`` caps finite amounts (Z and Q only); ``gamma`` caps aleph
    indices and is ``None`` when no alephs are allowed.  A finite bound
    and alephs cannot coexist: the truncated addition would not be
    associative.
    """

    kind: str
    bound: Fraction | None = None
    gamma: Ordinal | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown kind {self.kind!r}")
        if self.bound is not None:
            object.__setattr__(self, "bound", Fraction(self.bound))
        if isinstance(self.gamma, int):
            object.__setattr__(self, "gamma", Ordinal(0, self.gamma))
        if self.kind == "Two":
            if self.bound is not None:
                raise PreconditionError("2_gamma has no finite part to bound")
            if self.gamma is None:
                raise PreconditionError("2_gamma needs an aleph bound")
        elif self.bound is not None and self.gamma is not None:
            raise PreconditionError("a bounded finite part cannot carry alephs")

    def contains(self, v: Value) -> bool:
        if v.is_finite:
            if self.kind == "Two":
                return v.amount == 0
            if self.kind == "Z" and v.amount.denominator != 1:
                return False
            return self.bound is None or v.amount <= self.bound
        return self.gamma is not None and v.index <= self.gamma

    def add(self, v: Value, w: Value) -> Value | None:
        s = v + w
        return s if self.contains(s) else None

    @property
    def enumerable(self) -> bool:
        if self.kind == "Z":
            return self.bound is not None
        if self.kind == "Two":
            return self.gamma.omega_part == 0
        return False

    def elements(self) -> list[Value]:
        if not self.enumerable:
            raise PreconditionError(f"{self} is not enumerable")
        if self.kind == "Z":
            return [Value.fin(i) for i in range(int(self.bound) + 1)]
        return [ZERO] + [Value.aleph(i) for i in range(self.gamma.finite + 1)]

    def __str__(self):
        parts = [self.kind]
        if self.bound is not None:
            parts.append(f"N={self.bound}")
        if self.gamma is not None:
            parts.append(f"gamma={self.gamma}")
        return "(" + " ".join(parts) + ")"

"""Scalar domains for kernel entries.

Elements are plain Python values so that kernels stay cheap to build and
compare:

* ``rational``: :class:`fractions.Fraction` (always in lowest terms with a
  positive denominator, so equality is structural),
* ``gfp``: ``int`` residues in ``[0, p)``,
* ``approx``: ``float`` with explicit zero and equality tolerances.

Equality in ``approx`` mode is tolerance based and therefore not transitive;
the exact modes are ordinary fields.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .errors import FieldMismatch, ParseError, ZeroInversion

FieldElement = Union[Fraction, int, float]

RATIONAL = "rational"
PRIME_FIELD = "gfp"
APPROX_REAL = "approx"

DEFAULT_ZERO_TOL = 1e-12
DEFAULT_EQ_TOL = 1e-9

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def is_prime(p: int) -> bool:
    """Deterministic trial division up to sqrt(p)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Declares which scalar domain kernel entries live in."""

    kind: str
    p: Optional[int] = None
    zero_tol: Optional[float] = None
    eq_tol: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind == PRIME_FIELD:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise ParseError(f"prime modulus must be an integer, got {self.p!r}")
            if not is_prime(self.p):
                raise ParseError(f"modulus {self.p} is not prime")
            if self.zero_tol is not None or self.eq_tol is not None:
                raise ParseError("tolerances only apply to the approx field")
        elif self.kind == APPROX_REAL:
            if self.p is not None:
                raise ParseError("the approx field takes no modulus")
            for name in ("zero_tol", "eq_tol"):
                tol = getattr(self, name)
                if not isinstance(tol, (int, float)) or isinstance(tol, bool):
                    raise ParseError(f"{name} must be a positive number")
                if not (tol > 0 and math.isfinite(tol)):
                    raise ParseError(f"{name} must be a positive number")
        elif self.kind == RATIONAL:
            if self.p is not None or self.zero_tol is not None or self.eq_tol is not None:
                raise ParseError("the rational field takes no parameters")
        else:
            raise ParseError(f"unknown field kind {self.kind!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(RATIONAL)

    @classmethod
    def gfp(cls, p: int) -> "FieldSpec":
        return cls(PRIME_FIELD, p=p)

    @classmethod
    def approx(
        cls, zero_tol: float = DEFAULT_ZERO_TOL, eq_tol: float = DEFAULT_EQ_TOL
    ) -> "FieldSpec":
        return cls(APPROX_REAL, zero_tol=float(zero_tol), eq_tol=float(eq_tol))

    @classmethod
    def from_json(cls, decl: Any) -> "FieldSpec":
        """Parse ``{"field": "rational"}``-style declarations (or the bare name)."""
        if isinstance(decl, str):
            decl = {"field": decl}
        if not isinstance(decl, dict) or "field" not in decl:
            raise ParseError(f"malformed field declaration: {decl!r}")
        kind = decl["field"]
        if kind == RATIONAL:
            return cls.rational()
        if kind == PRIME_FIELD:
            if "p" not in decl:
                raise ParseError("gfp field needs a modulus p")
            return cls.gfp(decl["p"])
        if kind == APPROX_REAL:
            return cls.approx(
                decl.get("zero_tol", DEFAULT_ZERO_TOL), decl.get("eq_tol", DEFAULT_EQ_TOL)
            )
        raise ParseError(f"unknown field kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == PRIME_FIELD:
            return {"field": PRIME_FIELD, "p": self.p}
        if self.kind == APPROX_REAL:
            return {"field": APPROX_REAL, "zero_tol": self.zero_tol, "eq_tol": self.eq_tol}
        return {"field": RATIONAL}

    # -- structure --------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.kind != APPROX_REAL

    def characteristic(self) -> int:
        return self.p if self.kind == PRIME_FIELD else 0

    @property
    def zero(self) -> FieldElement:
        if self.kind == RATIONAL:
            return Fraction(0)
        if self.kind == PRIME_FIELD:
            return 0
        return 0.0

    @property
    def one(self) -> FieldElement:
        if self.kind == RATIONAL:
            return Fraction(1)
        if self.kind == PRIME_FIELD:
            return 1
        return 1.0

    def element(self, value: Any) -> FieldElement:
        """Map an int, Fraction or float into this field."""
        if isinstance(value, bool):
            raise FieldMismatch(f"booleans are not field elements: {value!r}")
        if self.kind == RATIONAL:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldMismatch(f"not an exact rational: {value!r}")
        if self.kind == PRIME_FIELD:
            if isinstance(value, int):
                return value % self.p
            if isinstance(value, Fraction):
                return (value.numerator * pow(value.denominator % self.p, -1, self.p)) % self.p
            raise FieldMismatch(f"not a residue mod {self.p}: {value!r}")
        if isinstance(value, (int, float, Fraction)):
            x = float(value)
            if not math.isfinite(x):
                raise FieldMismatch(f"non-finite real: {value!r}")
            return x
        raise FieldMismatch(f"not a real number: {value!r}")

    def contains(self, a: Any) -> bool:
        if self.kind == RATIONAL:
            return type(a) is Fraction
        if self.kind == PRIME_FIELD:
            return type(a) is int and 0 <= a < self.p
        return type(a) is float and math.isfinite(a)

    # -- arithmetic -------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == PRIME_FIELD:
            return (a + b) % self.p
        return a + b

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == PRIME_FIELD:
            return (a - b) % self.p
        return a - b

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == PRIME_FIELD:
            return (a * b) % self.p
        return a * b

    def neg(self, a: FieldElement) -> FieldElement:
        if self.kind == PRIME_FIELD:
            return (-a) % self.p
        return -a

    def is_zero(self, a: FieldElement) -> bool:
        if self.kind == APPROX_REAL:
            return abs(a) <= self.zero_tol
        return not a

    def inv(self, a: FieldElement) -> FieldElement:
        if self.is_zero(a):
            raise ZeroInversion(f"cannot invert zero element {a!r}")
        if self.kind == PRIME_FIELD:
            return _egcd_inverse(a, self.p)
        if self.kind == RATIONAL:
            return 1 / a
        return 1.0 / a

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def equals(self, a: FieldElement, b: FieldElement) -> bool:
        if self.kind == APPROX_REAL:
            return abs(a - b) <= self.eq_tol
        return a == b

    def squares_equal(self, a: FieldElement, b: FieldElement) -> bool:
        """Whether a**2 == b**2.

        In a field this is the same as b == a or b == -a, which is what the
        exact modes test (no products are formed).
        """
        if self.kind == APPROX_REAL:
            return abs(a * a - b * b) <= self.eq_tol
        return self.sign_between(b, a) is not None

    def sign_between(self, q: FieldElement, k: FieldElement) -> Optional[int]:
        """Return s in {+1, -1} with q == s*k, or None if no such sign exists.

        ``k`` must be nonzero. In characteristic 2 the answer is always +1.
        Approx mode snaps q/k to the nearer of +-1 and rejects it unless the
        ratio lies within ``eq_tol`` of that sign.
        """
        if self.kind == APPROX_REAL:
            if abs(k) <= self.zero_tol:
                return None
            ratio = q / k
            s = 1 if ratio >= 0 else -1
            return s if abs(ratio - s) <= self.eq_tol else None
        if self.kind == RATIONAL:
            # Canonical form: q == +-k iff denominators match and numerators agree up to sign.
            if q._denominator != k._denominator:
                return None
            qn, kn = q._numerator, k._numerator
            if qn == kn:
                return 1
            return -1 if qn == -kn else None
        if q == k:
            return 1
        return -1 if q == (-k) % self.p else None

    def nonzero_mask(self, row) -> bytearray:
        """One byte per entry: 1 where the entry is nonzero under this field."""
        if self.kind == APPROX_REAL:
            tol = self.zero_tol
            return bytearray(abs(a) > tol for a in row)
        return bytearray(map(bool, row))

    def signed(self, s: int, a: FieldElement) -> FieldElement:
        """The product of a sign s in {+1, -1} with a."""
        return a if s == 1 else self.neg(a)

    def is_own_inverse(self, a: FieldElement) -> bool:
        return self.equals(self.mul(a, a), self.one)

    # -- I/O --------------------------------------------------------------

    def parse(self, entry: Any) -> FieldElement:
        """Parse one JSON entry of a kernel file."""
        if isinstance(entry, bool):
            raise FieldMismatch(f"booleans are not field elements: {entry!r}")
        if self.kind == RATIONAL:
            if isinstance(entry, int):
                return Fraction(entry)
            if isinstance(entry, str):
                m = _RATIONAL_RE.match(entry)
                if m:
                    num, den = m.group(1), m.group(2)
                    den_i = int(den) if den is not None else 1
                    if den_i == 0:
                        raise FieldMismatch(f"zero denominator in {entry!r}")
                    return Fraction(int(num), den_i)
            raise FieldMismatch(f"not an exact rational literal: {entry!r}")
        if self.kind == PRIME_FIELD:
            if isinstance(entry, int):
                return entry % self.p
            if isinstance(entry, str) and re.fullmatch(r"\s*[+-]?\d+\s*", entry):
                return int(entry) % self.p
            raise FieldMismatch(f"not an integer residue: {entry!r}")
        if isinstance(entry, (int, float)):
            return self.element(entry)
        if isinstance(entry, str):
            try:
                return self.element(float(entry))
            except ValueError:
                pass
        raise FieldMismatch(f"not a real literal: {entry!r}")

    def serialize(self, a: FieldElement) -> Union[str, int, float]:
        if self.kind == RATIONAL:
            return str(a)
        if self.kind == PRIME_FIELD:
            return int(a)
        return float(a)

    def random_nonzero(self, rng: random.Random) -> FieldElement:
        """Uniform draw from a fixed nonzero range of small values."""
        if self.kind == RATIONAL:
            num = rng.choice(_NONZERO_NUMERATORS)
            den = rng.randint(1, 9)
            return _small_fraction(num, den)
        if self.kind == PRIME_FIELD:
            return rng.randint(1, self.p - 1)
        magnitude = rng.uniform(0.1, 1.0)
        return magnitude if rng.random() < 0.5 else -magnitude


_NONZERO_NUMERATORS = tuple(k for k in range(-9, 10) if k != 0)
_FRACTION_POOL: dict = {}


def _small_fraction(num: int, den: int) -> Fraction:
    # Shared instances keep large generated kernels light in memory.
    key = (num, den)
    f = _FRACTION_POOL.get(key)
    if f is None:
        f = _FRACTION_POOL[key] = Fraction(num, den)
    return f


def _egcd_inverse(a: int, p: int) -> int:
    old_r, r = a % p, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ZeroInversion(f"{a} is not invertible mod {p}")
    return old_s % p


def field_invert(a: FieldElement, spec: FieldSpec) -> FieldElement:
    """Multiplicative inverse; raises :class:`ZeroInversion` on zero."""
    return spec.inv(a)


def field_equals(a: FieldElement, b: FieldElement, spec: FieldSpec) -> bool:
    return spec.equals(a, b)


def field_is_own_inverse(a: FieldElement, spec: FieldSpec) -> bool:
    """True iff a*a == 1, i.e. a is +1 or -1."""
    return spec.is_own_inverse(a)

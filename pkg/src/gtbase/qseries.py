"""Exact arithmetic for graded dimensions and multiplicity series.

Graded dimensions of bounded-below spaces live in N((q^-1)) (direction DOWN),
those of bounded-above spaces in N((q)) (direction UP), and finite-dimensional
ones in N[q, q^-1] (direction POLY).  A series is stored as a finite coefficient
table together with an explicit knowledge window: for DOWN series the
coefficients of q^e are known exactly for e >= -trunc_order, for UP series for
e <= trunc_order, and POLY series are exact everywhere.  Arithmetic narrows
windows pessimistically and queries outside the window raise, never return 0.

Scalars for the linear algebra layer are exact rationals (fractions.Fraction)
or elements of a prime field F_p; both are wrapped behind small field objects.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

DOWN = "down"
UP = "up"
POLY = "poly"

_DIRECTIONS = (DOWN, UP, POLY)


class QSeriesError(Exception):
    pass


class IncompatibleDirections(QSeriesError):
    pass


class EmptyWindow(QSeriesError):
    pass


class WindowExceedsKnowledge(QSeriesError):
    pass


# ---------------------------------------------------------------------------
# ground fields
# ---------------------------------------------------------------------------

class FieldError(Exception):
    pass


class RationalField:
    """The field Q; scalars are fractions.Fraction."""

    name = "rational"
    characteristic = 0

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, text: str) -> Fraction:
        return Fraction(text)

    def render(self, a) -> str:
        return str(a)

    def elements(self):
        raise FieldError("rational field is infinite")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p; scalars are ints in [0, p)."""

    characteristic: int

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"denominator divisible by {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def parse(self, text: str) -> int:
        return self(Fraction(text))

    def render(self, a) -> str:
        return str(a % self.p)

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_name(name: str):
    """Parse a field spec: 'rational' or 'fp:<p>'."""
    if name == "rational":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise FieldError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# truncated directional Laurent series with natural coefficients
# ---------------------------------------------------------------------------

class QSeries:
    """A truncated Laurent series with nonnegative integer coefficients.

    ``direction`` is DOWN, UP or POLY; ``trunc_order`` bounds the knowledge
    window (None means exact, which is forced for POLY).
    """

    __slots__ = ("direction", "coeffs", "trunc_order")

    def __init__(self, direction: str, coeffs: Dict[int, int],
                 trunc_order: Optional[int] = None):
        if direction not in _DIRECTIONS:
            raise QSeriesError(f"bad direction {direction!r}")
        if direction == POLY and trunc_order is not None:
            raise QSeriesError("POLY series are exact; no trunc_order")
        if direction != POLY and trunc_order is None:
            raise QSeriesError(f"{direction} series need a trunc_order")
        clean = {}
        for e, c in coeffs.items():
            if c < 0:
                raise QSeriesError(f"negative coefficient {c} at q^{e}")
            if c:
                clean[int(e)] = int(c)
        self.direction = direction
        self.coeffs = clean
        self.trunc_order = trunc_order
        for e in clean:
            if not self._known(e):
                raise QSeriesError(
                    f"coefficient at q^{e} lies outside the window")

    # -- window queries ----------------------------------------------------

    def _known(self, e: int) -> bool:
        if self.direction == POLY:
            return True
        if self.direction == DOWN:
            return e >= -self.trunc_order
        return e <= self.trunc_order

    def coefficient(self, e: int) -> int:
        """Exact coefficient of q^e; raises outside the knowledge window."""
        if not self._known(e):
            raise WindowExceedsKnowledge(f"q^{e} unknown at order "
                                         f"{self.trunc_order}")
        return self.coeffs.get(e, 0)

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_exponent(self) -> Optional[int]:
        """Largest exponent that can carry a nonzero coefficient.

        Finite for DOWN and for nonzero POLY; None means unbounded (UP) or
        identically zero (POLY).
        """
        if self.direction == UP:
            return None
        if self.direction == POLY:
            return max(self.coeffs, default=None)
        # everything above -trunc_order is known exactly
        return max(self.coeffs, default=-self.trunc_order - 1)

    def min_exponent(self) -> Optional[int]:
        if self.direction == DOWN:
            return None
        if self.direction == POLY:
            return min(self.coeffs, default=None)
        return min(self.coeffs, default=self.trunc_order + 1)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(direction: str = POLY, trunc_order: Optional[int] = None) -> "QSeries":
        return QSeries(direction, {}, trunc_order)

    @staticmethod
    def monomial(e: int, c: int = 1, direction: str = POLY,
                 trunc_order: Optional[int] = None) -> "QSeries":
        return QSeries(direction, {e: c}, trunc_order)

    # -- arithmetic ----------------------------------------------------------

    def _join_direction(self, other: "QSeries") -> str:
        if self.direction == other.direction:
            return self.direction
        if self.direction == POLY:
            return other.direction
        if other.direction == POLY:
            return self.direction
        raise IncompatibleDirections(
            f"{self.direction} vs {other.direction}")

    def __add__(self, other: "QSeries") -> "QSeries":
        direction = self._join_direction(other)
        order = _min_order(self.trunc_order, other.trunc_order)
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs.get(e, 0) + c
        if direction != POLY:
            coeffs = {e: c for e, c in coeffs.items()
                      if _known_in(direction, order, e)}
        return QSeries(direction, coeffs, order if direction != POLY else None)

    def __mul__(self, other: "QSeries") -> "QSeries":
        direction = self._join_direction(other)
        if direction == POLY:
            coeffs: Dict[int, int] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    coeffs[e1 + e2] = coeffs.get(e1 + e2, 0) + c1 * c2
            return QSeries(POLY, coeffs)
        if direction == DOWN:
            m_self, m_other = self.max_exponent(), other.max_exponent()
            if m_self is None or m_other is None:
                # an identically-zero exact factor
                order = _min_order(self.trunc_order, other.trunc_order)
                return QSeries(DOWN, {}, order if order is not None else 0)
            # known region of the product: e >= -t with
            # t = min(t_f - M_g, t_g - M_f) (None = exact factor)
            bounds = []
            if self.trunc_order is not None:
                bounds.append(self.trunc_order - m_other)
            if other.trunc_order is not None:
                bounds.append(other.trunc_order - m_self)
            order = min(bounds)
            if -order > m_self + m_other:
                raise EmptyWindow("no exponent of the product is certified")
            coeffs = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = e1 + e2
                    if e >= -order:
                        coeffs[e] = coeffs.get(e, 0) + c1 * c2
            return QSeries(DOWN, coeffs, order)
        # UP: mirror of DOWN
        return (self.bar() * other.bar()).bar()

    def bar(self) -> "QSeries":
        """The conjugate series: q -> q^-1 (DOWN and UP swap)."""
        coeffs = {-e: c for e, c in self.coeffs.items()}
        if self.direction == POLY:
            return QSeries(POLY, coeffs)
        direction = UP if self.direction == DOWN else DOWN
        return QSeries(direction, coeffs, self.trunc_order)

    def truncate(self, direction: str, order: int) -> "QSeries":
        """Reinterpret on a (possibly smaller) window in the given direction."""
        if direction == POLY:
            raise QSeriesError("cannot certify POLY from a truncated series")
        if self.direction not in (POLY, direction):
            raise IncompatibleDirections(f"{self.direction} -> {direction}")
        if self.direction != POLY and self.trunc_order < order:
            raise WindowExceedsKnowledge(
                f"order {order} exceeds known order {self.trunc_order}")
        keep = {e: c for e, c in self.coeffs.items()
                if _known_in(direction, order, e)}
        return QSeries(direction, keep, order)

    def eq_window(self, other: "QSeries", window: int) -> bool:
        """Compare coefficients for all exponents e with |e| <= window."""
        for e in range(-window, window + 1):
            if self.coefficient(e) != other.coefficient(e):
                return False
        return True

    # -- rendering -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, QSeries)
                and self.direction == other.direction
                and self.trunc_order == other.trunc_order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.direction, self.trunc_order,
                     tuple(sorted(self.coeffs.items()))))

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            terms = []
            for e in sorted(self.coeffs, reverse=True):
                c = self.coeffs[e]
                if e == 0:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(f"q^{e}")
                else:
                    terms.append(f"{c}*q^{e}")
            body = " + ".join(terms)
        if self.direction == DOWN:
            return f"{body} (+O(q^{-self.trunc_order - 1}))"
        if self.direction == UP:
            return f"{body} (+O(q^{self.trunc_order + 1}))"
        return body

    __repr__ = __str__

    def to_json(self):
        """JSON form: sorted [exponent, coefficient] pairs plus the window."""
        data = {
            "direction": self.direction,
            "terms": [[e, self.coeffs[e]] for e in sorted(self.coeffs)],
        }
        if self.direction != POLY:
            data["trunc_order"] = self.trunc_order
        return data


def _min_order(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _known_in(direction: str, order: Optional[int], e: int) -> bool:
    if order is None:
        return True
    return e >= -order if direction == DOWN else e <= order


def series_sum(terms: Iterable[QSeries], direction: str,
               trunc_order: Optional[int]) -> QSeries:
    total = QSeries.zero(direction, trunc_order)
    for t in terms:
        total = total + t
    return total

"""Exact rationals plus a positive-infinity marker."""

from fractions import Fraction

from .errors import ParseError


class _Infinity:
    """Positive infinity, comparable with ints and Fractions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("valtree-infinity")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other is self or other > 0:
            return self
        raise ValueError("infinity times a non-positive number")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other is not self and other > 0:
            return self
        raise ValueError("undefined division of infinity")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(value):
    return value is INF


def to_fraction(value):
    """Coerce ints, Fractions and strings like ``"3/2"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text):
    """Parse ``p``, ``-p`` or ``p/q``. Decimal points are rejected."""
    s = text.strip()
    body = s[1:] if s[:1] in "+-" else s
    parts = body.split("/")
    if len(parts) > 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"not an exact rational: {text!r}")
    if len(parts) == 2 and int(parts[1]) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(s)


def fmt(value):
    """Render a rational as ``"p/q"`` (or ``"p"``); infinity as ``"inf"``."""
    if value is INF:
        return "inf"
    return str(Fraction(value))

"""Polynomial germs at the origin of the plane.

A germ is stored as a sparse map ``(i, j) -> coefficient`` for the monomial
``x^i y^j``.  Only polynomial representatives are supported; factors that do
not vanish at the origin are units of the local ring and are kept as written.
"""

from fractions import Fraction

from .errors import DomainError, ParseError


class Germ:
    """Immutable polynomial in ``x, y`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            i, j = key
            if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                raise DomainError(f"bad exponent pair {key!r}")
            c = Fraction(c)
            if c:
                clean[(i, j)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self):
        return not self._terms

    def is_unit(self):
        return (0, 0) in self._terms

    def degree(self):
        return max((i + j for i, j in self._terms), default=-1)

    def mult(self):
        """Order at the origin (lowest total degree)."""
        if not self._terms:
            raise DomainError("the zero germ has no multiplicity")
        return min(i + j for i, j in self._terms)

    def initial_form(self):
        m = self.mult()
        return Germ({k: c for k, c in self._terms.items() if sum(k) == m})

    # arithmetic

    def __add__(self, other):
        other = _as_germ(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return Germ(out)

    __radd__ = __add__

    def __neg__(self):
        return Germ({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_germ(other))

    def __rsub__(self, other):
        return _as_germ(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Germ({k: c * other for k, c in self._terms.items()})
        other = _as_germ(other)
        out = {}
        for (i, j), c in self._terms.items():
            for (k, l), d in other._terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + c * d
        return Germ(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("germ powers need a natural exponent")
        out = Germ.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Germ.const(other)
        if not isinstance(other, Germ):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        return format_germ(self)

    def __repr__(self):
        return f"Germ({format_germ(self)!r})"

    def compose(self, fx, fy):
        """``self(fx, fy)`` for germs ``fx`` and ``fy``."""
        fx, fy = _as_germ(fx), _as_germ(fy)
        out = Germ()
        if not self._terms:
            return out
        xs = [Germ.const(1)]
        ys = [Germ.const(1)]
        for _ in range(max(i for i, _ in self._terms)):
            xs.append(xs[-1] * fx)
        for _ in range(max(j for _, j in self._terms)):
            ys.append(ys[-1] * fy)
        for (i, j), c in self._terms.items():
            out = out + xs[i] * ys[j] * c
        return out

    def to_flint(self, ctx):
        """Convert to a ``flint.fmpq_mpoly`` in the first two generators of ``ctx``."""
        import flint

        pad = (0,) * (ctx.nvars() - 2)
        return ctx.from_dict(
            {(i, j) + pad: flint.fmpq(c.numerator, c.denominator) for (i, j), c in self._terms.items()}
        )

    def eval_poly(self, xt, yt):
        """Compose with a pair of univariate ``fmpq_poly`` (or compatible) objects."""
        import flint

        if not self._terms:
            return flint.fmpq_poly(0)
        xs = _power_table(xt, max(i for i, _ in self._terms))
        ys = _power_table(yt, max(j for _, j in self._terms))
        out = flint.fmpq_poly(0)
        for (i, j), c in self._terms.items():
            out += xs[i] * ys[j] * flint.fmpq(c.numerator, c.denominator)
        return out


def _power_table(p, n):
    import flint

    table = [flint.fmpq_poly(1)]
    for _ in range(n):
        table.append(table[-1] * p)
    return table


def _as_germ(value):
    if isinstance(value, Germ):
        return value
    if isinstance(value, (int, Fraction)):
        return Germ.const(value)
    if isinstance(value, str):
        return parse_germ(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a germ")


def mult_germ(psi):
    return _as_germ(psi).mult()


# printing


def _term_order(key):
    i, j = key
    return (i + j, -i)


def _monomial_text(exps, names):
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(terms, names):
    """Canonical text for a sparse polynomial: graded, reduced, explicit ``*``."""
    if not terms:
        return "0"
    if len(names) == 1:
        keys = sorted(terms)
    else:
        keys = sorted(terms, key=_term_order)
    out = []
    for n, k in enumerate(keys):
        c = Fraction(terms[k])
        mono = _monomial_text(k, names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if n == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def format_germ(psi):
    return format_terms(psi._terms, ("x", "y"))


# parsing


class _Parser:
    """Recursive-descent reader for sums of rational multiples of monomials."""

    def __init__(self, text, names):
        self.text = text
        self.names = names
        self.pos = 0

    def fail(self, msg):
        raise ParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a natural number")
        return int(self.text[start : self.pos])

    def coeff(self):
        num = self.nat()
        if self.peek() == "/":
            self.pos += 1
            den = self.nat()
            if den == 0:
                self.fail("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def monom(self):
        exps = [0] * len(self.names)
        seen = False
        while True:
            ch = self.peek()
            if ch in self.names and ch:
                self.pos += 1
                e = 1
                if self.peek() == "^":
                    self.pos += 1
                    if self.peek() == "-":
                        self.fail("negative exponent")
                    e = self.nat()
                exps[self.names.index(ch)] += e
                seen = True
                save = self.pos
                if self.peek() == "*":
                    self.pos += 1
                    if self.peek() not in self.names or not self.peek():
                        self.pos = save
                        break
                continue
            if ch.isalpha():
                self.fail(f"unknown variable {ch!r}")
            break
        if not seen:
            self.fail("expected a variable")
        return tuple(exps)

    def term(self):
        ch = self.peek()
        zero = (0,) * len(self.names)
        if ch.isdigit():
            c = self.coeff()
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                return c, self.monom()
            if ch and ch in self.names:
                return c, self.monom()
            return c, zero
        if ch and ch in self.names:
            return Fraction(1), self.monom()
        if ch == "":
            self.fail("unexpected end of input")
        self.fail(f"unexpected character {ch!r}")

    def parse(self):
        terms = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            c, e = self.term()
            terms[e] = terms.get(e, 0) + sign * c
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.fail(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return {k: v for k, v in terms.items() if v}


def parse_terms(text, names):
    if not isinstance(text, str):
        raise ParseError("expected a string")
    if not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text, names).parse()


def parse_germ(text):
    """Parse a germ such as ``"y^2 - x^3"`` or ``"1/2*x*y + x^4"``."""
    return Germ(parse_terms(text, ("x", "y")))

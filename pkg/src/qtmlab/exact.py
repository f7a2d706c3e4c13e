"""Exact arithmetic for machine amplitudes.

Amplitudes live in the degree-four number field generated over the
rationals by ``zeta = exp(i*pi/4)``.  The basis is ``(1, zeta, zeta**2,
zeta**3)`` with the reduction ``zeta**4 == -1``; the field contains
``i == zeta**2`` and ``sqrt(2) == zeta - zeta**3``, hence every
Hadamard-style amplitude.  Squared moduli land in the real subfield
generated by ``sqrt(2)``, carried by :class:`RealQ2`, and that subfield is
itself a field, so ratios of squared norms (probabilities) stay exact.

Floats appear only in the ``to_complex`` / ``__float__`` conversions, which
exist for display and are documented lossy.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MachineSyntaxError

Rat = Fraction

_F_ZERO = Fraction(0)
_SQRT_HALF = 0.7071067811865476


def _as_rat(value) -> Fraction | None:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return None


class RealQ2:
    """The real number p + q*sqrt(2) with rational p, q."""

    __slots__ = ("_p", "_q")

    def __init__(self, p=0, q=0) -> None:
        self._p: Fraction = Fraction(p)
        self._q: Fraction = Fraction(q)

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @classmethod
    def _make(cls, p: Fraction, q: Fraction) -> "RealQ2":
        self = object.__new__(cls)
        self._p = p
        self._q = q
        return self

    @classmethod
    def from_rat(cls, r) -> "RealQ2":
        return cls(r, 0)

    def is_zero(self) -> bool:
        return not self._p and not self._q

    def is_rational(self) -> bool:
        return not self._q

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "RealQ2 | None":
        if isinstance(other, RealQ2):
            return other
        r = _as_rat(other)
        if r is not None:
            return RealQ2._make(r, Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RealQ2._make(self._p + o._p, self._q + o._q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RealQ2._make(self._p - o._p, self._q - o._q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "RealQ2":
        return RealQ2._make(-self._p, -self._q)

    def __pos__(self) -> "RealQ2":
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (p1 + q1 r)(p2 + q2 r) with r**2 == 2
        return RealQ2._make(self._p * o._p + 2 * self._q * o._q,
                            self._p * o._q + self._q * o._p)

    __rmul__ = __mul__

    def reciprocal(self) -> "RealQ2":
        # 1/(p + q r) == (p - q r)/(p**2 - 2 q**2); the denominator vanishes
        # only for p == q == 0 because sqrt(2) is irrational.
        d = self._p * self._p - 2 * self._q * self._q
        if not d:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        return RealQ2._make(self._p / d, -self._q / d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def sign(self) -> int:
        """Exact sign, decided with integer arithmetic only."""
        p, q = self._p, self._q
        if not p and not q:
            return 0
        if not q:
            return 1 if p > 0 else -1
        if not p:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # Mixed signs: compare p**2 against 2*q**2; equality is impossible
        # for nonzero p, q since sqrt(2) is irrational.
        if p > 0:  # q < 0
            return 1 if p * p > 2 * q * q else -1
        return -1 if p * p > 2 * q * q else 1

    def __abs__(self) -> "RealQ2":
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._p == o._p and self._q == o._q

    def __hash__(self):
        if not self._q:
            return hash(self._p)
        return hash((self._p, self._q))

    def as_rational(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} has an irrational part")
        return self._p

    def to_cyc(self) -> "CycQ8":
        # sqrt(2) == zeta - zeta**3
        return CycQ8._make((self._p, self._q, Fraction(0), -self._q))

    def __float__(self) -> float:
        return float(self._p) + float(self._q) * 2.0 * _SQRT_HALF

    def __str__(self) -> str:
        return format_amp(self)

    def __repr__(self) -> str:
        return f"RealQ2({self._p!r}, {self._q!r})"


class CycQ8:
    """Element of Q(zeta) with zeta = exp(i*pi/4), stored on the power basis."""

    __slots__ = ("_c", "_ints")

    def __init__(self, c0=0, c1=0, c2=0, c3=0) -> None:
        self._c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))
        self._ints = None

    @property
    def coeffs(self) -> tuple:
        return self._c

    @classmethod
    def _make(cls, c: tuple) -> "CycQ8":
        self = object.__new__(cls)
        self._c = c
        self._ints = None
        return self

    def _int_form(self) -> tuple:
        # coefficients over one shared denominator, cached: amplitudes
        # and rule weights get multiplied far more often than built
        form = self._ints
        if form is None:
            a = self._c
            d = a[0].denominator * a[1].denominator * a[2].denominator * a[3].denominator
            form = (tuple(ai.numerator * (d // ai.denominator) for ai in a), d)
            self._ints = form
        return form

    @classmethod
    def from_rat(cls, r) -> "CycQ8":
        return cls._make((Fraction(r), Fraction(0), Fraction(0), Fraction(0)))

    def is_zero(self) -> bool:
        c = self._c
        return not (c[0] or c[1] or c[2] or c[3])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_real(self) -> bool:
        c = self._c
        return not c[2] and c[1] == -c[3]

    def is_rational(self) -> bool:
        c = self._c
        return not (c[1] or c[2] or c[3])

    def real(self) -> RealQ2:
        """This value as an element of Q(sqrt 2); raises if not real."""
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        return RealQ2._make(self._c[0], self._c[1])

    def _coerce(self, other) -> "CycQ8 | None":
        if isinstance(other, CycQ8):
            return other
        r = _as_rat(other)
        if r is not None:
            return CycQ8.from_rat(r)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        return CycQ8._make((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        return CycQ8._make((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "CycQ8":
        a = self._c
        return CycQ8._make((-a[0], -a[1], -a[2], -a[3]))

    def __pos__(self) -> "CycQ8":
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # one shared denominator per operand keeps the convolution in
        # plain integers; each coefficient normalizes once on the way out
        na, da = self._int_form()
        nb, db = o._int_form()
        out = [0, 0, 0, 0]
        for i in range(4):
            ni = na[i]
            if not ni:
                continue
            for j in range(4):
                nj = nb[j]
                if not nj:
                    continue
                k = i + j
                if k < 4:
                    out[k] += ni * nj
                else:
                    out[k - 4] -= ni * nj
        d = da * db
        return CycQ8._make(tuple(_F_ZERO if not n else Fraction(n, d) for n in out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CycQ8":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        acc = CYC_ONE
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def conj(self) -> "CycQ8":
        # zeta**k -> zeta**(-k): fixes 1, sends zeta to -zeta**3 and back,
        # and negates zeta**2.
        a = self._c
        return CycQ8._make((a[0], -a[3], -a[2], -a[1]))

    def norm_sq(self) -> RealQ2:
        """Squared modulus a*conj(a), always real and nonnegative."""
        prod = self * self.conj()
        c = prod._c
        if c[2] or c[1] != -c[3]:  # pragma: no cover - algebraically impossible
            raise ArithmeticError("norm_sq left the real subfield")
        return RealQ2._make(c[0], c[1])

    def inverse(self) -> "CycQ8":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero amplitude")
        return self.conj() * self.norm_sq().reciprocal().to_cyc()

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self.is_rational():
            return hash(self._c[0])
        return hash(self._c)

    def to_complex(self) -> complex:
        """Nearest float approximation; lossy, for display only.

        Raises OverflowError when a coefficient exceeds the float range.
        """
        c = self._c
        z1 = complex(_SQRT_HALF, _SQRT_HALF)
        acc = complex(float(c[0]), 0.0)
        acc += float(c[1]) * z1
        acc += complex(0.0, float(c[2]))
        acc += float(c[3]) * complex(-_SQRT_HALF, _SQRT_HALF)
        return acc

    __complex__ = to_complex

    def __str__(self) -> str:
        return format_amp(self)

    def __repr__(self) -> str:
        c = self._c
        return f"CycQ8({c[0]!r}, {c[1]!r}, {c[2]!r}, {c[3]!r})"


CYC_ZERO = CycQ8(0)
CYC_ONE = CycQ8(1)
CYC_I = CycQ8(0, 0, 1, 0)
CYC_SQRT2 = CycQ8(0, 1, 0, -1)
INV_SQRT2 = CycQ8(0, Fraction(1, 2), 0, Fraction(-1, 2))

R2_ZERO = RealQ2(0)
R2_ONE = RealQ2(1)


# --- literal grammar -------------------------------------------------------
#
#   amp    := term (("+"|"-") term)*
#   term   := factor (("*"|"/") factor)*
#   factor := integer | "i" | "r2" | "(" amp ")" | "-" factor
#
# "r2" denotes sqrt(2) and "i" the imaginary unit; rationals fall out of the
# term-level division, so "1/2" needs no dedicated literal form.

class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str) -> MachineSyntaxError:
        return MachineSyntaxError(message, column=self.pos + 1)

    def peek(self) -> str:
        self._skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def take_int(self) -> Fraction:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return Fraction(int(self.text[start:self.pos]))

    def take_name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]


def _parse_factor(sc: _Scanner) -> CycQ8:
    ch = sc.peek()
    if ch == "-":
        sc.take()
        return -_parse_factor(sc)
    if ch == "(":
        sc.take()
        value = _parse_sum(sc)
        if sc.peek() != ")":
            raise sc.error("expected ')'")
        sc.take()
        return value
    if ch.isdigit():
        return CycQ8.from_rat(sc.take_int())
    if ch.isalpha():
        name = sc.take_name()
        if name == "i":
            return CYC_I
        if name == "r2":
            return CYC_SQRT2
        raise sc.error(f"unknown name {name!r} in amplitude")
    if ch == "":
        raise sc.error("unexpected end of amplitude")
    raise sc.error(f"unexpected character {ch!r} in amplitude")


def _parse_term(sc: _Scanner) -> CycQ8:
    value = _parse_factor(sc)
    while True:
        ch = sc.peek()
        if ch == "*":
            sc.take()
            value = value * _parse_factor(sc)
        elif ch == "/":
            sc.take()
            divisor = _parse_factor(sc)
            if divisor.is_zero():
                raise sc.error("division by zero in amplitude")
            value = value / divisor
        else:
            return value


def _parse_sum(sc: _Scanner) -> CycQ8:
    value = _parse_term(sc)
    while True:
        ch = sc.peek()
        if ch == "+":
            sc.take()
            value = value + _parse_term(sc)
        elif ch == "-":
            sc.take()
            value = value - _parse_term(sc)
        else:
            return value


def parse_amp(text: str) -> CycQ8:
    """Evaluate an amplitude literal exactly.

    Raises MachineSyntaxError (column-annotated) on any deviation from the
    grammar, including trailing garbage.
    """
    sc = _Scanner(text)
    value = _parse_sum(sc)
    if sc.peek() != "":
        raise sc.error("trailing input after amplitude")
    return value


def _fmt_coef(coef: Fraction, suffix: str) -> str:
    if not suffix:
        return str(coef)
    if coef == 1:
        return suffix
    if coef == -1:
        return "-" + suffix
    return f"{coef}*{suffix}"


def format_amp(value) -> str:
    """Render a CycQ8, RealQ2, or rational in the literal grammar.

    The rendering is canonical (term order: rational, i, r2, i*r2; zero
    terms dropped) and parse_amp(format_amp(x)) == x exactly.
    """
    if isinstance(value, RealQ2):
        value = value.to_cyc()
    elif not isinstance(value, CycQ8):
        r = _as_rat(value)
        if r is None:
            raise TypeError(f"cannot format {type(value).__name__} as amplitude")
        value = CycQ8.from_rat(r)
    c0, c1, c2, c3 = value.coeffs
    # zeta == (1 + i)/sqrt(2) and zeta**3 == (-1 + i)/sqrt(2) decompose the
    # basis into rational, i, r2 and i*r2 parts.
    parts = [
        (c0, ""),
        (c2, "i"),
        ((c1 - c3) / 2, "r2"),
        ((c1 + c3) / 2, "i*r2"),
    ]
    chunks: list[str] = []
    for coef, suffix in parts:
        if not coef:
            continue
        rendered = _fmt_coef(coef, suffix)
        if not chunks:
            chunks.append(rendered)
        elif rendered.startswith("-"):
            chunks.append("-" + rendered[1:])
        else:
            chunks.append("+" + rendered)
    if not chunks:
        return "0"
    out = chunks[0]
    for chunk in chunks[1:]:
        out += chunk
    return out

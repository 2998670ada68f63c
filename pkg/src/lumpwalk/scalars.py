"""Exact scalars: arbitrary-precision rationals and cyclotomic extensions Q(zeta_n).

Rationals are plain ``fractions.Fraction``.  A cyclotomic scalar is a vector of
rationals over the power basis 1, z, ..., z^(phi(n)-1) of Q(zeta_n), reduced
modulo the n-th cyclotomic polynomial, so equality of scalars is equality of
coefficient vectors.  No floating point is used anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DomainError, InputFormatError

MAX_CYCLOTOMIC_ORDER = 64

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_div_exact(num, den):
    """Exact division of integer polynomials (remainder must vanish)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        q, r = divmod(num[len(den) - 1 + k], lead)
        assert r == 0, "non-exact cyclotomic division"
        out[k] = q
        for j, b in enumerate(den):
            num[j + k] -= q * b
    assert not _poly_trim(num), "non-zero remainder in cyclotomic division"
    return _poly_trim(out)


def cyclotomic_polynomial(n: int) -> list[int]:
    """Coefficients of Phi_n, ascending, via Phi_n = (x^n - 1) / prod Phi_d."""
    if n < 1:
        raise DomainError(f"cyclotomic order must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, cyclotomic_polynomial(d))
    return num


def _euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


class Cyclo:
    """Element of Q(zeta_n) in the reduced power basis.  Immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "CyclotomicField", coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- helpers ----------------------------------------------------------

    def _coerced(self, other):
        if isinstance(other, Cyclo):
            if other.field.order != self.field.order:
                raise DomainError(
                    f"mixed cyclotomic orders {self.field.order} and {other.field.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(Fraction(other))
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Cyclo(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Cyclo(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Cyclo(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.field._mul(self, self.field._invert(o))

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.field._mul(o, self.field._invert(self))

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.field.order == other.field.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Cyclo({self.field.order}, {format_scalar(self)!r})"


class RationalField:
    """The field Q, with scalars represented as ``Fraction``."""

    kind = "rational"
    order = None
    zero = ZERO
    one = ONE

    def coerce(self, x):
        if isinstance(x, Cyclo):
            return x.rational_value()
        return Fraction(x)

    def conjugate(self, x):
        return x

    def is_zero(self, x) -> bool:
        return x == 0

    def is_rational_value(self, x) -> bool:
        return True

    def rational_value(self, x) -> Fraction:
        return x

    def __repr__(self):
        return "RationalField()"


class CyclotomicField:
    """Q(zeta_n) with the power basis reduced mod the n-th cyclotomic polynomial."""

    kind = "cyclotomic"

    def __init__(self, order: int):
        if not 1 <= order <= MAX_CYCLOTOMIC_ORDER:
            raise DomainError(
                f"cyclotomic order {order} outside supported range 1..{MAX_CYCLOTOMIC_ORDER}"
            )
        self.order = order
        self.phi = _euler_phi(order)
        minimal = cyclotomic_polynomial(order)
        assert len(minimal) == self.phi + 1
        self._minimal = [Fraction(c) for c in minimal]
        # power_table[k] = coefficients of z^k in the basis, 0 <= k <= max(n-1, 2*phi-2)
        top = max(order - 1, 2 * self.phi - 2)
        table = []
        row = [ZERO] * self.phi
        row[0] = ONE
        table.append(tuple(row))
        for _ in range(top):
            row = [ZERO] + list(row)
            if len(row) > self.phi:
                lead = row.pop()
                if lead:
                    row = [c - lead * m for c, m in zip(row, self._minimal[:-1])]
            else:
                row = row + [ZERO] * (self.phi - len(row))
            table.append(tuple(row))
        self._power_table = table
        self.zero = Cyclo(self, (ZERO,) * self.phi)
        self.one = Cyclo(self, table[0])

    def zeta(self, k: int = 1) -> Cyclo:
        """z^k as a field element."""
        return Cyclo(self, self._power_table[k % self.order])

    def from_rational(self, q) -> Cyclo:
        coeffs = [ZERO] * self.phi
        coeffs[0] = Fraction(q)
        return Cyclo(self, coeffs)

    def coerce(self, x):
        if isinstance(x, Cyclo):
            if x.field.order != self.order:
                raise DomainError(
                    f"mixed cyclotomic orders {self.order} and {x.field.order}"
                )
            return x
        return self.from_rational(x)

    def conjugate(self, x) -> Cyclo:
        x = self.coerce(x)
        out = [ZERO] * self.phi
        for k, c in enumerate(x.coeffs):
            if c:
                row = self._power_table[(self.order - k) % self.order]
                for i, r in enumerate(row):
                    out[i] += c * r
        return Cyclo(self, out)

    def is_zero(self, x) -> bool:
        return self.coerce(x).is_zero()

    def is_rational_value(self, x) -> bool:
        return self.coerce(x).is_rational()

    def rational_value(self, x) -> Fraction:
        return self.coerce(x).rational_value()

    # -- internal arithmetic -------------------------------------------------

    def _mul(self, a: Cyclo, b: Cyclo) -> Cyclo:
        out = [ZERO] * self.phi
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            for j, cb in enumerate(b.coeffs):
                if not cb:
                    continue
                c = ca * cb
                if i + j < self.phi:
                    out[i + j] += c
                else:
                    row = self._power_table[i + j]
                    for k, r in enumerate(row):
                        if r:
                            out[k] += c * r
        return Cyclo(self, out)

    def _invert(self, a: Cyclo) -> Cyclo:
        if a.is_zero():
            raise ZeroDivisionError("division by zero cyclotomic scalar")
        # extended Euclid in Q[x] against the minimal polynomial
        r0, r1 = list(self._minimal), _poly_trim([Fraction(c) for c in a.coeffs])
        s0, s1 = [], [ONE]
        while len(r1) > 1:
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
        assert r1, "minimal polynomial not coprime to element"
        inv_lead = ONE / r1[0]
        coeffs = [c * inv_lead for c in s1]
        # reduce mod minimal (degree can be phi-1 at most already, but be safe)
        out = [ZERO] * self.phi
        for k, c in enumerate(coeffs):
            if c:
                row = self._power_table[k]
                for i, r in enumerate(row):
                    out[i] += c * r
        return Cyclo(self, out)

    def __repr__(self):
        return f"CyclotomicField({self.order})"


def _frac_poly_divmod(num, den):
    num = list(num)
    if len(num) < len(den):
        return [], _poly_trim(num)
    out = [ZERO] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        q = num[len(den) - 1 + k] / lead
        out[k] = q
        if q:
            for j, b in enumerate(den):
                num[j + k] -= q * b
    return _poly_trim(out), _poly_trim(num)


def _frac_poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _frac_poly_sub(p, q):
    out = [ZERO] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    return _poly_trim(out)


RATIONALS = RationalField()

_field_cache: dict[int, CyclotomicField] = {}


def cyclotomic_field(order: int) -> CyclotomicField:
    field = _field_cache.get(order)
    if field is None:
        field = _field_cache[order] = CyclotomicField(order)
    return field


def common_field(f1, f2):
    """Join of two scalar fields; rational promotes into any cyclotomic field."""
    if f1 is f2:
        return f1
    if f1.kind == "rational":
        return f2
    if f2.kind == "rational":
        return f1
    if f1.order == f2.order:
        return f1
    raise DomainError(
        f"cannot mix cyclotomic orders {f1.order} and {f2.order}"
    )


def embed_rational(q, order: int) -> Cyclo:
    """Constant embedding of a rational into Q(zeta_order)."""
    return cyclotomic_field(order).from_rational(Fraction(q))


# ---------------------------------------------------------------------------
# scalar literal grammar: rationals `p/q`; cyclotomic sums `a + b*z^k - ...`

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_TERM_RE = re.compile(r"^(?:(?P<coef>\d+(?:/\d+)?)\*?)?z(?:\^(?P<exp>\d+))?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise InputFormatError(f"bad rational literal {text!r}")
    return Fraction(text)


def parse_scalar(text: str, field):
    """Parse a scalar literal in the given field."""
    text = text.strip().replace(" ", "")
    if "z" not in text:
        value = parse_rational(text)
        return value if field.kind == "rational" else field.from_rational(value)
    if field.kind == "rational":
        raise InputFormatError(f"cyclotomic literal {text!r} in a rational context")
    chunks = re.split(r"(?=[+-])", text)
    total = field.zero
    for chunk in chunks:
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        if "z" in chunk:
            m = _TERM_RE.match(chunk)
            if not m:
                raise InputFormatError(f"bad cyclotomic term {chunk!r}")
            coef = Fraction(m.group("coef")) if m.group("coef") else ONE
            exp = int(m.group("exp")) if m.group("exp") else 1
            total = total + sign * coef * field.zeta(exp)
        else:
            total = total + field.from_rational(sign * parse_rational(chunk))
    return total


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    parts = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        mag = abs(c)
        body = str(mag) if k == 0 else (f"z^{k}" if mag == 1 else f"{mag}*z^{k}")
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"

"""Group-algebra arithmetic with exact scalars.

An :class:`AlgebraElement` is a formal linear combination of the elements of a
fixed :class:`~lumpwalk.groups.FiniteGroup`, stored as a dense coefficient
array indexed by element id.  Multiplication is convolution,
``(ab)(g) = sum_x a(x) b(x^-1 g)``; the star anti-involution sends
``sum a(g) g`` to ``sum conj(a(g)) g^-1``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, InputFormatError
from .groups import CosetDecomposition, FiniteGroup, Subgroup, parse_cycles
from .scalars import (
    RATIONALS,
    Cyclo,
    common_field,
    cyclotomic_field,
    format_scalar,
    parse_scalar,
)


class AlgebraElement:
    __slots__ = ("group", "field", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs, scalar_field=RATIONALS):
        self.group = group
        self.field = scalar_field
        coeffs = list(coeffs)
        if len(coeffs) != group.order:
            raise DomainError("coefficient array length must equal the group order")
        self.coeffs = coeffs

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(group: FiniteGroup, scalar_field=RATIONALS) -> "AlgebraElement":
        return AlgebraElement(group, [scalar_field.zero] * group.order, scalar_field)

    @staticmethod
    def basis(group: FiniteGroup, element_id: int, scalar_field=RATIONALS) -> "AlgebraElement":
        out = AlgebraElement.zero(group, scalar_field)
        out.coeffs[element_id] = scalar_field.one
        return out

    @staticmethod
    def one(group: FiniteGroup, scalar_field=RATIONALS) -> "AlgebraElement":
        return AlgebraElement.basis(group, 0, scalar_field)

    @staticmethod
    def from_pairs(group: FiniteGroup, pairs, scalar_field=RATIONALS) -> "AlgebraElement":
        """Accumulating constructor from (element_id, scalar) pairs."""
        out = AlgebraElement.zero(group, scalar_field)
        for gid, c in pairs:
            out.coeffs[gid] = out.coeffs[gid] + c
        return out

    @staticmethod
    def from_cycle_pairs(group: FiniteGroup, pairs, scalar_field=RATIONALS) -> "AlgebraElement":
        """As :meth:`from_pairs` but keyed by 1-based cycle notation strings."""
        return AlgebraElement.from_pairs(
            group,
            ((group.element_of(text), c) for text, c in pairs),
            scalar_field,
        )

    # -- promotion ------------------------------------------------------------

    def to_field(self, scalar_field) -> "AlgebraElement":
        if scalar_field is self.field:
            return self
        return AlgebraElement(
            self.group, [scalar_field.coerce(c) for c in self.coeffs], scalar_field
        )

    def _aligned(self, other: "AlgebraElement"):
        if self.group is not other.group:
            raise DomainError("elements of different group algebras")
        joint = common_field(self.field, other.field)
        return self.to_field(joint), other.to_field(joint), joint

    # -- linear structure -------------------------------------------------------

    def __add__(self, other):
        a, b, f = self._aligned(other)
        return AlgebraElement(a.group, [x + y for x, y in zip(a.coeffs, b.coeffs)], f)

    def __sub__(self, other):
        a, b, f = self._aligned(other)
        return AlgebraElement(a.group, [x - y for x, y in zip(a.coeffs, b.coeffs)], f)

    def __neg__(self):
        return AlgebraElement(self.group, [-x for x in self.coeffs], self.field)

    def scale(self, scalar) -> "AlgebraElement":
        if isinstance(scalar, Cyclo):
            joint = common_field(self.field, scalar.field)
            a = self.to_field(joint)
            return AlgebraElement(a.group, [scalar * x for x in a.coeffs], joint)
        c = self.field.coerce(scalar)
        return AlgebraElement(self.group, [c * x for x in self.coeffs], self.field)

    # -- ring structure ----------------------------------------------------------

    def support(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield i, c

    def support_ids(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        a, b, f = self._aligned(other)
        G = a.group
        out = [f.zero] * G.order
        mul = G.mul
        for i, ca in a.support():
            for j, cb in b.support():
                k = mul(i, j)
                out[k] = out[k] + ca * cb
        return AlgebraElement(G, out, f)

    def star(self) -> "AlgebraElement":
        G = self.group
        conj = self.field.conjugate
        out = [self.field.zero] * G.order
        for i, c in self.support():
            out[G.inv(i)] = conj(c)
        return AlgebraElement(G, out, self.field)

    def translate_left(self, gid: int) -> "AlgebraElement":
        """Left multiplication by a group element (a coordinate permutation)."""
        G = self.group
        out = [self.field.zero] * G.order
        for i, c in self.support():
            out[G.mul(gid, i)] = c
        return AlgebraElement(G, out, self.field)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def total(self):
        """Coefficient sum, i.e. the weight of the whole group."""
        out = self.field.zero
        for _, c in self.support():
            out = out + c
        return out

    def sum_over(self, ids):
        out = self.field.zero
        for i in ids:
            out = out + self.coeffs[i]
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.group is not other.group:
            return False
        a, b, _ = self._aligned(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        raise TypeError("AlgebraElement is not hashable")

    def __repr__(self):
        parts = [
            f"{format_scalar(c)}*{self.group.elements[i].cycle_string()}"
            for i, c in self.support()
        ]
        return "AlgebraElement(" + (" + ".join(parts) if parts else "0") + ")"

    # -- projections --------------------------------------------------------------

    def project_coset(self, decomposition: CosetDecomposition, coset_id: int) -> "AlgebraElement":
        if not 0 <= coset_id < decomposition.n_cosets:
            raise DomainError(f"no coset with id {coset_id}")
        out = [self.field.zero] * self.group.order
        for i in decomposition.cosets[coset_id]:
            out[i] = self.coeffs[i]
        return AlgebraElement(self.group, out, self.field)

    # -- weight / distribution checks ------------------------------------------------

    def is_weight(self) -> bool:
        """Non-negative rational coefficients, at least one positive."""
        if self.field.kind != "rational":
            if not all(self.field.is_rational_value(c) for c in self.coeffs):
                return False
            values = [self.field.rational_value(c) for c in self.coeffs]
        else:
            values = self.coeffs
        return all(v >= 0 for v in values) and any(v > 0 for v in values)

    def require_weight(self) -> "AlgebraElement":
        if not self.is_weight():
            raise DomainError("expected a weight: non-negative with positive total")
        return self.to_field(RATIONALS) if self.field.kind != "rational" else self

    def require_distribution(self) -> "AlgebraElement":
        w = self.require_weight()
        if w.total() != 1:
            raise DomainError(f"distribution must sum to 1, got {w.total()}")
        return w

    def normalized(self) -> "AlgebraElement":
        t = self.total()
        if self.field.is_zero(t):
            raise DomainError("cannot normalize an element with zero total")
        return AlgebraElement(self.group, [c / t for c in self.coeffs], self.field)

    def is_irreducible_weight(self) -> bool:
        w = self.require_weight()
        return self.group.is_generating(w.support_ids())


# ---------------------------------------------------------------------------
# standard elements and bilinear forms


def eta(group: FiniteGroup, members) -> AlgebraElement:
    """Uniform averaging element on a subset or subgroup; idempotent on subgroups."""
    if isinstance(members, Subgroup):
        members = members.members
    members = list(members)
    if not members:
        raise DomainError("eta of an empty set")
    c = Fraction(1, len(members))
    out = AlgebraElement.zero(group)
    for m in members:
        out.coeffs[m] = c
    return out


def inner_product(a: AlgebraElement, b: AlgebraElement):
    """G-invariant inner product (1/|G|) sum conj(a(g)) b(g); conjugate-linear in ``a``."""
    x, y, f = a._aligned(b)
    conj = f.conjugate
    total = f.zero
    for i, c in x.support():
        d = y.coeffs[i]
        if d:
            total = total + conj(c) * d
    return total / Fraction(a.group.order)


def is_idempotent(e: AlgebraElement) -> bool:
    return e * e == e


def supported_on(e: AlgebraElement, H: Subgroup) -> bool:
    return all(i in H for i in e.support_ids())


def in_E_bullet(e: AlgebraElement, H: Subgroup) -> bool:
    """Membership in the idempotents e of C[H] with eta_H e = eta_H."""
    if not supported_on(e, H):
        return False
    if not is_idempotent(e):
        return False
    eta_H = eta(e.group, H)
    return eta_H * e == eta_H.to_field(e.field)


def coset_sums(w: AlgebraElement, decomposition: CosetDecomposition) -> list:
    """The vector of coset weights w(coset), one entry per coset id."""
    sums = [w.field.zero] * decomposition.n_cosets
    for i, c in w.support():
        cid = decomposition.coset_of[i]
        sums[cid] = sums[cid] + c
    return sums


# ---------------------------------------------------------------------------
# characters and primitive idempotents of an abelian subgroup


def abelian_characters(H: Subgroup):
    """All irreducible characters of an abelian subgroup.

    Returns ``(m, chars)`` where ``m`` is the exponent of H and each character
    is a dict mapping member element id to the exponent ``k`` of its value
    ``zeta_m^k``.  Characters are sorted by their exponent tuple over the
    members in id order, so the trivial character comes first.
    """
    if not H.is_abelian():
        raise DomainError("subgroup is not abelian")
    G = H.parent
    m = H.exponent()
    chars = [{0: 0}]  # characters of the trivial subgroup, built up generator by generator
    for g in H.generators + H.members:  # members as fallback generating sequence
        known = chars[0]
        if g in known:
            continue
        # least r >= 1 with g^r inside the subgroup built so far
        r, power = 1, g
        while power not in known:
            power = G.mul(power, g)
            r += 1
        assert m % r == 0  # r divides the exponent of H
        extended = []
        for chi in chars:
            target = chi[power]  # exponent of the value at g^r
            base = next(t for t in range(m) if (t * r) % m == target)
            for s in range(r):
                t = (base + s * (m // r)) % m
                new = {}
                power_id, power_exp = 0, 0
                for _ in range(r):
                    for k, v in chi.items():
                        new[G.mul(k, power_id)] = (v + power_exp) % m
                    power_id = G.mul(power_id, g)
                    power_exp = (power_exp + t) % m
                extended.append(new)
        chars = extended
    assert len(chars) == H.order and set(chars[0]) == set(H.members)
    keyed = sorted(chars, key=lambda chi: tuple(chi[h] for h in H.members))
    return m, keyed


def conjugate_character_index(H: Subgroup, m: int, chars, index: int) -> int:
    """Index of the complex conjugate of the given character."""
    target = tuple((-chars[index][h]) % m for h in H.members)
    for j, chi in enumerate(chars):
        if tuple(chi[h] for h in H.members) == target:
            return j
    raise AssertionError("conjugate character missing")


def abelian_character_idempotent(H: Subgroup, character: dict, order: int | None = None) -> AlgebraElement:
    """Primitive idempotent (1/|H|) sum_h chi(h^-1) h of an abelian subgroup.

    ``character`` maps member ids to exponents of ``zeta_order``; it is checked
    to be multiplicative.
    """
    if not H.is_abelian():
        raise DomainError("subgroup is not abelian")
    G = H.parent
    m = order if order is not None else H.exponent()
    if set(character) != set(H.members):
        raise DomainError("character must be defined on exactly the subgroup members")
    for a in H.members:
        for b in H.members:
            if (character[a] + character[b]) % m != character[G.mul(a, b)] % m:
                raise DomainError("map is not a multiplicative character")
    field = cyclotomic_field(m)
    inv_order = Fraction(1, H.order)
    out = AlgebraElement.zero(G, field)
    for h in H.members:
        out.coeffs[h] = field.zeta(-character[h] % m) * inv_order
    return out


# ---------------------------------------------------------------------------
# element file format:
#   optional header `scalar cyclotomic <n>` (default rational)
#   lines `<scalar-literal> <cycles|id>`; duplicate group elements accumulate


def parse_element_file(text: str, group: FiniteGroup) -> AlgebraElement:
    field = RATIONALS
    pairs = []
    header_done = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("scalar"):
            if header_done or pairs:
                raise InputFormatError(f"line {lineno}: scalar header must come first")
            parts = line.split()
            if len(parts) != 3 or parts[1] != "cyclotomic":
                raise InputFormatError(f"line {lineno}: bad scalar header {raw!r}")
            field = cyclotomic_field(int(parts[2]))
            header_done = True
            continue
        # the group element is the final token; scalar literals may contain spaces
        try:
            literal, cycles_text = line.rsplit(None, 1)
        except ValueError:
            raise InputFormatError(f"line {lineno}: expected `<scalar> <cycles>` in {raw!r}")
        scalar = parse_scalar(literal, field)
        gid = group.id_of(parse_cycles(group.degree, cycles_text))
        pairs.append((gid, scalar))
    if not pairs:
        raise InputFormatError("element file has no coefficient lines")
    return AlgebraElement.from_pairs(group, pairs, field)


def format_element(a: AlgebraElement) -> str:
    lines = []
    if a.field.kind == "cyclotomic":
        lines.append(f"scalar cyclotomic {a.field.order}")
    for i, c in a.support():
        lines.append(f"{format_scalar(c)} {a.group.elements[i].cycle_string()}")
    return "\n".join(lines) + "\n"

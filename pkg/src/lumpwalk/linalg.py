"""Exact linear algebra over subspaces of a group algebra.

Subspaces are held in reduced row echelon form with leading coefficient 1, so
two subspaces are equal exactly when their basis matrices are equal.  On top
of the generic vector-space kernel this module provides the group-algebra
operations: ideal closures, coset projections of subspaces, induced-ideal
recognition, the `(1 - eta_H)` cut of an induced ideal, and orthogonal
complements under the conjugate-linear inner product.
"""

from __future__ import annotations

from .algebra import AlgebraElement, eta
from .errors import DomainError
from .groups import CosetDecomposition, FiniteGroup, Subgroup


class Subspace:
    """Row space of a matrix over an exact scalar field, kept in RREF."""

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        self.rows: list[list] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def copy(self) -> "Subspace":
        out = Subspace(self.field, self.ambient)
        out.rows = [list(r) for r in self.rows]
        out.pivots = list(self.pivots)
        return out

    def reduce(self, vector) -> list:
        """Residue of a vector after eliminating all pivots (input not mutated)."""
        if len(vector) != self.ambient:
            raise DomainError("vector length does not match the ambient dimension")
        v = list(vector)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                for k in range(p, self.ambient):
                    if row[k]:
                        v[k] = v[k] - c * row[k]
        return v

    def insert(self, vector) -> bool:
        """Add a vector to the span; returns True if the dimension grew."""
        v = self.reduce(vector)
        pivot = next((k for k, c in enumerate(v) if c), None)
        if pivot is None:
            return False
        lead = v[pivot]
        if lead != self.field.one:
            v = [c / lead for c in v]
        # eliminate the new pivot column from existing rows
        for row in self.rows:
            c = row[pivot]
            if c:
                for k in range(pivot, self.ambient):
                    if v[k]:
                        row[k] = row[k] - c * v[k]
        at = next((i for i, p in enumerate(self.pivots) if p > pivot), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, pivot)
        return True

    def contains(self, vector) -> bool:
        return not any(self.reduce(vector))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        raise TypeError("Subspace is not hashable")

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def basis(self) -> list[list]:
        return [list(r) for r in self.rows]


def span(field, ambient: int, vectors) -> Subspace:
    return Subspace(field, ambient, vectors)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    if U.ambient != V.ambient:
        raise DomainError("ambient dimension mismatch")
    out = U.copy()
    for r in V.rows:
        out.insert(r)
    return out


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """Zassenhaus intersection: echelonize [u|u] and [v|0] rows."""
    if U.ambient != V.ambient:
        raise DomainError("ambient dimension mismatch")
    n = U.ambient
    zero = U.field.zero
    wide = Subspace(U.field, 2 * n)
    for u in U.rows:
        wide.insert(list(u) + list(u))
    for v in V.rows:
        wide.insert(list(v) + [zero] * n)
    out = Subspace(U.field, n)
    for row, p in zip(wide.rows, wide.pivots):
        if p >= n:
            out.insert(row[n:])
    return out


def kernel_coefficients(field, images: list[list]) -> Subspace:
    """Coefficient vectors c with sum_i c_i * images[i] == 0 (a subspace of R^len)."""
    k = len(images)
    out = Subspace(field, k)
    if k == 0:
        return out
    m = len(images[0])
    pivot_rows: list[tuple[list, list]] = []  # (image residue, coefficient vector)
    for i, img in enumerate(images):
        v = list(img)
        coef = [field.zero] * k
        coef[i] = field.one
        for pimg, pcoef in pivot_rows:
            p = next(j for j, c in enumerate(pimg) if c)
            c = v[p]
            if c:
                for j in range(m):
                    if pimg[j]:
                        v[j] = v[j] - c * pimg[j]
                for j in range(k):
                    if pcoef[j]:
                        coef[j] = coef[j] - c * pcoef[j]
        pivot = next((j for j, c in enumerate(v) if c), None)
        if pivot is None:
            out.insert(coef)
        else:
            lead = v[pivot]
            if lead != field.one:
                v = [c / lead for c in v]
                coef = [c / lead for c in coef]
            pivot_rows.append((v, coef))
    return out


def nullspace(field, rows: list[list], ambient: int) -> Subspace:
    """Solutions v of the homogeneous system row . v == 0 for each row."""
    constraints = Subspace(field, ambient, rows)
    out = Subspace(field, ambient)
    pivset = set(constraints.pivots)
    one = field.one
    zero = field.zero
    for free in range(ambient):
        if free in pivset:
            continue
        v = [zero] * ambient
        v[free] = one
        for row, p in zip(constraints.rows, constraints.pivots):
            if row[free]:
                v[p] = -row[free]
        out.insert(v)
    return out


# ---------------------------------------------------------------------------
# group-algebra level operations


def element_subspace(field, group: FiniteGroup, elements) -> Subspace:
    return Subspace(field, group.order, [e.to_field(field).coeffs for e in elements])


def as_elements(V: Subspace, group: FiniteGroup) -> list[AlgebraElement]:
    return [AlgebraElement(group, row, V.field) for row in V.rows]


def right_multiply_space(V: Subspace, w: AlgebraElement) -> Subspace:
    """Span of v*w over a basis of V."""
    G = w.group
    if V.ambient != G.order:
        raise DomainError("subspace is not in this group algebra")
    out = Subspace(V.field, V.ambient)
    for row in V.rows:
        out.insert((AlgebraElement(G, row, V.field) * w).coeffs)
    return out


def left_ideal_closure(V: Subspace, group: FiniteGroup) -> Subspace:
    """Smallest left ideal containing V: fixpoint under the group generators.

    Closure under each generator's (invertible) left action gives closure
    under every group element, so only generators are multiplied.
    """
    out = V.copy()
    gens = group.generators
    rounds = 0
    changed = True
    while changed:
        rounds += 1
        assert rounds <= group.order + 1, "ideal closure failed to stabilize"
        changed = False
        for row in list(out.rows):
            elem = AlgebraElement(group, list(row), out.field)
            for g in gens:
                if out.insert(elem.translate_left(g).coeffs):
                    changed = True
    return out


def project_space(V: Subspace, decomposition: CosetDecomposition, group: FiniteGroup):
    """Per-coset projections pi_bH(V) as subspaces."""
    out = []
    for cid in range(decomposition.n_cosets):
        block = Subspace(V.field, V.ambient)
        for row in V.rows:
            e = AlgebraElement(group, row, V.field).project_coset(decomposition, cid)
            block.insert(e.coeffs)
        out.append(block)
    return out


def is_left_ideal(V: Subspace, group: FiniteGroup) -> bool:
    for row in V.rows:
        elem = AlgebraElement(group, row, V.field)
        for g in group.generators:
            if not V.contains(elem.translate_left(g).coeffs):
                return False
    return True


def is_induced(V: Subspace, decomposition: CosetDecomposition, group: FiniteGroup) -> bool:
    """True iff V is a left ideal equal to the direct sum of its coset projections."""
    if not is_left_ideal(V, group):
        return False
    for row in V.rows:
        elem = AlgebraElement(group, row, V.field)
        for cid in range(decomposition.n_cosets):
            if not V.contains(elem.project_coset(decomposition, cid).coeffs):
                return False
    return True


def circ(L: Subspace, H: Subgroup, decomposition: CosetDecomposition) -> Subspace:
    """The cut L(1 - eta_H) of an induced ideal L containing eta_G."""
    G = H.parent
    eta_G = eta(G, range(G.order)).to_field(L.field)
    if not L.contains(eta_G.coeffs):
        raise DomainError("cut undefined: the ideal does not contain the uniform element")
    if not is_induced(L, decomposition, G):
        raise DomainError("cut undefined: the subspace is not an induced left ideal")
    eta_H = eta(G, H).to_field(L.field)
    one = AlgebraElement.one(G, L.field)
    return right_multiply_space(L, one - eta_H)


def orthogonal_complement(W: Subspace, ambient: Subspace | None = None,
                          group_order: int | None = None) -> Subspace:
    """Perpendicular space under the conjugate-linear inner product.

    With ``ambient`` given, the complement is taken inside that subspace
    (e.g. the span of one double coset); otherwise inside the full space.
    """
    field = W.field
    conj = field.conjugate
    if ambient is None:
        rows = [[conj(c) for c in row] for row in W.rows]
        return nullspace(field, rows, W.ambient)
    if ambient.ambient != W.ambient:
        raise DomainError("ambient dimension mismatch")

    def dot_conj(w, v):
        total = field.zero
        for k, c in enumerate(w):
            if c and v[k]:
                total = total + conj(c) * v[k]
        return total

    images = [[dot_conj(row, a) for row in W.rows] for a in ambient.rows]
    coeffs = kernel_coefficients(field, images)
    out = Subspace(field, W.ambient)
    for cv in coeffs.rows:
        vec = [field.zero] * W.ambient
        for j, c in enumerate(cv):
            if c:
                for k, a in enumerate(ambient.rows[j]):
                    if a:
                        vec[k] = vec[k] + c * a
        out.insert(vec)
    return out

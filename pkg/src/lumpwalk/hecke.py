"""Orbital matrices, bi-invariant weights and achievable lumped matrices.

The 0/1 orbital matrix of a double coset records the orbit of the group acting
diagonally on pairs of left cosets; their span is the commutant of the coset
action and is anti-isomorphic to the algebra of bi-invariant weights.  A
stochastic matrix on cosets arises as a lumped transition matrix exactly when
it is invariant under the diagonal action, i.e. a non-negative combination of
orbital matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement
from .errors import DomainError
from .lumping import LumpingProblem


@dataclass(frozen=True)
class OrbitalMatrix:
    class_id: int
    representative: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def ones_per_row(self) -> int:
        return sum(self.matrix[0])


def orbital_matrices(problem: LumpingProblem) -> list[OrbitalMatrix]:
    """One 0/1 matrix per double coset; entry (gH, g'H) is 1 iff g^-1 g' lies in it."""
    G = problem.group
    reps = problem.left.representatives
    m = len(reps)
    out = []
    for cid in range(problem.double.n_classes):
        rows = []
        for ri in reps:
            inv = G.inv(ri)
            rows.append(tuple(
                1 if problem.double.class_of[G.mul(inv, rj)] == cid else 0 for rj in reps
            ))
        out.append(OrbitalMatrix(cid, problem.double.representatives[cid], tuple(rows)))
    return out


@dataclass
class HeckeElement:
    """A bi-invariant element, stored by its constant value on each double coset."""

    problem: LumpingProblem
    class_values: list  # value of the element at each point of the class

    def element(self) -> AlgebraElement:
        out = AlgebraElement.zero(self.problem.group)
        for cid, value in enumerate(self.class_values):
            if value:
                for g in self.problem.double.classes[cid]:
                    out.coeffs[g] = value
        return out

    def basis_coefficients(self) -> list:
        """Coefficients over the averaged double-coset basis elements."""
        return [
            v * self.problem.double.sizes[cid] for cid, v in enumerate(self.class_values)
        ]


def averaged_class_element(problem: LumpingProblem, cid: int) -> AlgebraElement:
    """The uniform idempotent-sandwiched basis element of one double coset."""
    out = AlgebraElement.zero(problem.group)
    size = problem.double.sizes[cid]
    for g in problem.double.classes[cid]:
        out.coeffs[g] = Fraction(1, size)
    return out


def hecke_project(problem: LumpingProblem, w: AlgebraElement) -> HeckeElement:
    """eta_H w eta_H in the double-coset basis: the value on a class is
    the class weight divided by the class size."""
    values = [w.field.zero] * problem.double.n_classes
    for i, c in w.support():
        cid = problem.double.class_of[i]
        values[cid] = values[cid] + c
    values = [
        v / Fraction(problem.double.sizes[cid]) for cid, v in enumerate(values)
    ]
    projected = HeckeElement(problem, values)
    # the sandwich product must agree with the averaging shortcut
    sandwiched = problem.eta_H * w * problem.eta_H
    assert sandwiched == projected.element().to_field(w.field), "averaging shortcut failed"
    return projected


def check_Q_characterization(problem: LumpingProblem, Q):
    """Decide whether Q is an achievable lumped matrix and realize it.

    Returns (True, coefficients, weight) where ``coefficients`` maps class id
    to the common entry of Q on that orbital and ``weight`` is a bi-invariant
    weight whose lumped matrix is Q; or (False, certificate, None) when Q is
    not invariant under the diagonal coset action.
    """
    m = problem.index
    rows = [list(map(Fraction, row)) for row in Q]
    if len(rows) != m or any(len(r) != m for r in rows):
        raise DomainError("lumped matrix has the wrong shape")
    for r in rows:
        if any(x < 0 for x in r):
            raise DomainError("lumped matrix has a negative entry")
        if sum(r) != 1:
            raise DomainError("lumped matrix row does not sum to 1")
    G = problem.group
    reps = problem.left.representatives
    values: dict[int, Fraction] = {}
    for i, ri in enumerate(reps):
        inv = G.inv(ri)
        for j, rj in enumerate(reps):
            cid = problem.double.class_of[G.mul(inv, rj)]
            if cid in values:
                if values[cid] != rows[i][j]:
                    certificate = {
                        "class": G.elements[problem.double.representatives[cid]].cycle_string(),
                        "entries": [str(values[cid]), str(rows[i][j])],
                        "position": [i, j],
                    }
                    return False, certificate, None
            else:
                values[cid] = rows[i][j]
    weight = AlgebraElement.zero(G)
    order_H = problem.subgroup.order
    for cid, q in values.items():
        if q:
            for g in problem.double.classes[cid]:
                weight.coeffs[g] = q / order_H
    coefficients = [values[cid] for cid in range(problem.double.n_classes)]
    return True, coefficients, weight


def verify_hecke_isomorphism(problem: LumpingProblem) -> bool:
    """Check the anti-homomorphism from bi-invariant weights to orbital matrices.

    The basis element of class C maps to M_C / m_C where m_C is the ones-count
    of a row; products must map to products in the opposite order.
    """
    orbitals = orbital_matrices(problem)
    m = problem.index
    n_classes = problem.double.n_classes

    def scaled(cid):
        mc = orbitals[cid].ones_per_row
        return [[Fraction(x, mc) for x in row] for row in orbitals[cid].matrix]

    def mat_mul(A, B):
        return [
            [sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(m)]
            for i in range(m)
        ]

    basis = [averaged_class_element(problem, cid) for cid in range(n_classes)]
    for a in range(n_classes):
        for b in range(n_classes):
            product = basis[a] * basis[b]
            image = [[Fraction(0)] * m for _ in range(m)]
            for cid in range(n_classes):
                value = product.coeffs[problem.double.representatives[cid]]
                # constant on the class; expansion coefficient is value * size
                if any(
                    product.coeffs[g] != value for g in problem.double.classes[cid]
                ):
                    return False
                if value:
                    coef = value * problem.double.sizes[cid]
                    block = scaled(cid)
                    for i in range(m):
                        for j in range(m):
                            image[i][j] += coef * block[i][j]
            expected = mat_mul(scaled(b), scaled(a))
            if image != expected:
                return False
    return True

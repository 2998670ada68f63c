"""Decision procedures for lumping a left-invariant walk to left cosets.

Everything here is exact.  The two ideal computations follow the product
structure of induced ideals: an induced left ideal is determined by its cut
down to the subgroup algebra, so the fixpoint iterations run on vectors of
length |H| and only the multiplications by the driving weight touch vectors
of length |G|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import (
    AlgebraElement,
    abelian_character_idempotent,
    abelian_characters,
    conjugate_character_index,
    coset_sums,
    eta,
    inner_product,
    is_idempotent,
    supported_on,
)
from .errors import DomainError
from .groups import FiniteGroup, Subgroup, cosets, double_cosets
from .linalg import Subspace, kernel_coefficients
from .scalars import RATIONALS, common_field, cyclotomic_field


class LumpingProblem:
    """A pair (G, H) with its coset geometry and averaging element cached."""

    def __init__(self, G: FiniteGroup, H: Subgroup):
        if H.parent is not G:
            raise DomainError("subgroup does not belong to the group")
        self.group = G
        self.subgroup = H
        self.left = cosets(G, H, "left")
        self.right = cosets(G, H, "right")
        self.double = double_cosets(G, H, H)
        self.eta_H = eta(G, H)
        self.eta_G = eta(G, range(G.order))
        self._rep_inverses = tuple(G.inv(r) for r in self.left.representatives)
        self._H_gen_perms = None

    @property
    def index(self) -> int:
        return self.left.n_cosets

    # -- vectors over the subgroup algebra -------------------------------------

    def to_H_vector(self, elem: AlgebraElement) -> list:
        H = self.subgroup
        vec = [elem.field.zero] * H.order
        for i, c in elem.support():
            if i not in H:
                raise DomainError("element is not supported on the subgroup")
            vec[H.position(i)] = c
        return vec

    def from_H_vector(self, vec, scalar_field=RATIONALS) -> AlgebraElement:
        out = AlgebraElement.zero(self.group, scalar_field)
        for pos, c in enumerate(vec):
            if c:
                out.coeffs[self.subgroup.members[pos]] = c
        return out

    def coset_components(self, elem: AlgebraElement) -> list[list]:
        """Per left coset bH, the vector of b^-1 pi_bH(elem) over the subgroup."""
        G, H = self.group, self.subgroup
        out = [[elem.field.zero] * H.order for _ in range(self.index)]
        for i, c in elem.support():
            cid = self.left.coset_of[i]
            pos = H.position(G.mul(self._rep_inverses[cid], i))
            out[cid][pos] = c
        return out

    def _H_generator_perms(self):
        """Left multiplication by each subgroup generator as an index map."""
        if self._H_gen_perms is None:
            H, G = self.subgroup, self.group
            perms = []
            for g in H.generators:
                perms.append(tuple(H.position(G.mul(g, h)) for h in H.members))
            self._H_gen_perms = tuple(perms)
        return self._H_gen_perms

    def close_H_ideal(self, space: Subspace) -> Subspace:
        """Smallest left ideal of the subgroup algebra containing the span."""
        perms = self._H_generator_perms()
        out = space.copy()
        changed = True
        rounds = 0
        while changed:
            rounds += 1
            assert rounds <= self.subgroup.order + 1
            changed = False
            for row in list(out.rows):
                src = list(row)
                for perm in perms:
                    shifted = [out.field.zero] * len(src)
                    for pos, c in enumerate(src):
                        if c:
                            shifted[perm[pos]] = c
                    if out.insert(shifted):
                        changed = True
        return out

    def eta_H_vector(self, scalar_field=RATIONALS) -> list:
        return self.to_H_vector(self.eta_H.to_field(scalar_field))

    # -- induced ideals --------------------------------------------------------

    def induced_contains(self, pi_H: Subspace, elem: AlgebraElement) -> bool:
        """Membership of an element of C[G] in the ideal induced from pi_H."""
        return all(pi_H.contains(comp) for comp in self.coset_components(elem))

    def induce_full(self, pi_H: Subspace) -> Subspace:
        """Materialize the induced ideal as a subspace of the full group algebra."""
        out = Subspace(pi_H.field, self.group.order)
        for rep in self.left.representatives:
            for row in pi_H.rows:
                out.insert(self.from_H_vector(row, pi_H.field).translate_left(rep).coeffs)
        return out


@dataclass
class GurvitsLedouxIdeal:
    """An induced left ideal described by its cut to the subgroup algebra."""

    problem: LumpingProblem
    pi_H: Subspace
    provenance: str  # "minimal" | "minimal-for-start" | "maximal"
    weakly_lumping: bool | None = None

    @property
    def dim(self) -> int:
        return self.problem.index * self.pi_H.dim

    def verify_axioms(self, w: AlgebraElement) -> dict:
        """Recompute the defining properties from the stored basis."""
        problem = self.problem
        full = self.full_subspace()
        from .linalg import is_induced, right_multiply_space

        moved = right_multiply_space(full, w.require_weight())
        one = AlgebraElement.one(problem.group, full.field)
        cut = right_multiply_space(full, one - problem.eta_H.to_field(full.field))
        cut_moved = right_multiply_space(cut, w)
        return {
            "contains_uniform": full.contains(problem.eta_G.to_field(full.field).coeffs),
            "stable_under_weight": full.contains_subspace(moved),
            "induced": is_induced(full, problem.left, problem.group),
            "cut_stable": cut.contains_subspace(cut_moved),
        }

    def contains(self, elem: AlgebraElement) -> bool:
        return self.problem.induced_contains(self.pi_H, elem)

    def contains_ideal(self, other: "GurvitsLedouxIdeal") -> bool:
        return self.pi_H.contains_subspace(other.pi_H)

    def full_subspace(self) -> Subspace:
        return self.problem.induce_full(self.pi_H)

    def basis_elements(self) -> list[AlgebraElement]:
        return [self.problem.from_H_vector(r, self.pi_H.field) for r in self.pi_H.rows]


# ---------------------------------------------------------------------------
# strong and exact lumping


def _double_coset_constancy(problem: LumpingProblem, w: AlgebraElement, side: str):
    """Check that coset weights are constant within each double coset."""
    decomposition = problem.left if side == "left" else problem.right
    sums = coset_sums(w, decomposition)
    for cid in range(problem.double.n_classes):
        seen = {}
        for coset_id, rep in enumerate(decomposition.representatives):
            if problem.double.class_of[rep] != cid:
                continue
            # every coset lies inside one double coset, keyed by its rep
            seen[coset_id] = sums[coset_id]
        values = list(seen.values())
        if any(v != values[0] for v in values[1:]):
            pair = sorted(seen, key=seen.get)
            return False, {
                "double_coset": problem.group.elements[problem.double.representatives[cid]].cycle_string(),
                "cosets": [
                    problem.group.elements[decomposition.representatives[pair[0]]].cycle_string(),
                    problem.group.elements[decomposition.representatives[pair[-1]]].cycle_string(),
                ],
                "sums": [str(seen[pair[0]]), str(seen[pair[-1]])],
            }
    return True, None


def test_strong(problem: LumpingProblem, w: AlgebraElement):
    """Strong lumping: left-coset weights constant within each double coset.

    The equivalent algebraic condition (1 - eta_H) w eta_H == 0 is computed as
    well and the two answers are required to agree.
    """
    w = w.require_weight()
    verdict, certificate = _double_coset_constancy(problem, w, "left")
    weta = w * problem.eta_H
    algebraic = (weta - problem.eta_H * weta).is_zero()
    assert algebraic == verdict, "strong-lumping criteria disagree"
    return verdict, certificate


def test_exact(problem: LumpingProblem, w: AlgebraElement):
    """Exact lumping: right-coset weights constant within each double coset."""
    w = w.require_weight()
    verdict, certificate = _double_coset_constancy(problem, w, "right")
    etaw = problem.eta_H * w
    algebraic = (etaw - etaw * problem.eta_H).is_zero()
    assert algebraic == verdict, "exact-lumping criteria disagree"
    return verdict, certificate


# ---------------------------------------------------------------------------
# stable ideals from idempotents


def require_E_bullet(problem: LumpingProblem, e: AlgebraElement) -> AlgebraElement:
    if not supported_on(e, problem.subgroup):
        raise DomainError("idempotent is not supported on the subgroup")
    if not is_idempotent(e):
        raise DomainError("element is not idempotent")
    eta_H = problem.eta_H.to_field(e.field)
    if eta_H * e != eta_H:
        raise DomainError("idempotent does not average to eta_H (eta_H e != eta_H)")
    return e


def stable_ideal_check(problem: LumpingProblem, w: AlgebraElement, e: AlgebraElement):
    """Whether w lumps stably for the ideal generated by e.

    Returns (verdict, failed) where failed names the violated condition:
    "ideal-not-stable" for e w (1-e) != 0, "cut-not-stable" for
    (e - eta_H) w eta_H != 0.
    """
    e = require_E_bullet(problem, e)
    joint = common_field(w.field, e.field)
    w = w.to_field(joint)
    e = e.to_field(joint)
    one = AlgebraElement.one(problem.group, joint)
    failed = []
    if not (e * w * (one - e)).is_zero():
        failed.append("ideal-not-stable")
    if not ((e - problem.eta_H.to_field(joint)) * w * problem.eta_H.to_field(joint)).is_zero():
        failed.append("cut-not-stable")
    return not failed, failed


def time_reversal_dual_idempotent(problem: LumpingProblem, e: AlgebraElement) -> AlgebraElement:
    """The idempotent 1 - e* + eta_H generating the stable ideal of the reversed walk."""
    e = require_E_bullet(problem, e)
    one = AlgebraElement.one(problem.group, e.field)
    dual = one - e.star() + problem.eta_H.to_field(e.field)
    return require_E_bullet(problem, dual)


# ---------------------------------------------------------------------------
# the minimal ideal and the weight-level weak lumping test


def _cut_times_w_eta(problem: LumpingProblem, w: AlgebraElement) -> AlgebraElement:
    """(1 - eta_H) w eta_H, the obstruction used by the weak verdicts."""
    weta = w * problem.eta_H
    return weta - problem.eta_H * weta


def _grow_minimal_ideal(problem: LumpingProblem, w: AlgebraElement, seed: Subspace) -> Subspace:
    """Fixpoint M <- ideal(M + all translated coset components of M w)."""
    M = problem.close_H_ideal(seed)
    rounds = 0
    while True:
        rounds += 1
        assert rounds <= problem.subgroup.order + 1, "minimal ideal failed to stabilize"
        fresh = []
        for row in M.basis():
            product = problem.from_H_vector(row, M.field) * w
            for comp in problem.coset_components(product):
                if not M.contains(comp):
                    fresh.append(comp)
        if not fresh:
            return M
        grown = M.copy()
        for comp in fresh:
            grown.insert(comp)
        M = problem.close_H_ideal(grown)


def compute_Lw(problem: LumpingProblem, w: AlgebraElement) -> GurvitsLedouxIdeal:
    """Minimal induced ideal containing the uniform element and stable under w."""
    w = w.require_weight()
    if not w.is_irreducible_weight():
        raise DomainError(
            "weight is reducible (support does not generate the group); "
            "use the generic per-start test instead"
        )
    seed = Subspace(RATIONALS, problem.subgroup.order, [problem.eta_H_vector()])
    M = _grow_minimal_ideal(problem, w, seed)
    ideal = GurvitsLedouxIdeal(problem, M, "minimal")
    ideal.weakly_lumping = _ideal_cut_stable(problem, w, M)
    return ideal


def _ideal_cut_stable(problem: LumpingProblem, w: AlgebraElement, pi_H: Subspace) -> bool:
    z = _cut_times_w_eta(problem, w)
    for row in pi_H.rows:
        if not (problem.from_H_vector(row, pi_H.field) * z).is_zero():
            return False
    return True


def test_weak_weight(problem: LumpingProblem, w: AlgebraElement):
    """Weak lumping of the walk for some start distribution (via the minimal ideal)."""
    ideal = compute_Lw(problem, w)
    if ideal.weakly_lumping:
        return True, ideal, None
    z = _cut_times_w_eta(problem, w)
    for row in ideal.pi_H.rows:
        u = problem.from_H_vector(row, ideal.pi_H.field)
        if not (u * z).is_zero():
            return False, ideal, {"violating_cut_element": repr(u)}
    raise AssertionError("unreachable: verdict and certificate disagree")


def compute_L_alpha_w(problem: LumpingProblem, w: AlgebraElement, alpha: AlgebraElement):
    """Minimal induced ideal containing a start distribution; verdict for that start."""
    w = w.require_weight()
    if not w.is_irreducible_weight():
        raise DomainError(
            "weight is reducible (support does not generate the group); "
            "use the generic per-start test instead"
        )
    alpha = alpha.require_distribution()
    seed = Subspace(RATIONALS, problem.subgroup.order, [problem.eta_H_vector()])
    for comp in problem.coset_components(alpha):
        seed.insert(comp)
    M = _grow_minimal_ideal(problem, w, seed)
    ideal = GurvitsLedouxIdeal(problem, M, "minimal-for-start")
    ideal.weakly_lumping = _ideal_cut_stable(problem, w, M)
    return ideal, ideal.weakly_lumping


# ---------------------------------------------------------------------------
# the maximal ideal and the distribution-level test


def compute_Jw(problem: LumpingProblem, w: AlgebraElement) -> GurvitsLedouxIdeal:
    """Maximal induced ideal certifying weak lumping; start sets are its simplex."""
    weak, _, _ = test_weak_weight(problem, w)
    if not weak:
        raise DomainError("weight does not lump weakly: the maximal ideal is undefined")
    w = w.require_weight()
    H = problem.subgroup
    eta_vec = problem.eta_H_vector()

    # cut of the full subgroup algebra: h - h*eta_H = h - eta_H over members h,
    # spanning the (|H| - 1)-dimensional kernel of averaging
    cut = Subspace(RATIONALS, H.order)
    for pos in range(H.order):
        vec = [Fraction(0)] * H.order
        vec[pos] = Fraction(1)
        cut.insert([a - b for a, b in zip(vec, eta_vec)])

    def restrict_mod(ideal_cut: Subspace, include_eta: bool) -> Subspace:
        """{u in ideal_cut : u w lies in the ideal induced from (ideal_cut [+ eta_H])}."""
        reducer = ideal_cut.copy()
        if include_eta:
            reducer.insert(eta_vec)
        images = []
        for row in ideal_cut.rows:
            product = problem.from_H_vector(row, ideal_cut.field) * w
            flat = []
            for comp in problem.coset_components(product):
                flat.extend(reducer.reduce(comp))
            images.append(flat)
        coeffs = kernel_coefficients(RATIONALS, images)
        out = Subspace(RATIONALS, H.order)
        for cv in coeffs.rows:
            vec = [Fraction(0)] * H.order
            for k, c in enumerate(cv):
                if c:
                    for j, r in enumerate(ideal_cut.rows[k]):
                        if r:
                            vec[j] = vec[j] + c * r
            out.insert(vec)
        return out

    current = cut
    rounds = 0
    while True:
        rounds += 1
        assert rounds <= H.order + 1, "maximal ideal failed to stabilize"
        narrowed = restrict_mod(current, include_eta=False)
        again = restrict_mod(narrowed, include_eta=True)
        if again.dim == current.dim:
            current = again
            break
        current = again

    pi_H = current.copy()
    pi_H.insert(eta_vec)
    ideal = GurvitsLedouxIdeal(problem, pi_H, "maximal")
    ideal.weakly_lumping = True
    return ideal


def test_weak_distribution(problem: LumpingProblem, w: AlgebraElement, alpha: AlgebraElement):
    """Whether the walk started at alpha lumps weakly: membership in the maximal ideal."""
    alpha = alpha.require_distribution()
    weak, lw, _ = test_weak_weight(problem, w)
    if not weak:
        return False, None
    jw = compute_Jw(problem, w)
    return jw.contains(alpha), jw


# ---------------------------------------------------------------------------
# interpolation between the strong and exact criteria


def interpolation_test(problem: LumpingProblem, T: Subgroup, w: AlgebraElement):
    """Stable lumping for the ideal generated by the averaging element of T <= H.

    Condition (a): the walk lumps exactly to left cosets of T.
    Condition (b): w(TgH) is proportional to double-coset size within each HgH.
    """
    H = problem.subgroup
    if not H.contains_subgroup(T):
        raise DomainError("inner subgroup is not contained in the lumping subgroup")
    w = w.require_weight()
    G = problem.group
    eta_T = eta(G, T)
    failed = []
    etw = eta_T * w
    if not (etw - etw * eta_T).is_zero():
        failed.append("not-exact-to-inner-cosets")
    th = double_cosets(G, T, H)
    hh = problem.double
    w_th = [w.field.zero] * th.n_classes
    w_hh = [w.field.zero] * hh.n_classes
    for i, c in w.support():
        w_th[th.class_of[i]] += c
        w_hh[hh.class_of[i]] += c
    for cid in range(th.n_classes):
        big = hh.class_of[th.representatives[cid]]
        if w_th[cid] * hh.sizes[big] != w_hh[big] * th.sizes[cid]:
            failed.append("unbalanced-double-coset-mass")
            break
    return not failed, failed


# ---------------------------------------------------------------------------
# dimension of the stable-compatibility algebra of an idempotent


def theta_dimension(problem: LumpingProblem, e: AlgebraElement):
    """Dimension of {w : e w (1-e) = 0 and (e - eta_H) w eta_H = 0}, by exact rank.

    Returns (dimension, per_class) where per_class maps each double-coset id to
    the number of independent constraints it contributes; the per-class
    dimensions add up to the total.
    """
    e = require_E_bullet(problem, e)
    G = problem.group
    f = e.field
    one = AlgebraElement.one(G, f)
    eta_H = problem.eta_H.to_field(f)
    left1 = e
    right1 = one - e
    left2 = e - eta_H
    right2 = eta_H
    total_dim = 0
    per_class = []
    for cid in range(problem.double.n_classes):
        members = problem.double.classes[cid]
        rank_space = Subspace(f, 2 * G.order)
        for g in members:
            basis_g = AlgebraElement.basis(G, g, f)
            img1 = left1 * basis_g * right1
            img2 = left2 * basis_g * right2
            rank_space.insert(img1.coeffs + img2.coeffs)
        constraints = rank_space.dim
        per_class.append(constraints)
        total_dim += len(members) - constraints
    return total_dim, per_class


# ---------------------------------------------------------------------------
# the abelian-subgroup linear-system test


def abelian_weak_test(problem: LumpingProblem, w: AlgebraElement,
                      conjugation_closed_only: bool = False):
    """Search for a character subset certifying weak lumping (abelian H only).

    Subsets P of the character group containing the trivial character are
    enumerated by increasing size, lexicographically within each size; the
    first P whose orthogonality constraints all vanish is returned together
    with its idempotent.  With ``conjugation_closed_only`` the search is
    restricted to subsets closed under complex conjugation of characters.
    """
    H = problem.subgroup
    if not H.is_abelian():
        raise DomainError("subgroup is not abelian")
    w = w.require_weight()
    if not w.is_irreducible_weight():
        raise DomainError(
            "weight is reducible (support does not generate the group); "
            "the character-subset criterion requires an irreducible weight"
        )
    m, chars = abelian_characters(H)
    field = cyclotomic_field(m)
    idempotents = [
        abelian_character_idempotent(H, chi, m) for chi in chars
    ]
    n_chars = len(chars)
    reps = problem.double.representatives
    w_f = w.to_field(field)
    pairings = {}
    for x in reps:
        x_elem = AlgebraElement.basis(problem.group, x, field)
        for b in range(n_chars):
            eb_x = idempotents[b] * x_elem
            for c in range(n_chars):
                pairings[(x, b, c)] = inner_product(eb_x * idempotents[c], w_f)

    def subset_works(P):
        complement = [c for c in range(n_chars) if c not in P]
        for x in reps:
            for b in P:
                for c in complement + [0]:
                    if (b, c) == (0, 0):
                        continue
                    if not field.is_zero(pairings[(x, b, c)]):
                        return False
        return True

    conj_index = [conjugate_character_index(H, m, chars, i) for i in range(n_chars)]
    for size in range(1, n_chars + 1):
        for rest in combinations(range(1, n_chars), size - 1):
            P = (0,) + rest
            if conjugation_closed_only and any(conj_index[b] not in P for b in P):
                continue
            if subset_works(P):
                e_P = idempotents[0]
                for b in rest:
                    e_P = e_P + idempotents[b]
                return True, P, e_P
    return False, None, None


# ---------------------------------------------------------------------------
# small subgroups, lumped matrices, reports


def small_H_verdict_consistency(problem: LumpingProblem, w: AlgebraElement) -> str:
    """For |H| <= 3: weak lumping forces strong or exact; returns the refined verdict."""
    if problem.subgroup.order > 3:
        raise DomainError("refined verdict only applies to subgroups of order <= 3")
    w = w.require_weight()
    if not w.is_irreducible_weight():
        raise DomainError("weight is reducible")
    strong, _ = test_strong(problem, w)
    exact, _ = test_exact(problem, w)
    weak, _, _ = test_weak_weight(problem, w)
    if weak != (strong or exact):
        raise AssertionError("weak verdict inconsistent with strong/exact for small subgroup")
    if strong and exact:
        return "strong+exact"
    if strong:
        return "strong"
    if exact:
        return "exact"
    return "none"


def walk_lumped_matrix(problem: LumpingProblem, w: AlgebraElement):
    """Lumped transition matrix of the stationary walk over left cosets.

    Row gH, column g'H holds (eta_H w)(g^-1 g' H) for the normalized weight;
    this is the aggregated matrix of the walk under the uniform law.
    """
    w = w.require_weight().normalized()
    averaged = problem.eta_H * w
    sums = coset_sums(averaged, problem.left)
    G = problem.group
    reps = problem.left.representatives
    out = []
    for i, ri in enumerate(reps):
        inv = G.inv(ri)
        out.append([sums[problem.left.coset_of[G.mul(inv, rj)]] for rj in reps])
    return out


def lumping_function(problem: LumpingProblem):
    """The left-coset lumping map as a generic lumping function."""
    from .markov import LumpingFunction

    labels = tuple(
        problem.group.elements[r].cycle_string() for r in problem.left.representatives
    )
    return LumpingFunction(tuple(problem.left.coset_of), labels)


@dataclass
class LumpingReport:
    verdicts: dict
    dimensions: dict
    bases: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    lumped_matrix: list | None = None


def analyze(problem: LumpingProblem, w: AlgebraElement,
            alpha: AlgebraElement | None = None) -> LumpingReport:
    """Full verdict set for a weight (and optionally a start distribution)."""
    w = w.require_weight()
    strong, cert_s = test_strong(problem, w)
    exact, cert_e = test_exact(problem, w)
    verdicts = {"strong": strong, "exact": exact}
    dimensions = {}
    bases = {}
    certificates = {}
    if cert_s:
        certificates["strong"] = cert_s
    if cert_e:
        certificates["exact"] = cert_e
    lumped = None
    if w.is_irreducible_weight():
        weak, lw, cert_w = test_weak_weight(problem, w)
        verdicts["weak_weight"] = weak
        dimensions["minimal_ideal"] = lw.dim
        bases["minimal_ideal_cut"] = [repr(u) for u in lw.basis_elements()]
        if cert_w:
            certificates["weak_weight"] = cert_w
        if weak:
            lumped = [[str(q) for q in row] for row in walk_lumped_matrix(problem, w)]
            if alpha is not None:
                ok, jw = test_weak_distribution(problem, w, alpha)
                verdicts["weak_for_start"] = ok
                dimensions["maximal_ideal"] = jw.dim
        elif alpha is not None:
            verdicts["weak_for_start"] = False
    else:
        verdicts["weak_weight"] = None
        certificates["weak_weight"] = {"reason": "reducible weight: use the generic per-start test"}
    if verdicts.get("weak_weight") is False and (strong or exact):
        raise AssertionError("strong or exact lumping must imply weak lumping")
    return LumpingReport(verdicts, dimensions, bases, certificates, lumped)

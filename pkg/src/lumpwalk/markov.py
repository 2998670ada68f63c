"""Generic finite Markov-chain machinery over exact rationals.

This module is deliberately group-free: states are abstract indices, so it
serves as the independent oracle for the group-specific decision procedures.
It provides the minimal stable subspace for a start distribution, the
weak/strong/exact lumping tests, the maximal stable subspace, stationary
distributions, lumped transition matrices, exact conditional laws given a
lump history, and time reversal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement
from .errors import DomainError, InputFormatError
from .groups import FiniteGroup
from .linalg import Subspace, intersect
from .scalars import RATIONALS, parse_rational

STATE_CAP = 5_000


@dataclass(frozen=True)
class Distribution:
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.probs):
            raise DomainError("distribution has a negative entry")
        if sum(self.probs) != 1:
            raise DomainError("distribution entries must sum to 1")

    @property
    def n(self) -> int:
        return len(self.probs)

    @staticmethod
    def point(n: int, state: int) -> "Distribution":
        return Distribution(tuple(Fraction(1) if i == state else Fraction(0) for i in range(n)))

    @staticmethod
    def uniform(n: int) -> "Distribution":
        return Distribution((Fraction(1, n),) * n)

    @staticmethod
    def from_vector(vec) -> "Distribution":
        return Distribution(tuple(Fraction(x) for x in vec))


class TransitionMatrix:
    """Row-stochastic matrix with exact rational entries acting on row vectors."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = [list(map(Fraction, r)) for r in rows]
        n = len(rows)
        if n > STATE_CAP:
            raise DomainError(f"state count {n} exceeds the cap {STATE_CAP}")
        for r in rows:
            if len(r) != n:
                raise DomainError("transition matrix must be square")
            if any(x < 0 for x in r):
                raise DomainError("negative transition probability")
            if sum(r) != 1:
                raise DomainError("row of transition matrix does not sum to 1")
        self.n = n
        self.rows = rows

    def apply(self, vec: list[Fraction]) -> list[Fraction]:
        """Row vector times matrix."""
        out = [Fraction(0)] * self.n
        for x, vx in enumerate(vec):
            if vx:
                row = self.rows[x]
                for y, p in enumerate(row):
                    if p:
                        out[y] = out[y] + vx * p
        return out

    def step(self, alpha: Distribution) -> Distribution:
        return Distribution(tuple(self.apply(list(alpha.probs))))

    def is_irreducible(self) -> bool:
        return self._reaches_all(forward=True) and self._reaches_all(forward=False)

    def _reaches_all(self, forward: bool) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in range(self.n):
                p = self.rows[x][y] if forward else self.rows[y][x]
                if p and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def __eq__(self, other):
        return isinstance(other, TransitionMatrix) and self.rows == other.rows


@dataclass(frozen=True)
class LumpingFunction:
    """Surjection of states onto lumps 0..M-1 with optional labels."""

    lump_of: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        m = self.n_lumps
        if sorted(set(self.lump_of)) != list(range(m)):
            raise DomainError("lump ids must be exactly 0..M-1")
        if self.labels and len(self.labels) != m:
            raise DomainError("one label per lump required")

    @property
    def n_lumps(self) -> int:
        return max(self.lump_of) + 1

    @property
    def n_states(self) -> int:
        return len(self.lump_of)

    def lumps(self) -> list[list[int]]:
        out = [[] for _ in range(self.n_lumps)]
        for x, b in enumerate(self.lump_of):
            out[b].append(x)
        return out

    def project(self, vec, b: int) -> list[Fraction]:
        """The projection Pi_b, zeroing coordinates outside lump b."""
        return [x if self.lump_of[i] == b else Fraction(0) for i, x in enumerate(vec)]

    def apply_F(self, vec) -> list[Fraction]:
        out = [Fraction(0)] * self.n_lumps
        for i, x in enumerate(vec):
            if x:
                out[self.lump_of[i]] += x
        return out

    def kernel_F(self) -> Subspace:
        """ker F, spanned by within-lump differences of basis vectors."""
        out = Subspace(RATIONALS, self.n_states)
        for block in self.lumps():
            base = block[0]
            for other in block[1:]:
                v = [Fraction(0)] * self.n_states
                v[base] = Fraction(1)
                v[other] = Fraction(-1)
                out.insert(v)
        return out


@dataclass
class GLSpace:
    """A subspace closed under the transition operator and the lump projections."""

    space: Subspace
    provenance: str  # "minimal-for-alpha" | "V_max" | "user"
    circ: Subspace = field(default=None)  # space  cap ker F, set by the constructors

    @property
    def dim(self) -> int:
        return self.space.dim


# ---------------------------------------------------------------------------
# construction of chains


def transition_from_weight(G: FiniteGroup, w: AlgebraElement) -> TransitionMatrix:
    """Walk matrix P(x, y) = w(x^-1 y)/w(G) of the left-invariant random walk."""
    w = w.require_weight()
    total = w.total()
    support = [(g, c / total) for g, c in w.support()]
    rows = []
    for x in range(G.order):
        row = [Fraction(0)] * G.order
        for g, p in support:
            row[G.mul(x, g)] += p
        rows.append(row)
    return TransitionMatrix(rows)


# ---------------------------------------------------------------------------
# Gurvits-Ledoux spaces and the generic lumping tests


def minimal_GL_space(f: LumpingFunction, P: TransitionMatrix, alpha: Distribution) -> GLSpace:
    """Fixpoint V <- V + sum_b V P Pi_b started from the projections of alpha."""
    n = P.n
    V = Subspace(RATIONALS, n)
    frontier = []
    for b in range(f.n_lumps):
        proj = f.project(alpha.probs, b)
        if any(proj) and V.insert(proj):
            frontier.append(proj)
    steps = 0
    while frontier:
        steps += 1
        assert steps <= n, "minimal stable space failed to stabilize in |A| steps"
        new_frontier = []
        for v in frontier:
            vP = P.apply(v)
            for b in range(f.n_lumps):
                proj = f.project(vP, b)
                if any(proj) and V.insert(proj):
                    new_frontier.append(proj)
        frontier = new_frontier
    return GLSpace(V, "minimal-for-alpha", intersect(V, f.kernel_F()))


def test_weak_generic(f: LumpingFunction, P: TransitionMatrix, alpha: Distribution):
    """Weak lumping of MC(alpha, P) under f; certificate is a violating vector."""
    gl = minimal_GL_space(f, P, alpha)
    for v in gl.circ.rows:
        image = f.apply_F(P.apply(v))
        if any(image):
            return False, list(v)
    return True, None


def test_strong_generic(f: LumpingFunction, P: TransitionMatrix) -> bool:
    """Dynkin's condition: within every lump, all rows have equal lump sums."""
    for block in f.lumps():
        base = f.apply_F(P.rows[block[0]])
        for other in block[1:]:
            if f.apply_F(P.rows[other]) != base:
                return False
    return True


def test_exact_generic(f: LumpingFunction, P: TransitionMatrix, alpha: Distribution) -> bool:
    """Exact lumping via the per-lump dimension criterion dim(V Pi_b) <= 1."""
    gl = minimal_GL_space(f, P, alpha)
    for b in range(f.n_lumps):
        block = Subspace(RATIONALS, P.n)
        for v in gl.space.rows:
            block.insert(f.project(v, b))
            if block.dim > 1:
                return False
    return True


def stationary_distribution(P: TransitionMatrix) -> Distribution:
    """The unique solution of mu P = mu for an irreducible chain."""
    if not P.is_irreducible():
        raise DomainError("transition matrix is not irreducible")
    n = P.n
    # left null space of (P - I): solve v (P - I) = 0 as nullspace of columns
    rows = []
    for y in range(n):
        rows.append([P.rows[x][y] - (1 if x == y else 0) for x in range(n)])
    from .linalg import nullspace

    sols = nullspace(RATIONALS, rows, n)
    assert sols.dim == 1, "irreducible chain must have a unique stationary law"
    vec = sols.rows[0]
    total = sum(vec)
    mu = [x / total for x in vec]
    if any(x < 0 for x in mu):
        raise DomainError("stationary solution is not a distribution")
    return Distribution(tuple(mu))


def lumped_transition_matrix(f: LumpingFunction, P: TransitionMatrix, mu: Distribution):
    """Aggregated matrix Q(i, j) = mu-weighted mass flow from lump i to lump j.

    Rows of lumps with zero mu-mass are undefined and returned as None.
    """
    m = f.n_lumps
    lumps = f.lumps()
    out = []
    for i in range(m):
        mass = sum(mu.probs[x] for x in lumps[i])
        if mass == 0:
            out.append(None)
            continue
        row = [Fraction(0)] * m
        for x in lumps[i]:
            if mu.probs[x]:
                for y, p in enumerate(P.rows[x]):
                    if p:
                        row[f.lump_of[y]] += mu.probs[x] * p
        out.append([q / mass for q in row])
    return out


def lumped_matrix_from_start(f: LumpingFunction, P: TransitionMatrix, alpha: Distribution):
    """Empirical-free lumped rows observed from a start law: row b is the
    common next-lump law from any reachable conditional supported on lump b.

    Only valid when MC(alpha, P) lumps weakly; rows of unreachable lumps are
    None.
    """
    m = f.n_lumps
    rows = [None] * m
    vec = list(alpha.probs)
    for _ in range(P.n + 1):
        for b in range(m):
            proj = f.project(vec, b)
            total = sum(proj)
            if total and rows[b] is None:
                nxt = f.apply_F(P.apply(proj))
                rows[b] = [x / total for x in nxt]
        vec = P.apply(vec)
    return rows


def compute_Vmax_generic(f: LumpingFunction, P: TransitionMatrix, Q) -> GLSpace:
    """Largest subspace V with V P <= V, V Pi_b <= V and V <= ker(PF - FQ).

    Requires an irreducible P whose stationary chain lumps weakly under f with
    lumped matrix Q.  V is maintained as a direct sum of per-lump blocks that
    shrink until all of V maps into V under P.
    """
    from .linalg import kernel_coefficients

    mu = stationary_distribution(P)
    ok, _ = test_weak_generic(f, P, mu)
    if not ok:
        raise DomainError("the stationary chain does not lump weakly under f")
    expected = lumped_transition_matrix(f, P, mu)
    given = [list(map(Fraction, row)) for row in Q]
    if expected != given:
        raise DomainError("Q is not the lumped transition matrix of the stationary chain")

    n = P.n
    m = f.n_lumps
    lumps = f.lumps()

    def block_from_coeffs(states, basis_rows, coeffs) -> Subspace:
        out = Subspace(RATIONALS, n)
        for cv in coeffs.rows:
            vec = [Fraction(0)] * n
            for k, c in enumerate(cv):
                if c:
                    for j, r in enumerate(basis_rows[k]):
                        if r:
                            vec[j] = vec[j] + c * r
            out.insert(vec)
        return out

    # start: per-lump solutions of v (PF - FQ) = 0; for v supported on lump b,
    # vF = (sum v) e_b, so the constraint image of e_x is e_x P F - Q[b].
    blocks = []
    for b in range(m):
        states = lumps[b]
        basis_rows = []
        images = []
        for x in states:
            v = [Fraction(0)] * n
            v[x] = Fraction(1)
            basis_rows.append(v)
            image = f.apply_F(P.apply(v))
            images.append([image[j] - given[b][j] for j in range(m)])
        coeffs = kernel_coefficients(RATIONALS, images)
        blocks.append(block_from_coeffs(states, basis_rows, coeffs))

    def combined(blocks) -> Subspace:
        out = Subspace(RATIONALS, n)
        for blk in blocks:
            for r in blk.rows:
                out.insert(r)
        return out

    V = combined(blocks)
    replacements = 0
    while True:
        if all(V.contains(P.apply(v)) for v in V.rows):
            break
        replacements += 1
        assert replacements <= max(n - m, 0) + 1, "maximal stable space failed to stabilize"
        new_blocks = []
        for blk in blocks:
            if blk.dim == 0:
                new_blocks.append(blk)
                continue
            residues = [V.reduce(P.apply(v)) for v in blk.rows]
            coeffs = kernel_coefficients(RATIONALS, residues)
            new_blocks.append(block_from_coeffs(None, blk.rows, coeffs))
        blocks = new_blocks
        V = combined(blocks)
    return GLSpace(V, "V_max", intersect(V, f.kernel_F()))


def conditional_distribution(f: LumpingFunction, P: TransitionMatrix,
                             alpha: Distribution, observations) -> Distribution:
    """Exact law of X_t given the lump history f(X_0), ..., f(X_t).

    An empty history imposes no condition and returns alpha.  Raises
    DomainError naming the first impossible prefix when the observed sequence
    has probability zero under MC(alpha, P).
    """
    observations = list(observations)
    if not observations:
        return alpha
    vec = f.project(alpha.probs, observations[0])
    if not any(vec):
        raise DomainError("impossible observation sequence at prefix index 0")
    for t, b in enumerate(observations[1:], start=1):
        vec = f.project(P.apply(vec), b)
        if not any(vec):
            raise DomainError(f"impossible observation sequence at prefix index {t}")
    total = sum(vec)
    return Distribution(tuple(x / total for x in vec))


def time_reversal_matrix(P: TransitionMatrix, alpha: Distribution) -> TransitionMatrix:
    """Reversed chain P*(x, y) = alpha(y) P(y, x) / alpha(x)."""
    if any(p == 0 for p in alpha.probs):
        raise DomainError("time reversal requires a full-support distribution")
    if P.apply(list(alpha.probs)) != list(alpha.probs):
        raise DomainError("time reversal requires a stationary distribution")
    n = P.n
    rows = [
        [alpha.probs[y] * P.rows[y][x] / alpha.probs[x] for y in range(n)]
        for x in range(n)
    ]
    return TransitionMatrix(rows)


# ---------------------------------------------------------------------------
# text formats: `states <N>` then N rows of rationals; `lump <state> <label>`


def parse_matrix_file(text: str) -> TransitionMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("states"):
        raise InputFormatError("matrix file must start with `states <N>`")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise InputFormatError("bad states header")
    if len(lines) != n + 1:
        raise InputFormatError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        entries = [parse_rational(tok) for tok in ln.split()]
        if len(entries) != n:
            raise InputFormatError("matrix row with wrong entry count")
        rows.append(entries)
    return TransitionMatrix(rows)


def parse_distribution_file(text: str) -> Distribution:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("states"):
        raise InputFormatError("distribution file must start with `states <N>`")
    n = int(lines[0].split()[1])
    if len(lines) != 2:
        raise InputFormatError("distribution file needs exactly one row")
    entries = [parse_rational(tok) for tok in lines[1].split()]
    if len(entries) != n:
        raise InputFormatError("distribution row with wrong entry count")
    return Distribution(tuple(entries))


def parse_lump_file(text: str, n_states: int) -> LumpingFunction:
    assignments = {}
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "lump":
            raise InputFormatError(f"line {lineno}: expected `lump <state> <label>`")
        state = int(parts[1])
        label = parts[2]
        if not 0 <= state < n_states:
            raise InputFormatError(f"line {lineno}: state {state} out of range")
        assignments[state] = label
    if set(assignments) != set(range(n_states)):
        raise InputFormatError("every state needs exactly one lump line")
    order = []
    for s in range(n_states):
        lab = assignments[s]
        if lab not in labels:
            labels[lab] = len(order)
            order.append(lab)
    return LumpingFunction(
        tuple(labels[assignments[s]] for s in range(n_states)), tuple(order)
    )

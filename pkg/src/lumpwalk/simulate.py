"""Monte-Carlo corroboration: sampled walks and an order-2 Markov diagnostic.

The sampler is fully reproducible: randomness comes from an explicit
xoshiro256** generator seeded through splitmix64, and group elements are drawn
by comparing the exact rational cumulative weights against u = k / 2^64 where
k is the raw 64-bit output.  Diagnostics are advisory only; no verdict
anywhere in the package depends on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement
from .lumping import LumpingProblem

_MASK = (1 << 64) - 1


class Xoshiro256StarStar:
    """xoshiro256** 1.0; state initialized from the seed via splitmix64."""

    def __init__(self, seed: int):
        self.state = []
        x = seed & _MASK
        for _ in range(4):
            x = (x + 0x9E3779B97F4A7C15) & _MASK
            z = x
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            self.state.append(z ^ (z >> 31))

    @staticmethod
    def _rotl(x: int, k: int) -> int:
        return ((x << k) | (x >> (64 - k))) & _MASK

    def next_uint64(self) -> int:
        s = self.state
        result = (self._rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rotl(s[3], 45)
        return result

    def next_unit_fraction(self) -> Fraction:
        return Fraction(self.next_uint64(), 1 << 64)


def _sampler(entries):
    """Cumulative-threshold sampler over (value, probability) pairs."""
    values = []
    thresholds = []
    acc = Fraction(0)
    for value, p in entries:
        if p:
            acc += p
            values.append(value)
            thresholds.append(acc)
    assert acc == 1, "sampler probabilities must sum to 1"

    def draw(u: Fraction):
        for value, threshold in zip(values, thresholds):
            if u < threshold:
                return value
        return values[-1]

    return draw


@dataclass(frozen=True)
class Trajectory:
    seed: int
    length: int
    states: tuple[int, ...]
    lumps: tuple[int, ...]


def simulate_walk(problem: LumpingProblem, w: AlgebraElement, alpha: AlgebraElement,
                  seed: int, length: int) -> Trajectory:
    """Sample X_0 ~ alpha then multiply by w-steps; deterministic in the seed."""
    w = w.require_weight().normalized()
    alpha = alpha.require_distribution()
    rng = Xoshiro256StarStar(seed)
    draw_start = _sampler(list(alpha.support()))
    draw_step = _sampler(list(w.support()))
    G = problem.group
    x = draw_start(rng.next_unit_fraction())
    states = [x]
    for _ in range(length):
        g = draw_step(rng.next_unit_fraction())
        x = G.mul(x, g)
        states.append(x)
    lumps = tuple(problem.left.coset_of[s] for s in states)
    return Trajectory(seed, length, tuple(states), lumps)


def simulate_ensemble(problem: LumpingProblem, w: AlgebraElement, alpha: AlgebraElement,
                      seed: int, replicas: int, length: int) -> list[Trajectory]:
    """Independent restarts; replica r is seeded with splitmix64(seed) xor r.

    Aggregate statistics over an ensemble of short runs expose start-dependent
    violations of the Markov property that wash out of one long trajectory of
    an aperiodic walk (whose late-time triple counts follow the stationary
    lumped chain).
    """
    base = Xoshiro256StarStar(seed).next_uint64()
    return [
        simulate_walk(problem, w, alpha, base ^ r, length) for r in range(replicas)
    ]


def empirical_lumped_matrix(lumps, n_lumps: int):
    """Observed next-lump frequencies; rows of unvisited lumps are None."""
    counts = [[0] * n_lumps for _ in range(n_lumps)]
    for a, b in zip(lumps, lumps[1:]):
        counts[a][b] += 1
    out = []
    for row in counts:
        total = sum(row)
        out.append(None if total == 0 else [Fraction(c, total) for c in row])
    return out


@dataclass
class DiagnosticReport:
    """Order-2 vs order-1 homogeneity check of a lump sequence.

    For each current lump b the transition counts are split by the previous
    lump a; each context (a, b) is scored with the chi-square-style statistic
    sum (observed - expected)^2 / expected against the pooled row for b.
    Contexts above the threshold are flagged.  With the default threshold 30
    and at most a few thousand contexts a well-mixed order-1 chain of 10^5
    steps produces no flags in practice (tail mass of chi-square with <= 5
    degrees of freedom beyond 30 is below 2e-5 per context); the check is
    advisory either way.
    """

    flagged: list = field(default_factory=list)
    statistics: dict = field(default_factory=dict)
    warning: str | None = None
    threshold: float = 30.0

    @property
    def clean(self) -> bool:
        return not self.flagged


def markov_diagnostic(lumps, n_lumps: int, min_length: int = 10_000,
                      threshold: float = 30.0) -> DiagnosticReport:
    """Accepts one lump sequence or an ensemble of sequences (list of lists)."""
    sequences = [lumps] if lumps and isinstance(lumps[0], int) else list(lumps)
    report = DiagnosticReport(threshold=threshold)
    observed = sum(max(len(s) - 2, 0) for s in sequences)
    if observed < min_length:
        report.warning = f"{observed} observed triples below the minimum {min_length}"
        return report
    # triple counts: previous lump, current lump, next lump
    triples = {}
    for seq in sequences:
        for a, b, c in zip(seq, seq[1:], seq[2:]):
            triples[(a, b, c)] = triples.get((a, b, c), 0) + 1
    for b in range(n_lumps):
        row_totals = [0] * n_lumps  # pooled next-lump counts for current b
        context_totals = {}
        for (a, bb, c), k in triples.items():
            if bb != b:
                continue
            row_totals[c] += k
            context_totals[a] = context_totals.get(a, 0) + k
        pooled = sum(row_totals)
        if pooled == 0:
            continue
        for a, ctx_total in context_totals.items():
            stat = 0.0
            for c in range(n_lumps):
                expected = row_totals[c] * ctx_total / pooled
                if expected == 0:
                    continue
                observed = triples.get((a, b, c), 0)
                stat += (observed - expected) ** 2 / expected
            report.statistics[(a, b)] = stat
            if stat > threshold:
                report.flagged.append({"context": (a, b), "statistic": stat})
    return report

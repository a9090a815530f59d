"""Explicit discrete-distribution-generating trees.

A DDG tree is walked by coin flips (0 = left, 1 = right) until a leaf
emits an outcome; a leaf at level j carries probability 2^-j.  Nodes are
keyed by their bit history rather than linked by pointers, which makes
trees directly comparable with the enumeration oracle and gives the DOT
exporter stable node ids.

Two builders are provided: ``build_canonical`` places leaves straight
from the binary expansions of the probabilities (the optimal shape), and
``build_from_uniform`` / ``build_from_discrete`` materialise whatever
tree the samplers actually walk, by replaying them on scripted bit
strings.  ``check_optimal`` compares any tree against the expansion-bit
characterisation of optimality.
"""

from dataclasses import dataclass
from fractions import Fraction

from .analysis import FlipDistribution
from .bitsource import ReplaySource, SourceExhausted
from .discrete import ProbabilityVector, expansion_bit, sample
from .uniform import _check_sides, roll

# node payloads: an int is a leaf outcome, INTERNAL marks a branch node
INTERNAL = None


@dataclass
class DdgTree:
    """Binary tree over bit histories; internal nodes map to INTERNAL,
    leaves to their outcome.  Internal nodes at the depth bound may have
    unmaterialised children: they form the live frontier of a truncated
    (conceptually infinite) tree."""

    nodes: dict[str, int | None]
    depth_bound: int

    def leaves(self):
        return ((h, out) for h, out in self.nodes.items() if out is not INTERNAL)

    def frontier(self) -> list[str]:
        """Internal nodes whose children were never materialised."""
        return [
            h
            for h, payload in self.nodes.items()
            if payload is INTERNAL and h + "0" not in self.nodes
        ]

    def is_complete(self) -> bool:
        return not self.frontier()

    def live_mass(self) -> Fraction:
        return sum((Fraction(1, 1 << len(h)) for h in self.frontier()), Fraction(0))


@dataclass
class LevelCensus:
    """Leaf counts per (level, outcome)."""

    counts: dict[tuple[int, int], int]

    def count(self, level: int, outcome: int) -> int:
        return self.counts.get((level, outcome), 0)

    def max_count(self) -> int:
        return max(self.counts.values(), default=0)


class MassMismatch(Exception):
    """Tree leaf masses do not reproduce the target distribution (a
    different failure from being suboptimal)."""


def _check_depth_bound(depth_bound: int) -> None:
    if depth_bound < 1:
        raise ValueError(f"depth_bound must be >= 1, got {depth_bound}")


def build_canonical(p: ProbabilityVector, depth_bound: int) -> DdgTree:
    """Optimal tree straight from the binary expansions.

    Outcome i gets one leaf at every level j where bit j of p_i is 1,
    placed at the lexicographically smallest open positions in ascending
    outcome order; remaining positions branch into the next level.
    """
    _check_depth_bound(depth_bound)
    certain = p.certain_outcome()
    if certain is not None:
        return DdgTree({"": certain}, 0)

    nodes: dict[str, int | None] = {"": INTERNAL}
    open_positions = ["0", "1"]
    for level in range(1, depth_bound + 1):
        accept = [i for i in range(1, len(p) + 1) if expansion_bit(p.prob(i), level)]
        assert len(accept) <= len(open_positions), "expansion bits exceed open slots"
        for position, outcome in zip(open_positions, accept):
            nodes[position] = outcome
        rest = open_positions[len(accept) :]
        for position in rest:
            nodes[position] = INTERNAL
        if not rest:
            break
        if level < depth_bound:
            open_positions = [h + b for h in rest for b in ("0", "1")]
    return DdgTree(nodes, depth_bound)


def _build_by_replay(run, depth_bound: int) -> DdgTree:
    """Classify each bit history by replaying the sampler on exactly
    those bits: terminated on the last bit = leaf, ran dry = internal."""
    nodes: dict[str, int | None] = {}
    frontier = [[]]
    for depth in range(depth_bound + 1):
        next_frontier = []
        for bits in frontier:
            history = "".join("1" if b else "0" for b in bits)
            try:
                result = run(ReplaySource(bits))
            except SourceExhausted:
                nodes[history] = INTERNAL
                if depth < depth_bound:
                    next_frontier.append(bits + [0])
                    next_frontier.append(bits + [1])
                continue
            assert result.flips == len(bits)
            nodes[history] = result.outcome
        frontier = next_frontier
    return DdgTree(nodes, depth_bound)


def build_from_uniform(n: int, depth_bound: int) -> DdgTree:
    """The tree the n-sided die roller actually walks."""
    _check_sides(n)
    _check_depth_bound(depth_bound)
    return _build_by_replay(lambda source: roll(n, source), depth_bound)


def build_from_discrete(p: ProbabilityVector, depth_bound: int) -> DdgTree:
    """The tree the discrete sampler actually walks."""
    _check_depth_bound(depth_bound)
    return _build_by_replay(lambda source: sample(p, source), depth_bound)


def census(tree: DdgTree) -> LevelCensus:
    counts: dict[tuple[int, int], int] = {}
    for history, outcome in tree.leaves():
        key = (len(history), outcome)
        counts[key] = counts.get(key, 0) + 1
    return LevelCensus(counts)


@dataclass
class OptimalityVerdict:
    ok: bool
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def check_optimal(tree: DdgTree, p: ProbabilityVector) -> OptimalityVerdict:
    """Verdict on whether ``tree`` is an optimal DDG for ``p``.

    Optimal means every (level, outcome) leaf count is 0 or 1 and equals
    the expansion bit of that outcome's probability, checked through the
    materialised depth.  Raises MassMismatch first if the leaf masses do
    not reproduce ``p`` at all.
    """
    tree_census = census(tree)
    outcomes = len(p)
    leaf_mass = {i: Fraction(0) for i in range(1, outcomes + 1)}
    for (level, outcome), count in tree_census.counts.items():
        if not 1 <= outcome <= outcomes:
            raise MassMismatch(f"leaf outcome {outcome} outside 1..{outcomes}")
        leaf_mass[outcome] += Fraction(count, 1 << level)
    complete = tree.is_complete()
    for i in range(1, outcomes + 1):
        if complete and leaf_mass[i] != p.prob(i):
            raise MassMismatch(
                f"outcome {i} has leaf mass {leaf_mass[i]}, distribution says {p.prob(i)}"
            )
        if leaf_mass[i] > p.prob(i):
            raise MassMismatch(
                f"outcome {i} has leaf mass {leaf_mass[i]} exceeding {p.prob(i)}"
            )

    violations = []
    for (level, outcome), count in sorted(tree_census.counts.items()):
        if count > 1:
            violations.append(f"outcome {outcome} appears {count} times at level {level}")
    for level in range(tree.depth_bound + 1):
        for i in range(1, outcomes + 1):
            want = expansion_bit(p.prob(i), level)
            got = tree_census.count(level, i)
            if got != want and got <= 1:
                violations.append(
                    f"outcome {i} has {got} leaves at level {level}, expansion bit is {want}"
                )
    return OptimalityVerdict(not violations, violations)


def flip_distribution(tree: DdgTree) -> FlipDistribution:
    """P(N = j) = (leaves at level j) * 2^-j; frontier mass is residual."""
    mass: dict[int, Fraction] = {}
    for history, _ in tree.leaves():
        j = len(history)
        mass[j] = mass.get(j, Fraction(0)) + Fraction(1, 1 << j)
    return FlipDistribution(mass, tree.live_mass())


def dominates(a: FlipDistribution, b: FlipDistribution) -> bool:
    """True iff a's flip count is stochastically no worse than b's:
    P(N_a > i) <= P(N_b > i) for every i."""
    horizon = max(a.max_level(), b.max_level())
    for i in range(horizon + 1):
        if a.tail(i) > b.tail(i):
            return False
    return a.residual <= b.residual


def export_dot(tree: DdgTree) -> str:
    """Graphviz DOT text: unlabeled circles for internal nodes, outcome
    labels on leaves, 0/1 edge labels, node ids "r" + bit history."""
    lines = ["digraph ddg {"]
    unresolved = set(tree.frontier())
    for history in sorted(tree.nodes, key=lambda h: (len(h), h)):
        payload = tree.nodes[history]
        node_id = "r" + history
        if payload is INTERNAL:
            style = ', style="dashed"' if history in unresolved else ""
            lines.append(f'  {node_id} [shape=circle, label=""{style}];')
        else:
            lines.append(f'  {node_id} [shape=box, label="{payload}"];')
        if history:
            lines.append(f'  r{history[:-1]} -> {node_id} [label="{history[-1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Greedy assignment of levels {1,...,n} to slice groups G_1,...,G_t.

The construction walks levels i = 1..n, keeping a working set of levels not
yet assigned. Whenever level i closes a coarse stratum of slice k (that is,
ceil(n_k(i+1/2)/n) exceeds ceil(n_k(i-1/2)/n)), the smallest working-set
level falling in that stratum is handed to G_k. The eligibility guarantee
(there is always such a level) is a proven property of the construction;
the code still checks it and aborts loudly if it ever fails, because a
failure can only mean an implementation bug.

All stratum arithmetic is exact: ceil(n_j(i +- 1/2)/n) is evaluated as
ceil_div(n_j * (2i +- 1), 2n) on integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import SliceSizes, LevelPartition, ceil_div

__all__ = [
    "DeltaSequence",
    "LevelStep",
    "delta_sequence",
    "assignment_steps",
    "partition_levels",
]


@dataclass(frozen=True)
class DeltaSequence:
    """Per-level counts of slices whose coarse stratum boundary closes at i."""

    deltas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(int(d) for d in self.deltas))

    @property
    def total(self) -> int:
        return sum(self.deltas)


def delta_sequence(sizes: SliceSizes) -> DeltaSequence:
    """delta_i = sum_j [ceil(n_j(i+1/2)/n) - ceil(n_j(i-1/2)/n)] for i=1..n.

    Each summand is 0 or 1, the deltas sum to n, and every prefix sum is
    at most i (assignments can never outpace the levels seen so far).
    """
    n = sizes.n
    deltas = []
    for i in range(1, n + 1):
        d = 0
        for nj in sizes.sizes:
            d += ceil_div(nj * (2 * i + 1), 2 * n) - ceil_div(nj * (2 * i - 1), 2 * n)
        deltas.append(d)
    return DeltaSequence(tuple(deltas))


@dataclass(frozen=True)
class LevelStep:
    """Trace record for one level i of the greedy walk.

    ``assignments`` lists (slice_index, level) pairs in execution order,
    slice_index 0-based; ``working_set`` is the set state after the step.
    """

    i: int
    assignments: tuple[tuple[int, int], ...]
    working_set: tuple[int, ...]


def assignment_steps(sizes: SliceSizes) -> list[LevelStep]:
    """Run the greedy walk, returning the full per-level trace."""
    n = sizes.n
    t = sizes.t
    working: list[int] = []  # stays sorted: appended in increasing order
    steps: list[LevelStep] = []
    for i in range(1, n + 1):
        working.append(i)
        # Slices whose coarse stratum closes at level i, in ascending index order.
        crossing = [
            k
            for k in range(t)
            if ceil_div(sizes.sizes[k] * (2 * i + 1), 2 * n)
            - ceil_div(sizes.sizes[k] * (2 * i - 1), 2 * n)
            == 1
        ]
        assigned: list[tuple[int, int]] = []
        for k in crossing:
            nk = sizes.sizes[k]
            target = ceil_div(nk * (2 * i - 1), 2 * n)
            pick = None
            for pos, u in enumerate(working):
                stratum = ceil_div(nk * (2 * u - 1), 2 * n)
                if stratum == target:
                    pick = pos
                    break
                if stratum > target:
                    break
            if pick is None:
                # Impossible by the eligibility guarantee; reaching this line
                # means the walk itself is wrong, so fail hard and loud.
                raise AssertionError(
                    f"no eligible level for slice {k} at i={i} "
                    f"(sizes={sizes.sizes}, working set={working})"
                )
            assigned.append((k, working.pop(pick)))
        steps.append(LevelStep(i, tuple(assigned), tuple(working)))
    return steps


def partition_levels(sizes: SliceSizes) -> LevelPartition:
    """Deterministic partition of {1,...,n} into groups of the given sizes.

    Group j, restricted to its coarse grid, hits every stratum
    ((m-1)/n_j, m/n_j] exactly once; the LevelPartition constructor
    re-checks the cheap structural invariants.
    """
    groups: list[list[int]] = [[] for _ in range(sizes.t)]
    for step in assignment_steps(sizes):
        for k, u in step.assignments:
            groups[k].append(u)
    return LevelPartition(tuple(tuple(g) for g in groups), sizes)

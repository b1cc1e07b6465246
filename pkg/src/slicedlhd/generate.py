"""Design generators: the sliced construction plus the baseline families.

All generators take an RngStream and split it per (slice, column), so adding
columns or slices never perturbs the draws of earlier ones and golden tests
stay stable across refactors.
"""

from __future__ import annotations

import numpy as np

from .core import (
    Design,
    LevelPartition,
    RngStream,
    SliceSizes,
    level_midpoints,
    uniform_permutation,
)
from .partition import partition_levels

__all__ = [
    "generate_sliced_lhd",
    "generate_midpoint_lhd",
    "generate_randomized_lhd",
    "generate_independent_lhds",
]


def generate_sliced_lhd(
    sizes: SliceSizes,
    p: int,
    rng: RngStream,
    partition: LevelPartition | None = None,
) -> Design:
    """Sliced Latin hypercube design: n x p, slices of the given sizes.

    Each column is a permutation of the full midpoint grid
    {1/(2n), ..., (2n-1)/(2n)}, and slice j's rows are a Latin hypercube at
    slice j's own coarser resolution. Per slice j and column l the group
    G_j is permuted under the split stream rng.split(j, l).

    ``partition`` lets callers reuse a precomputed partition (it is a pure
    function of ``sizes``); pass None to compute it here.
    """
    if p < 1:
        raise ValueError(f"dimension must be >= 1, got {p}")
    if partition is None:
        partition = partition_levels(sizes)
    elif partition.sizes != sizes:
        raise ValueError("partition was built for different slice sizes")
    n = sizes.n
    values = np.empty((n, p), dtype=np.float64)
    off = sizes.offsets()
    for j in range(sizes.t):
        group = np.asarray(partition.groups[j], dtype=np.int64)
        for l in range(p):
            order = uniform_permutation(len(group), rng.split(j, l)) - 1
            values[off[j] : off[j + 1], l] = level_midpoints(group[order], n)
    return Design(values, sizes)


def generate_midpoint_lhd(n: int, p: int, rng: RngStream) -> Design:
    """Single-slice design with each column a permutation of the n midpoints."""
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    sizes = SliceSizes((n,))
    values = np.empty((n, p), dtype=np.float64)
    for l in range(p):
        perm = uniform_permutation(n, rng.split(0, l))
        values[:, l] = level_midpoints(perm, n)
    return Design(values, sizes)


def generate_randomized_lhd(n: int, p: int, rng: RngStream) -> Design:
    """Ordinary Latin hypercube: one point per bin, jittered within the bin.

    Entry (i, l) is (pi_l(i) - U_il)/n with pi_l a uniform permutation and
    U_il independent uniform(0,1), so values land in ((m-1)/n, m/n] rather
    than at midpoints.
    """
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    sizes = SliceSizes((n,))
    values = np.empty((n, p), dtype=np.float64)
    for l in range(p):
        gen = rng.split(0, l).generator()
        perm = gen.permutation(n) + 1
        jitter = gen.random(n)
        values[:, l] = (perm - jitter) / n
    return Design(values, sizes)


def generate_independent_lhds(
    sizes: SliceSizes,
    p: int,
    rng: RngStream,
    decorrelate: bool = False,
    iterations: int = 10,
) -> Design:
    """Stack t independently generated midpoint LHDs of sizes n_1..n_t.

    Block j lives on its own grid {(2i-1)/(2n_j)}; the stacked matrix is
    generally not a Latin hypercube on the combined n-level grid, only each
    slice block is one at its own resolution. With ``decorrelate`` set, each
    block is passed through the correlation-reduction sweep independently
    (for p >= 2; one-column designs have nothing to decorrelate).
    """
    if p < 1:
        raise ValueError(f"dimension must be >= 1, got {p}")
    # Imported here to avoid a module cycle: decorrelate depends on core only,
    # but this generator is the one caller that needs the sweep.
    from .decorrelate import reduce_correlations

    values = np.empty((sizes.n, p), dtype=np.float64)
    off = sizes.offsets()
    for j, nj in enumerate(sizes.sizes):
        block = np.empty((nj, p), dtype=np.float64)
        for l in range(p):
            perm = uniform_permutation(nj, rng.split(j, l))
            block[:, l] = level_midpoints(perm, nj)
        if decorrelate and p >= 2:
            block_sizes = SliceSizes((nj,))
            block_design = Design(block, block_sizes)
            block_partition = partition_levels(block_sizes)
            block_design, _ = reduce_correlations(
                block_design, block_partition, iterations=iterations
            )
            block = block_design.values
        values[off[j] : off[j + 1], :] = block
    return Design(values, sizes)

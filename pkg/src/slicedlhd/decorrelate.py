"""Iterative residualize / rank-restore sweep that shrinks column correlations.

One iteration is four steps, applied slice block by slice block:

  1. forward pass: for k = 2..p, l = 1..k-1, replace column l of the block
     by its simple-linear-regression residual against column k;
  2. rank restore: map each column back onto the slice's midpoint multiset
     by rank (stable ties);
  3. backward pass: same as 1 with k = p-1..1, l = p..k+1;
  4. rank restore again.

Residualization within a pass reads BOTH the response and the covariate from
the block state as it was at the START of that pass. Writes do not chain:
when several k touch the same l inside one pass, the last write wins (k = p
in the forward pass, k = 1 in the backward pass). This stale-read behavior
is deliberate and pinned by golden tests; chaining the updates produces
different (and not reproducible) matrices.

Rank restoration preserves each slice's level multiset exactly, so the sweep
never damages the stratification guarantees of the input design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Design, LevelPartition, level_midpoints, levels_from_values

__all__ = [
    "SweepTrace",
    "residualize",
    "rank_restore",
    "rms_correlation",
    "reduce_correlations",
]


def residualize(response, covariate) -> np.ndarray:
    """Residual of ``response`` regressed on ``covariate`` (mean kept).

    Returns response - slope * (covariate - mean(covariate)) with
    slope = cov(covariate, response) / var(covariate); the output's sample
    correlation with ``covariate`` is zero (within float error) whenever both
    standard deviations are positive. Degenerate inputs (length < 2 or a
    constant covariate) return the response unchanged.
    """
    resp = np.asarray(response, dtype=np.float64)
    cov = np.asarray(covariate, dtype=np.float64)
    if resp.shape != cov.shape or resp.ndim != 1:
        raise ValueError("response and covariate must be equal-length vectors")
    if resp.size < 2:
        return resp.copy()
    cd = cov - cov.mean()
    den = float(cd @ cd)
    if den == 0.0:
        return resp.copy()
    slope = float(cd @ (resp - resp.mean())) / den
    return resp - slope * cd


def rank_restore(values, group_levels, n: int) -> np.ndarray:
    """Map the u-th smallest entry of ``values`` to the u-th smallest midpoint.

    ``group_levels`` are integer levels on the n-level grid; the output is a
    permutation of their midpoints (2g-1)/(2n), order-isomorphic to
    ``values``. Ties are broken by original position (stable sort), which
    makes constant inputs deterministic.
    """
    vals = np.asarray(values, dtype=np.float64)
    levels = np.sort(np.asarray(group_levels, dtype=np.int64))
    if vals.ndim != 1 or vals.size != levels.size:
        raise ValueError("values and group_levels must have equal length")
    out = np.empty_like(vals)
    order = np.argsort(vals, kind="stable")
    out[order] = level_midpoints(levels, n)
    return out


def rms_correlation(matrix) -> float:
    """Root mean square of all pairwise column correlations."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] < 2:
        raise ValueError("need a matrix with at least two columns")
    if m.shape[0] < 2:
        raise ValueError("need at least two rows to correlate")
    if np.any(m.std(axis=0) == 0.0):
        raise ValueError("zero-variance column has undefined correlation")
    corr = np.corrcoef(m, rowvar=False)
    iu = np.triu_indices(m.shape[1], k=1)
    return float(np.sqrt(np.mean(corr[iu] ** 2)))


def _block_rms(block: np.ndarray) -> float:
    # Per-slice trace entry; a block too small to correlate contributes 0.0
    # so trace entries stay within [0, 1].
    if block.shape[0] < 2:
        return 0.0
    return rms_correlation(block)


@dataclass(frozen=True)
class SweepTrace:
    """rho_rms history: index 0 is the initial state, then one per iteration."""

    whole: tuple[float, ...]
    per_slice: tuple[tuple[float, ...], ...]

    @property
    def iterations(self) -> int:
        return len(self.whole) - 1


def reduce_correlations(
    design: Design,
    partition: LevelPartition,
    iterations: int = 10,
) -> tuple[Design, SweepTrace]:
    """Run the four-step sweep ``iterations`` times; returns a new design.

    The input design's slice blocks must carry exactly the partition's level
    multisets (this is what generate_sliced_lhd produces; a single-slice
    design on the full grid works too, which is how the correlation-controlled
    single-design baseline is realized).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if design.p < 2:
        raise ValueError("correlation reduction needs at least two columns")
    if design.n < 2:
        raise ValueError("correlation reduction needs at least two rows")
    if partition.sizes != design.sizes:
        raise ValueError("partition slice sizes do not match the design")

    n = design.n
    p = design.p
    off = design.slice_offsets
    t = design.sizes.t

    # Check the per-block level multisets once, before touching anything.
    for j in range(t):
        want = np.asarray(partition.groups[j], dtype=np.int64)
        block_levels = levels_from_values(design.values[off[j] : off[j + 1], :], n)
        for l in range(p):
            got = np.sort(block_levels[:, l])
            if not np.array_equal(got, want):
                raise ValueError(
                    f"slice {j} column {l} does not carry the partition's levels"
                )

    mids = [partition.group_midpoints(j) for j in range(t)]
    values = design.values.copy()
    blocks = [values[off[j] : off[j + 1], :] for j in range(t)]

    whole_trace = [rms_correlation(values) if p >= 2 else 0.0]
    slice_traces = [[_block_rms(blocks[j])] for j in range(t)]

    def residual_pass(forward: bool) -> None:
        for block in blocks:
            if block.shape[0] < 2:
                continue
            base = block.copy()  # state at the start of the pass, per block
            if forward:
                pairs = ((k, l) for k in range(1, p) for l in range(k))
            else:
                pairs = (
                    (k, l)
                    for k in range(p - 2, -1, -1)
                    for l in range(p - 1, k, -1)
                )
            for k, l in pairs:
                block[:, l] = residualize(base[:, l], base[:, k])

    def restore_all() -> None:
        for j, block in enumerate(blocks):
            order = np.argsort(block, axis=0, kind="stable")
            for l in range(p):
                block[order[:, l], l] = mids[j]

    for _ in range(iterations):
        residual_pass(forward=True)
        restore_all()
        residual_pass(forward=False)
        restore_all()
        whole_trace.append(rms_correlation(values))
        for j in range(t):
            slice_traces[j].append(_block_rms(blocks[j]))

    trace = SweepTrace(
        whole=tuple(whole_trace),
        per_slice=tuple(tuple(s) for s in slice_traces),
    )
    return Design(values, design.sizes), trace


def _sweep_batch(
    stacked: np.ndarray,
    blocks: list[tuple[slice, np.ndarray]],
    iterations: int = 10,
) -> np.ndarray:
    """Vectorized sweep over a batch of designs, in place.

    ``stacked`` has shape (R, n, p); ``blocks`` pairs each slice's row range
    with its sorted midpoint vector. Only the surviving write per (pass, l)
    is computed: in a forward pass every l < p-1 ends up residualized against
    the last column, in a backward pass every l > 0 against the first, and
    covariate columns are never modified within a pass, so this produces
    exactly the same final state as the literal (k, l) loops.
    """
    R, n, p = stacked.shape
    if p < 2:
        return stacked

    def resid_rows(resp: np.ndarray, cov: np.ndarray) -> np.ndarray:
        cd = cov - cov.mean(axis=1, keepdims=True)
        rd = resp - resp.mean(axis=1, keepdims=True)
        den = np.einsum("ij,ij->i", cd, cd)
        num = np.einsum("ij,ij->i", cd, rd)
        slope = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
        return resp - slope[:, None] * cd

    def restore(rows: slice, mids: np.ndarray) -> None:
        block = stacked[:, rows, :]  # view: rows is a slice, writes go through
        order = np.argsort(block, axis=1, kind="stable")
        np.put_along_axis(
            block, order, np.broadcast_to(mids[None, :, None], block.shape), axis=1
        )

    for _ in range(iterations):
        for rows, mids in blocks:
            if mids.size < 2:
                continue
            base = stacked[:, rows, :].copy()
            for l in range(p - 1):
                stacked[:, rows, l] = resid_rows(base[:, :, l], base[:, :, p - 1])
        for rows, mids in blocks:
            restore(rows, mids)
        for rows, mids in blocks:
            if mids.size < 2:
                continue
            base = stacked[:, rows, :].copy()
            for l in range(1, p):
                stacked[:, rows, l] = resid_rows(base[:, :, l], base[:, :, 0])
        for rows, mids in blocks:
            restore(rows, mids)
    return stacked

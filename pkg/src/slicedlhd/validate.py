"""Stratification checks for design matrices.

Two guarantees are checked, mirroring what the sliced construction promises:
whole-grid stratification (each column puts one point in each of the n bins
((m-1)/n, m/n]) and per-slice stratification (slice j's rows do the same at
the coarser n_j resolution). A third flag records whether every entry sits
exactly on the full midpoint grid, which separates midpoint designs from
jittered or stacked-independent ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Design, level_midpoints, levels_from_values

__all__ = ["ValidationReport", "is_lhd_column", "validate_sliced"]

MIDPOINT_TOL = 1e-12


def is_lhd_column(column, bins: int) -> bool:
    """True iff each bin ((m-1)/bins, m/bins], m=1..bins, holds one entry.

    Entries are classified by ceil(x * bins); midpoints never sit on a bin
    edge, and jittered designs land on an edge only at x = m/bins exactly,
    which ceil classifies into the correct (right-closed) bin. Out-of-range
    entries fail the check rather than being clamped into a bin.
    """
    col = np.asarray(column, dtype=np.float64)
    if col.ndim != 1:
        raise ValueError("column must be a 1-D vector")
    if col.size != bins:
        raise ValueError(f"column has {col.size} entries but bins={bins}")
    if np.any(col <= 0.0) or np.any(col > 1.0):
        return False
    idx = np.ceil(col * bins).astype(np.int64)
    np.clip(idx, 1, bins, out=idx)
    return np.unique(idx).size == bins


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_sliced, one flag per check.

    ``column_ok[l]``: column l passes the whole-grid n-bin check.
    ``slice_ok[j][l]``: slice j, column l passes the n_j-bin check.
    ``midpoints_exact``: every entry equals some (2a-1)/(2n) within 1e-12.
    """

    column_ok: tuple[bool, ...]
    slice_ok: tuple[tuple[bool, ...], ...]
    midpoints_exact: bool
    n: int
    p: int
    sizes: tuple[int, ...]

    @property
    def all_pass(self) -> bool:
        return (
            all(self.column_ok)
            and all(all(row) for row in self.slice_ok)
            and self.midpoints_exact
        )

    def render(self) -> str:
        lines = [f"design: n={self.n} p={self.p} sizes={','.join(map(str, self.sizes))}"]
        for l, ok in enumerate(self.column_ok):
            lines.append(f"column {l + 1} whole-grid stratification: "
                         f"{'pass' if ok else 'FAIL'}")
        for j, row in enumerate(self.slice_ok):
            for l, ok in enumerate(row):
                lines.append(
                    f"slice {j + 1} column {l + 1} stratification: "
                    f"{'pass' if ok else 'FAIL'}"
                )
        lines.append(f"midpoint exactness: "
                     f"{'pass' if self.midpoints_exact else 'FAIL'}")
        lines.append(f"overall: {'all-pass' if self.all_pass else 'FAIL'}")
        return "\n".join(lines)


def validate_sliced(design: Design) -> ValidationReport:
    """Check both stratification guarantees plus midpoint exactness.

    Failures are reported, never raised; callers decide what a failure
    means (stacked independent designs are expected to fail the whole-grid
    and exactness checks while passing per-slice ones).
    """
    values = design.values
    n = design.n
    p = design.p
    off = design.slice_offsets

    column_ok = tuple(is_lhd_column(values[:, l], n) for l in range(p))
    slice_ok = tuple(
        tuple(
            is_lhd_column(values[off[j] : off[j + 1], l], design.sizes.sizes[j])
            for l in range(p)
        )
        for j in range(design.sizes.t)
    )
    nearest = level_midpoints(
        np.clip(levels_from_values(values, n), 1, n), n
    )
    midpoints_exact = bool(np.all(np.abs(values - nearest) <= MIDPOINT_TOL))
    return ValidationReport(
        column_ok=column_ok,
        slice_ok=slice_ok,
        midpoints_exact=midpoints_exact,
        n=n,
        p=p,
        sizes=design.sizes.sizes,
    )

"""Exhaustive search for the smallest S admitting a (K, F, Z, S) PDA.

Used as an independent check on the lower bounds, so it only relies on
the PDA definition.  The search fills the array column by column:

* column star sets are Z-subsets of the rows, chosen in nondecreasing
  lexicographic order (columns can be permuted freely), and the first
  column takes the least subset {0, ..., Z-1} (rows can be permuted);
* symbols are introduced in order of first appearance, so each
  relabelling class is visited once.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from .bounds import bound_first, bound_second, frac_ceil
from .pda import Pda, PdaError

__all__ = [
    "SearchSpaceTooLarge",
    "NotFoundWithin",
    "DEFAULT_MAX_CELLS",
    "find_pda",
    "oracle_min_s",
    "trivial_floor",
]

DEFAULT_MAX_CELLS = 24


class SearchSpaceTooLarge(PdaError):
    pass


class NotFoundWithin(PdaError):
    def __init__(self, s_max: int):
        super().__init__(f"no PDA found with S <= {s_max}")
        self.s_max = s_max


def _check_size(K: int, F: int, Z: int, max_cells: int) -> None:
    if K < 1 or F < 1 or not 0 <= Z <= F:
        raise PdaError(f"need K, F >= 1 and 0 <= Z <= F; got K={K}, F={F}, Z={Z}")
    if K * F > max_cells:
        raise SearchSpaceTooLarge(
            f"K*F = {K * F} exceeds the exhaustive-search limit {max_cells}"
        )


def find_pda(K: int, F: int, Z: int, S: int, *, max_cells: int = DEFAULT_MAX_CELLS) -> Optional[Pda]:
    """Return some (K, F, Z, S') PDA with S' <= S, or None if none exists."""
    _check_size(K, F, Z, max_cells)
    if Z == F:
        return Pda([[None] * K for _ in range(F)])
    if S < F - Z:
        return None

    masks = []
    for stars in combinations(range(F), Z):
        m = 0
        for i in stars:
            m |= 1 << i
        masks.append(m)
    nonstar_rows = [
        [i for i in range(F) if not (m >> i) & 1] for m in masks
    ]

    grid = [[None] * K for _ in range(F)]
    rowstar = [0] * F        # columns where row i holds a star
    row_syms = [0] * F       # symbols already in row i
    sym_rows = [0] * S       # rows holding symbol s
    sym_cols = [0] * S       # columns holding symbol s
    used = 0

    def fill(j: int, mask: int, idx: int, rows: list[int], pos: int, colsyms: int) -> bool:
        nonlocal used
        if pos == len(rows):
            return place(j + 1, idx)
        i = rows[pos]
        free_rows = ~mask
        rs = rowstar[i]
        taken = colsyms | row_syms[i]
        for s in range(used + 1 if used < S else used):
            if (taken >> s) & 1:
                continue
            if s < used and (sym_rows[s] & free_rows or sym_cols[s] & ~rs):
                continue
            fresh = s == used
            if fresh:
                used += 1
            grid[i][j] = s
            sym_rows[s] |= 1 << i
            sym_cols[s] |= 1 << j
            row_syms[i] |= 1 << s
            if fill(j, mask, idx, rows, pos + 1, colsyms | (1 << s)):
                return True
            sym_rows[s] &= ~(1 << i)
            sym_cols[s] &= ~(1 << j)
            row_syms[i] &= ~(1 << s)
            grid[i][j] = None
            if fresh:
                used -= 1
        return False

    def place(j: int, lo: int) -> bool:
        if j == K:
            return True
        top = 1 if j == 0 else len(masks)
        for idx in range(lo, top):
            mask = masks[idx]
            for i in range(F):
                if (mask >> i) & 1:
                    rowstar[i] |= 1 << j
            if fill(j, mask, idx, nonstar_rows[idx], 0, 0):
                return True
            for i in range(F):
                rowstar[i] &= ~(1 << j)
        return False

    if place(0, 0):
        return Pda(grid)
    return None


def trivial_floor(K: int, F: int, Z: int) -> int:
    """S >= F - Z: a column's symbol cells all carry distinct symbols."""
    return max(F - Z, 1) if Z < F else 0


def oracle_min_s(
    K: int,
    F: int,
    Z: int,
    s_max: Optional[int] = None,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    start: str = "bounds",
) -> int:
    """Smallest S for which a (K, F, Z, S) PDA exists.

    ``start="bounds"`` begins at max(ceil(bound1), bound2); ``start="trivial"``
    begins at F - Z and so does not trust either bound.  Raises
    :class:`NotFoundWithin` when nothing exists up to ``s_max`` (default: the
    all-distinct count (F - Z)K, which always succeeds).
    """
    _check_size(K, F, Z, max_cells)
    if Z == F:
        return 0
    n = (F - Z) * K
    if s_max is None:
        s_max = n
    if start == "bounds":
        lo = max(frac_ceil(bound_first(K, F, Z)), bound_second(K, F, Z))
    elif start == "trivial":
        lo = trivial_floor(K, F, Z)
    else:
        raise ValueError(f"unknown start {start!r}")
    for S in range(lo, s_max + 1):
        if find_pda(K, F, Z, S, max_cells=max_cells) is not None:
            return S
    raise NotFoundWithin(s_max)

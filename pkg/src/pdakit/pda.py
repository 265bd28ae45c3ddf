"""Placement delivery arrays: data model, validation and the incidence-set view.

A PDA is an F x K grid whose cells hold either a star (``None``) or a
nonnegative integer symbol.  Rows index packets, columns index users.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

__all__ = [
    "STAR",
    "PdaError",
    "MalformedGrid",
    "PdaFormatError",
    "ConflictingTriples",
    "Pda",
    "PdaParams",
    "OccupancyStats",
    "Violation",
    "ValidationVerdict",
    "IncidenceSet",
    "validate",
    "canonicalize",
    "to_incidence_set",
    "from_incidence_set",
    "check_p1",
    "check_p2",
    "conjugate",
    "invert_permutation",
    "PERMUTATIONS",
    "parse_text",
    "format_text",
]

STAR = None

Entry = Optional[int]
Cell = tuple[int, int]
Triple = tuple[int, int, int]

PERMUTATIONS: tuple[tuple[int, int, int], ...] = (
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
)


class PdaError(ValueError):
    """Base class for errors raised by this package."""


class MalformedGrid(PdaError):
    pass


class PdaFormatError(PdaError):
    pass


class ConflictingTriples(PdaError):
    pass


def _check_entry(value: object) -> Entry:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedGrid(f"entry must be a star or an int, got {value!r}")
    if value < 0:
        raise MalformedGrid(f"symbols are nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class Pda:
    """An immutable F x K array over stars and integer symbols.

    Construction only checks the grid shape; use :func:`validate` for the
    combinatorial conditions.
    """

    rows: tuple[tuple[Entry, ...], ...]

    def __init__(self, rows: Iterable[Iterable[Entry]]):
        grid = tuple(tuple(_check_entry(x) for x in row) for row in rows)
        if not grid:
            raise MalformedGrid("a PDA needs at least one row")
        width = len(grid[0])
        if width == 0:
            raise MalformedGrid("a PDA needs at least one column")
        for i, row in enumerate(grid):
            if len(row) != width:
                raise MalformedGrid(
                    f"row {i} has {len(row)} entries, expected {width}"
                )
        object.__setattr__(self, "rows", grid)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_cols(self) -> int:
        return len(self.rows[0])

    F = num_rows
    K = num_cols

    def __getitem__(self, cell: Cell) -> Entry:
        i, j = cell
        return self.rows[i][j]

    def cells(self) -> Iterable[tuple[int, int, Entry]]:
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                yield i, j, x

    def symbols(self) -> set[int]:
        return {x for _, _, x in self.cells() if x is not None}

    def column(self, j: int) -> tuple[Entry, ...]:
        return tuple(row[j] for row in self.rows)

    def with_entry(self, i: int, j: int, value: Entry) -> "Pda":
        grid = [list(row) for row in self.rows]
        grid[i][j] = value
        return Pda(grid)

    def transpose(self) -> "Pda":
        return Pda(zip(*self.rows))

    def to_text(self) -> str:
        return format_text(self)

    @classmethod
    def from_text(cls, text: str) -> "Pda":
        return parse_text(text)

    def __str__(self) -> str:
        return format_text(self)


@dataclass(frozen=True)
class PdaParams:
    K: int
    F: int
    Z: Optional[int]
    S: int
    n: int
    g: Optional[int]
    rate: Fraction
    memory_ratio: Optional[Fraction]

    def tuple(self) -> tuple[int, int, Optional[int], int]:
        return (self.K, self.F, self.Z, self.S)

    def __str__(self) -> str:
        z = "?" if self.Z is None else self.Z
        return f"(K={self.K},F={self.F},Z={z},S={self.S})"


@dataclass(frozen=True)
class OccupancyStats:
    symbol_counts: tuple[int, ...]
    row_counts: tuple[int, ...]
    column_star_counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.row_counts)


@dataclass(frozen=True)
class Violation:
    """One failed PDA condition, with the coordinates that witness it.

    ``kind`` is one of ``SameRowRepeat``, ``SameColumnRepeat``,
    ``CrossEntryNotStar`` or ``AlphabetGap``; ``ColumnStarMismatch`` is
    only ever reported as a flag, since C2 is not required of a PDA.
    """

    kind: str
    symbol: Optional[int] = None
    cells: tuple[Cell, ...] = ()
    cross_cell: Optional[Cell] = None
    cross_value: Entry = None
    missing: tuple[int, ...] = ()
    counts: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.symbol is not None:
            out["symbol"] = self.symbol
        if self.cells:
            out["cells"] = [list(c) for c in self.cells]
        if self.cross_cell is not None:
            out["cross_cell"] = list(self.cross_cell)
            out["cross_value"] = self.cross_value
        if self.missing:
            out["missing"] = list(self.missing)
        if self.counts:
            out["column_star_counts"] = list(self.counts)
        return out

    def __str__(self) -> str:
        if self.kind == "AlphabetGap":
            return f"AlphabetGap: symbols {list(self.missing)} missing"
        if self.kind == "ColumnStarMismatch":
            return f"ColumnStarMismatch: column star counts {list(self.counts)}"
        cells = ", ".join(f"({i},{j})" for i, j in self.cells)
        text = f"{self.kind}: symbol {self.symbol} at {cells}"
        if self.cross_cell is not None:
            i, j = self.cross_cell
            text += f"; p[{i}][{j}]={self.cross_value} is not a star"
        return text


@dataclass(frozen=True)
class ValidationVerdict:
    c1: bool
    alphabet_ok: bool
    violations: tuple[Violation, ...]
    stats: OccupancyStats
    c2: bool
    Z: Optional[int]
    g: Optional[int]
    params: Optional[PdaParams] = field(default=None)
    flags: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return self.c1 and self.alphabet_ok

    def summary(self) -> str:
        if not self.ok:
            return "invalid: " + "; ".join(str(v) for v in self.violations)
        p = self.params
        text = f"ok: {p}"
        if p.g is not None:
            text += f" g={p.g}"
        if not self.c2:
            text += " (column star counts differ: C2 fails)"
        return text


def validate(p: Pda) -> ValidationVerdict:
    """Check C1 and the symbol alphabet; report C2, Z, regularity and counts."""
    by_symbol: dict[int, list[Cell]] = defaultdict(list)
    for i, j, x in p.cells():
        if x is not None:
            by_symbol[x].append((i, j))

    violations: list[Violation] = []
    for s in sorted(by_symbol):
        for (i1, j1), (i2, j2) in combinations(by_symbol[s], 2):
            if i1 == i2:
                violations.append(
                    Violation("SameRowRepeat", s, ((i1, j1), (i2, j2)))
                )
            elif j1 == j2:
                violations.append(
                    Violation("SameColumnRepeat", s, ((i1, j1), (i2, j2)))
                )
            else:
                for ci, cj in ((i1, j2), (i2, j1)):
                    if p.rows[ci][cj] is not None:
                        violations.append(
                            Violation(
                                "CrossEntryNotStar",
                                s,
                                ((i1, j1), (i2, j2)),
                                (ci, cj),
                                p.rows[ci][cj],
                            )
                        )
    c1 = not violations

    S = max(by_symbol) + 1 if by_symbol else 0
    missing = tuple(s for s in range(S) if s not in by_symbol)
    if missing:
        violations.append(Violation("AlphabetGap", missing=missing))

    F, K = p.num_rows, p.num_cols
    symbol_counts = tuple(len(by_symbol.get(s, ())) for s in range(S))
    row_counts = tuple(sum(x is not None for x in row) for row in p.rows)
    star_counts = tuple(
        sum(p.rows[i][j] is None for i in range(F)) for j in range(K)
    )
    stats = OccupancyStats(symbol_counts, row_counts, star_counts)

    c2 = len(set(star_counts)) == 1
    Z = star_counts[0] if c2 else None
    present = [c for c in symbol_counts if c]
    g = present[0] if present and len(set(present)) == 1 and not missing else None

    params = None
    if c1 and not missing:
        params = PdaParams(
            K=K,
            F=F,
            Z=Z,
            S=S,
            n=stats.n,
            g=g,
            rate=Fraction(S, F),
            memory_ratio=Fraction(Z, F) if Z is not None else None,
        )
    return ValidationVerdict(
        c1=c1,
        alphabet_ok=not missing,
        violations=tuple(violations),
        stats=stats,
        c2=c2,
        Z=Z,
        g=g,
        params=params,
        flags=() if c2 else (Violation("ColumnStarMismatch", counts=star_counts),),
    )


def canonicalize(p: Pda) -> Pda:
    """Relabel symbols to 0, 1, ... in order of first row-major appearance."""
    mapping: dict[int, int] = {}
    for _, _, x in p.cells():
        if x is not None and x not in mapping:
            mapping[x] = len(mapping)
    return Pda(
        [None if x is None else mapping[x] for x in row] for row in p.rows
    )


# -- incidence sets ---------------------------------------------------------


@dataclass(frozen=True)
class IncidenceSet:
    """The (row, column, symbol) triples of a PDA's non-star cells.

    ``dims`` is (F, K, S), the ranges of the three coordinates.
    """

    triples: frozenset[Triple]
    dims: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))
        for t in self.triples:
            if len(t) != 3 or not all(0 <= t[c] < self.dims[c] for c in range(3)):
                raise PdaError(f"triple {t} outside dims {self.dims}")

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples))

    def min_distance(self) -> Optional[int]:
        best = None
        for x, y in combinations(self.triples, 2):
            d = sum(a != b for a, b in zip(x, y))
            if best is None or d < best:
                best = d
        return best


def to_incidence_set(p: Pda) -> IncidenceSet:
    S = max(p.symbols(), default=-1) + 1
    triples = frozenset((i, j, x) for i, j, x in p.cells() if x is not None)
    return IncidenceSet(triples, (p.num_rows, p.num_cols, S))


def from_incidence_set(c: IncidenceSet) -> Pda:
    F, K, _ = c.dims
    grid: list[list[Entry]] = [[None] * K for _ in range(F)]
    for i, j, s in sorted(c.triples):
        if grid[i][j] is not None:
            raise ConflictingTriples(
                f"cell ({i},{j}) gets symbols {grid[i][j]} and {s}"
            )
        grid[i][j] = s
    return Pda(grid)


def check_p1(c: IncidenceSet) -> bool:
    """True iff every two distinct triples differ in at least 2 coordinates."""
    for a, b in ((0, 1), (0, 2), (1, 2)):
        seen = set()
        for t in c.triples:
            key = (t[a], t[b])
            if key in seen:
                return False
            seen.add(key)
    return True


def check_p2(c: IncidenceSet) -> bool:
    """True iff c contains no (i1,j1,a), (i1,j2,b), (i2,j2,a) with a != b."""
    at_cell: dict[Cell, set[int]] = defaultdict(set)
    by_symbol: dict[int, list[Cell]] = defaultdict(list)
    for i, j, s in c.triples:
        at_cell[i, j].add(s)
        by_symbol[s].append((i, j))
    for a, cells in by_symbol.items():
        for (i1, j1), (i2, j2) in combinations(cells, 2):
            if i1 == i2 or j1 == j2:
                continue
            for cross in ((i1, j2), (i2, j1)):
                if at_cell.get(cross, set()) - {a}:
                    return False
    return True


def conjugate(c: IncidenceSet, perm: Sequence[int]) -> IncidenceSet:
    """Reorder every triple's coordinates as ``(x[perm[0]], x[perm[1]], x[perm[2]])``."""
    perm = tuple(perm)
    if sorted(perm) != [0, 1, 2]:
        raise PdaError(f"{perm} is not a permutation of (0, 1, 2)")
    triples = frozenset(tuple(t[q] for q in perm) for t in c.triples)
    dims = tuple(c.dims[q] for q in perm)
    return IncidenceSet(triples, dims)


def invert_permutation(perm: Sequence[int]) -> tuple[int, int, int]:
    inv = [0, 0, 0]
    for pos, q in enumerate(perm):
        inv[q] = pos
    return tuple(inv)


# -- text format ------------------------------------------------------------


def parse_text(text: str) -> Pda:
    """Parse the "F K" header followed by F rows of K tokens ('*' or an integer)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise PdaFormatError("empty input")
    header = lines[0].split()
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise PdaFormatError(f"bad header line {lines[0]!r}, expected 'F K'")
    F, K = int(header[0]), int(header[1])
    if F < 1 or K < 1:
        raise PdaFormatError("F and K must be positive")
    body = lines[1:]
    if len(body) != F:
        raise PdaFormatError(f"expected {F} rows, found {len(body)}")
    grid = []
    for lineno, line in enumerate(body, start=2):
        tokens = line.split()
        if len(tokens) != K:
            raise PdaFormatError(
                f"line {lineno}: expected {K} tokens, found {len(tokens)}"
            )
        row: list[Entry] = []
        for tok in tokens:
            if tok == "*":
                row.append(None)
            elif tok.isascii() and tok.isdigit():
                row.append(int(tok))
            else:
                raise PdaFormatError(f"line {lineno}: bad token {tok!r}")
        grid.append(row)
    return Pda(grid)


def format_text(p: Pda) -> str:
    out = [f"{p.num_rows} {p.num_cols}"]
    for row in p.rows:
        out.append(" ".join("*" if x is None else str(x) for x in row))
    return "\n".join(out) + "\n"

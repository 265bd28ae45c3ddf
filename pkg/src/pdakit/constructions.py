"""Explicit PDA families: the MN array, grouped MN, and its six conjugates.

Parameter-only families (Yan, Shang) are modelled by :func:`family_params`;
no arrays are built for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .pda import (
    Pda,
    PdaError,
    canonicalize,
    conjugate,
    from_incidence_set,
    to_incidence_set,
)

__all__ = [
    "ParameterOutOfRange",
    "MnSpec",
    "FamilyParams",
    "VARIANT_PERMUTATIONS",
    "lex_rank",
    "lex_unrank",
    "build_mn",
    "build_grouped_mn",
    "build_variant",
    "build_p1",
    "build_p2",
    "family_params",
    "variant_params",
]


class ParameterOutOfRange(PdaError):
    pass


@dataclass(frozen=True)
class MnSpec:
    k: int
    t: int

    def __post_init__(self):
        if not (self.k >= 2 and 0 < self.t < self.k):
            raise ParameterOutOfRange(
                f"MN needs k >= 2 and 0 < t < k, got k={self.k}, t={self.t}"
            )


@dataclass(frozen=True)
class FamilyParams:
    family: str
    K: int
    F: int
    Z: int
    S: int
    source: dict = field(default_factory=dict, compare=False)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.S, self.F)

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.Z, self.F)

    def tuple(self) -> tuple[int, int, int, int]:
        return (self.K, self.F, self.Z, self.S)


# Coordinate order applied to the MN incidence set (row, column, symbol)
# to obtain each row of the six-variant family.
VARIANT_PERMUTATIONS: dict[str, tuple[int, int, int]] = {
    "a": (0, 1, 2),
    "b": (2, 1, 0),
    "c": (0, 2, 1),
    "d": (1, 2, 0),
    "e": (2, 0, 1),
    "f": (1, 0, 2),
}


def lex_rank(subset: Sequence[int], n: int) -> int:
    """Rank of a sorted subset of range(n) among same-size subsets, lexicographically."""
    r = len(subset)
    rank = 0
    prev = -1
    for pos, x in enumerate(subset):
        for y in range(prev + 1, x):
            rank += comb(n - 1 - y, r - 1 - pos)
        prev = x
    return rank


def lex_unrank(rank: int, n: int, r: int) -> tuple[int, ...]:
    if not 0 <= rank < comb(n, r):
        raise ParameterOutOfRange(f"rank {rank} out of range for C({n},{r})")
    out = []
    x = 0
    for pos in range(r):
        while True:
            block = comb(n - 1 - x, r - 1 - pos)
            if rank < block:
                break
            rank -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def build_mn(spec: MnSpec | tuple[int, int]) -> Pda:
    """Rows are t-subsets T, columns users u; entry is rank(T | {u}) or a star if u in T."""
    if not isinstance(spec, MnSpec):
        spec = MnSpec(*spec)
    k, t = spec.k, spec.t
    grid = []
    for T in combinations(range(k), t):
        row = []
        for u in range(k):
            if u in T:
                row.append(None)
            else:
                row.append(lex_rank(tuple(sorted(T + (u,))), k))
        grid.append(row)
    return Pda(grid)


def build_grouped_mn(k: int, t: int, m: int) -> Pda:
    """m side-by-side copies of build_mn(k, t) with disjoint symbol ranges."""
    if m < 1:
        raise ParameterOutOfRange(f"group count must be >= 1, got {m}")
    base = build_mn(MnSpec(k, t))
    offset = comb(k, t + 1)
    grid = []
    for row in base.rows:
        new_row = []
        for group in range(m):
            new_row.extend(
                None if x is None else x + group * offset for x in row
            )
        grid.append(new_row)
    return Pda(grid)


def _check_variant_range(k: int, t: int) -> None:
    if not (k >= 3 and 0 < t < k - 1):
        raise ParameterOutOfRange(
            f"variants need 0 < t < k-1, got k={k}, t={t}"
        )


def build_variant(spec: MnSpec | tuple[int, int], which: str) -> Pda:
    if not isinstance(spec, MnSpec):
        spec = MnSpec(*spec)
    if which not in VARIANT_PERMUTATIONS:
        raise ParameterOutOfRange(f"unknown variant {which!r}")
    _check_variant_range(spec.k, spec.t)
    mn = build_mn(spec)
    if which == "a":
        return mn
    c = conjugate(to_incidence_set(mn), VARIANT_PERMUTATIONS[which])
    return canonicalize(from_incidence_set(c))


def build_p1(k: int, t: int) -> Pda:
    return build_variant(MnSpec(k, t), "c")


def build_p2(k: int, t: int) -> Pda:
    return build_variant(MnSpec(k, t), "f")


def variant_params(k: int, t: int, which: str) -> tuple[int, int, int, int]:
    _check_variant_range(k, t)
    a, b = comb(k, t), comb(k, t + 1)
    table = {
        "a": (k, a, comb(k - 1, t - 1), b),
        "b": (k, b, comb(k - 1, t + 1), a),
        "c": (b, a, a - (t + 1), k),
        "d": (b, k, k - (t + 1), a),
        "e": (a, b, b - (k - t), k),
        "f": (a, k, t, b),
    }
    if which not in table:
        raise ParameterOutOfRange(f"unknown variant {which!r}")
    return table[which]


def family_params(tag: str, **src: int) -> FamilyParams:
    """Closed-form (K, F, Z, S) of a named family.

    Tags: ``MN`` (k, t), ``Grouped`` (k, t, m), ``Yan`` (q, m),
    ``Shang`` (q, m, l), ``P1`` / ``P2`` (k, t) and ``a``..``f`` (k, t).
    """
    try:
        if tag == "MN":
            k, t = src["k"], src["t"]
            MnSpec(k, t)
            K, F, Z, S = k, comb(k, t), comb(k - 1, t - 1), comb(k, t + 1)
        elif tag == "Grouped":
            k, t, m = src["k"], src["t"], src["m"]
            MnSpec(k, t)
            if m < 1:
                raise ParameterOutOfRange("m must be >= 1")
            K, F, Z, S = m * k, comb(k, t), comb(k - 1, t - 1), m * comb(k, t + 1)
        elif tag == "Yan":
            q, m = src["q"], src["m"]
            if q < 2 or m < 1:
                raise ParameterOutOfRange(f"Yan needs q >= 2, m >= 1; got q={q}, m={m}")
            K, F, Z, S = q * (m + 1), (q - 1) * q**m, (q - 1) ** 2 * q ** (m - 1), q**m
        elif tag == "Shang":
            q, m, l = src["q"], src["m"], src["l"]
            if q < 2 or not 1 <= l <= m:
                raise ParameterOutOfRange(
                    f"Shang needs q >= 2 and 1 <= l <= m; got q={q}, m={m}, l={l}"
                )
            K = comb(m, l) * q**l
            F = q**m * (q - 1) ** l
            Z = (q**m - q ** (m - l)) * (q - 1) ** l
            S = q**m
        elif tag == "P1":
            K, F, Z, S = variant_params(src["k"], src["t"], "c")
        elif tag == "P2":
            K, F, Z, S = variant_params(src["k"], src["t"], "f")
        elif tag in VARIANT_PERMUTATIONS:
            K, F, Z, S = variant_params(src["k"], src["t"], tag)
        else:
            raise ParameterOutOfRange(f"unknown family {tag!r}")
    except KeyError as exc:
        raise ParameterOutOfRange(f"family {tag} needs parameter {exc}") from None
    return FamilyParams(tag, K, F, Z, S, dict(src))

"""Lower bounds on the number of symbols S of a (K, F, Z, S) PDA.

All arithmetic is exact: integers and :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .pda import OccupancyStats, PdaError

__all__ = [
    "DegenerateInput",
    "NonIntegralZ",
    "NonIntegralParameter",
    "BoundReport",
    "bound_first",
    "bound_first_terms",
    "first_bound_equality_holds",
    "bound_second",
    "bound_second_terms",
    "bound_rate_tradeoff",
    "tradeoff_is_loose",
    "bound_rows_for_regular",
    "meets_row_bound",
    "bound_report",
    "frac_ceil",
]


class DegenerateInput(PdaError):
    pass


class NonIntegralZ(PdaError):
    pass


class NonIntegralParameter(PdaError):
    pass


def frac_ceil(x: Fraction | int) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def _check(K: int, F: int, Z: int) -> None:
    if K < 1 or F < 1:
        raise DegenerateInput(f"K and F must be positive, got K={K}, F={F}")
    if Z < 0:
        raise DegenerateInput(f"Z must be nonnegative, got {Z}")
    if Z >= F:
        raise DegenerateInput(
            f"Z={Z} >= F={F}: the array has no symbol entries, the bound is undefined"
        )


def bound_first_terms(K: int, F: int, Z: int) -> tuple[int, int]:
    """Numerator and denominator of nF / (KF + F - n), unreduced."""
    _check(K, F, Z)
    n = (F - Z) * K
    return n * F, K * F + F - n


def bound_first(K: int, F: int, Z: int) -> Fraction:
    num, den = bound_first_terms(K, F, Z)
    return Fraction(num, den)


def first_bound_equality_holds(stats: OccupancyStats) -> bool:
    """Equality in the first bound: uniform row counts n/F and symbol counts n/S."""
    n = stats.n
    S = len(stats.symbol_counts)
    if n == 0 or S == 0:
        return False
    F = len(stats.row_counts)
    if n % F or n % S:
        return False
    return set(stats.row_counts) == {n // F} and set(stats.symbol_counts) == {n // S}


def bound_second_terms(K: int, F: int, Z: int) -> list[int]:
    """The F - Z nested-ceiling terms, outermost first.

    Stripping the row with the most symbols leaves a PDA on F - 1 rows whose
    column count is the previous term; the recursion runs until Z rows remain.
    """
    _check(K, F, Z)
    a = frac_ceil(Fraction((F - Z) * K, F))
    terms = [a]
    for r in range(F - Z - 1):
        a = frac_ceil(Fraction(a * (F - Z - 1 - r), F - 1 - r))
        terms.append(a)
    return terms


def bound_second(K: int, F: int, Z: int) -> int:
    return sum(bound_second_terms(K, F, Z))


def _memory_to_z(F: int, memory_ratio: Fraction) -> int:
    z = F * Fraction(memory_ratio)
    if z.denominator != 1:
        raise NonIntegralZ(f"F * M/N = {z} is not an integer")
    return z.numerator


def bound_rate_tradeoff(K: int, F: int, memory_ratio: Fraction) -> Fraction:
    """R >= K(1 - M/N) / (F M/N + 1)."""
    memory_ratio = Fraction(memory_ratio)
    if not 0 < memory_ratio < 1:
        raise DegenerateInput(f"memory ratio must lie in (0, 1), got {memory_ratio}")
    _memory_to_z(F, memory_ratio)
    return K * (1 - memory_ratio) / (F * memory_ratio + 1)


def tradeoff_is_loose(K: int, F: int) -> bool:
    """For F > K the tradeoff bound falls below the known uncoded-placement minimum."""
    return F > K


def bound_rows_for_regular(K: int, F: int, Z: int) -> int:
    """Minimum row count C(K, KZ/F) of a (KZ/F + 1)-regular PDA."""
    t = Fraction(K * Z, F)
    if t.denominator != 1:
        raise NonIntegralParameter(f"KZ/F = {t} is not an integer")
    return comb(K, t.numerator)


def meets_row_bound(K: int, F: int, Z: int) -> bool:
    return F >= bound_rows_for_regular(K, F, Z)


@dataclass(frozen=True)
class BoundReport:
    K: int
    F: int
    Z: int
    n: int
    bound1: Fraction
    bound1_terms: tuple[int, int]
    bound1_ceiling: int
    bound2: int
    bound2_terms: tuple[int, ...]
    rate_bound: Fraction
    tradeoff_loose: bool
    achievable_S: Optional[int] = None

    @property
    def best(self) -> int:
        return max(self.bound1_ceiling, self.bound2)

    def rows(self) -> list[tuple[str, str]]:
        num, den = self.bound1_terms
        b1 = f"{num}/{den}"
        if self.bound1.denominator != den:
            b1 += f" = {self.bound1}"
        b1 += f" ~ {float(self.bound1):.4f}"
        out = [
            ("K", str(self.K)),
            ("F", str(self.F)),
            ("Z", str(self.Z)),
            ("n", str(self.n)),
            ("bound1", b1),
            ("bound1_ceiling", str(self.bound1_ceiling)),
            ("bound2", f"{self.bound2} = " + " + ".join(map(str, self.bound2_terms))),
            ("rate_bound", f"{self.rate_bound} ~ {float(self.rate_bound):.4f}"),
            ("tradeoff_loose (F > K)", str(self.tradeoff_loose).lower()),
            ("S >=", str(self.best)),
        ]
        if self.achievable_S is not None:
            out.append(("achievable_S", str(self.achievable_S)))
        return out

    def to_text(self) -> str:
        rows = self.rows()
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"

    def to_csv(self) -> str:
        header = "K,F,Z,n,bound1,bound1_ceiling,bound2,rate_bound,tradeoff_loose,achievable_S"
        ach = "" if self.achievable_S is None else str(self.achievable_S)
        line = (
            f"{self.K},{self.F},{self.Z},{self.n},{self.bound1},{self.bound1_ceiling},"
            f"{self.bound2},{self.rate_bound},{str(self.tradeoff_loose).lower()},{ach}"
        )
        return header + "\n" + line + "\n"


def bound_report(K: int, F: int, Z: int, achievable_S: Optional[int] = None) -> BoundReport:
    b1 = bound_first(K, F, Z)
    terms2 = bound_second_terms(K, F, Z)
    report = BoundReport(
        K=K,
        F=F,
        Z=Z,
        n=(F - Z) * K,
        bound1=b1,
        bound1_terms=bound_first_terms(K, F, Z),
        bound1_ceiling=frac_ceil(b1),
        bound2=sum(terms2),
        bound2_terms=tuple(terms2),
        rate_bound=Fraction(K * (F - Z), F) / (Z + 1),
        tradeoff_loose=tradeoff_is_loose(K, F),
        achievable_S=achievable_S,
    )
    if achievable_S is not None and achievable_S < report.best:
        raise PdaError(
            f"achievable S={achievable_S} is below the lower bound {report.best}"
        )
    return report

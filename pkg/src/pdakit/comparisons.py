"""Rate / subpacketization tradeoffs between PDA families.

Every ratio is an exact :class:`~fractions.Fraction` built from closed-form
family parameters, computed twice where a simplified closed form exists.
Decimal strings are produced only for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Iterable, Optional

from .constructions import FamilyParams, ParameterOutOfRange, family_params
from .pda import PdaError

__all__ = [
    "NoMatchingParameters",
    "OverflowGuard",
    "MAX_PARAMETER_BITS",
    "ComparisonRow",
    "compare_p1_vs_mn",
    "compare_p2_vs_mn",
    "compare_p2_vs_grouped",
    "compare_p1_vs_yan",
    "compare_p1_vs_shang",
    "dominates",
    "dominating_q_range",
    "search_dominating_params",
    "render_decimal",
    "matches_printed",
    "Cell",
    "ComparisonTable",
    "TABLES",
    "build_table",
    "PUBLISHED_TK3",
    "PUBLISHED_P2T2",
    "PUBLISHED_YAN",
    "PUBLISHED_SHANG",
]


class NoMatchingParameters(PdaError):
    pass


class OverflowGuard(PdaError):
    """A family parameter is too large to be worth materializing."""


MAX_PARAMETER_BITS = 1 << 20


@dataclass
class ComparisonRow:
    pair: str
    source: dict
    first: FamilyParams
    second: FamilyParams
    ratio_F: Fraction
    ratio_R: Fraction
    ratio_K: Fraction = Fraction(1)
    ratio_M: Fraction = Fraction(1)
    closed_form: dict[str, Fraction] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def closed_form_agrees(self) -> bool:
        direct = {"F": self.ratio_F, "R": self.ratio_R}
        return all(direct[k] == v for k, v in self.closed_form.items() if k in direct)

    def describe(self, digits: int = 6) -> str:
        src = ", ".join(f"{k}={v}" for k, v in self.source.items())
        lines = [
            f"{self.pair} ({src})",
            f"  {self.first.family}: (K,F,Z,S) = {self.first.tuple()}  R = {self.first.rate}",
            f"  {self.second.family}: (K,F,Z,S) = {self.second.tuple()}  R = {self.second.rate}",
            f"  F ratio = {self.ratio_F} ~ {render_decimal(self.ratio_F, digits)}",
            f"  R ratio = {self.ratio_R} ~ {render_decimal(self.ratio_R, digits)}",
        ]
        if self.ratio_K != 1 or self.ratio_M != 1:
            lines.append(f"  K ratio = {self.ratio_K} ~ {render_decimal(self.ratio_K, digits)}")
            lines.append(f"  M/N ratio = {self.ratio_M} ~ {render_decimal(self.ratio_M, digits)}")
        for name, ok in self.checks.items():
            lines.append(f"  [{'ok' if ok else 'FAILS'}] {name}")
        return "\n".join(lines) + "\n"


def _ratios(first: FamilyParams, second: FamilyParams) -> dict[str, Fraction]:
    return {
        "F": Fraction(first.F, second.F),
        "R": first.rate / second.rate,
        "K": Fraction(first.K, second.K),
        "M": first.memory_ratio / second.memory_ratio,
    }


def _mn_for(K: int, memory_ratio: Fraction) -> FamilyParams:
    t = K * memory_ratio
    if t.denominator != 1:
        raise NoMatchingParameters(f"K M/N = {t} is not an integer")
    t = int(t)
    # log2 C(K, t) <= t log2 K; refuse before computing a gigantic binomial
    if min(t, K - t) * K.bit_length() > MAX_PARAMETER_BITS:
        raise OverflowGuard(f"C({K},{t}) exceeds {MAX_PARAMETER_BITS} bits")
    return family_params("MN", k=K, t=t)


def _p_range(k: int, t: int) -> None:
    if not (k >= 3 and 0 < t < k - 1):
        raise ParameterOutOfRange(f"need 0 < t < k-1, got k={k}, t={t}")


def compare_p1_vs_mn(k: int, t: int) -> ComparisonRow:
    _p_range(k, t)
    p1 = family_params("P1", k=k, t=t)
    mn = _mn_for(p1.K, p1.memory_ratio)
    r = _ratios(p1, mn)
    a = comb(k, t)
    closed = {
        "F": Fraction(a, comb(comb(k, t + 1), k - t)),
        "R": Fraction(k, t + 1) - Fraction(k, a) + Fraction(k, (k - t) * a),
    }
    if t == k - 3:
        closed["F_t=k-3"] = Fraction(8 * k - 16, ((k - 1) * k - 4) * ((k - 1) * k - 2))
        closed["R_t=k-3"] = Fraction(k, k - 2) - Fraction(4, (k - 1) * (k - 2))
    row = ComparisonRow(
        "P1 vs MN", {"k": k, "t": t}, p1, mn, r["F"], r["R"], closed_form=closed
    )
    row.checks["same K and M/N"] = r["K"] == 1 and r["M"] == 1
    row.checks["closed forms agree"] = all(
        v == (r["F"] if name.startswith("F") else r["R"]) for name, v in closed.items()
    )
    row.checks["F ratio <= (k/C(k,t+1))^(k-t)"] = r["F"] <= Fraction(k, comb(k, t + 1)) ** (k - t)
    return row


def compare_p2_vs_mn(k: int, t: int) -> ComparisonRow:
    _p_range(k, t)
    p2 = family_params("P2", k=k, t=t)
    mn = _mn_for(p2.K, p2.memory_ratio)
    r = _ratios(p2, mn)
    closed = {
        "F": Fraction(k, comb(comb(k, t), comb(k - 1, t - 1))),
        "R": Fraction(comb(k - 1, t - 1) + 1, t + 1),
    }
    row = ComparisonRow(
        "P2 vs MN", {"k": k, "t": t}, p2, mn, r["F"], r["R"], closed_form=closed
    )
    row.checks["same K and M/N"] = r["K"] == 1 and r["M"] == 1
    row.checks["closed forms agree"] = closed["F"] == r["F"] and closed["R"] == r["R"]
    row.checks["F ratio <= k (t/k)^C(k-1,t-1)"] = (
        r["F"] <= k * Fraction(t, k) ** comb(k - 1, t - 1)
    )
    return row


def compare_p2_vs_grouped(k: int, t: int) -> ComparisonRow:
    """Grouped MN at P2's (K, M/N, R); equal rates force the group size K' = k."""
    if not (k >= 2 and 0 < t < k):
        raise ParameterOutOfRange(f"need 0 < t < k, got k={k}, t={t}")
    K = comb(k, t)
    memory = Fraction(t, k)
    F2, R2 = k, Fraction(comb(k, t + 1), k)
    # grouped rate as a function of group size K':  K (1 - M/N) / (1 + K' M/N)
    group_size = (K * (1 - memory) / R2 - 1) / memory
    if group_size.denominator != 1:
        raise NoMatchingParameters(f"equal rates need K' = {group_size}, not an integer")
    Kp = int(group_size)
    m = Fraction(K, Kp)
    Fp = comb(Kp, int(Kp * memory))
    # S' = m C(K', K'M/N + 1) is a Narayana number, hence an integer
    Sp = m * comb(Kp, int(Kp * memory) + 1)
    p2 = FamilyParams("P2", K, F2, t, comb(k, t + 1), {"k": k, "t": t})
    grouped = FamilyParams(
        "Grouped", K, Fp, comb(Kp - 1, int(Kp * memory) - 1), int(Sp),
        {"k": Kp, "t": int(Kp * memory), "m": m},
    )
    r = _ratios(p2, grouped)
    row = ComparisonRow(
        "P2 vs grouped MN", {"k": k, "t": t}, p2, grouped, r["F"], r["R"],
        closed_form={"F": Fraction(k, K)},
    )
    row.checks["K' = k"] = Kp == k
    row.checks["S' integral"] = Sp.denominator == 1
    row.checks["equal rates"] = r["R"] == 1
    row.checks["same M/N"] = r["M"] == 1
    row.checks["closed forms agree"] = r["F"] == Fraction(k, K)
    return row


def compare_p1_vs_yan(k: int, t: int) -> ComparisonRow:
    _p_range(k, t)
    a = comb(k, t)
    if a % (t + 1):
        raise NoMatchingParameters(
            f"q = C({k},{t})/({t}+1) = {Fraction(a, t + 1)} is not an integer"
        )
    q, m = a // (t + 1), k - t - 1
    if q < 2:
        raise NoMatchingParameters(f"q = {q} < 2")
    p1 = family_params("P1", k=k, t=t)
    yan = family_params("Yan", q=q, m=m)
    r = _ratios(p1, yan)
    closed = {
        "F": Fraction(a, q**m * (q - 1)),
        "R": Fraction(k, t + 1) - Fraction(k, a),
    }
    row = ComparisonRow(
        "P1 vs Yan", {"k": k, "t": t, "m": m, "q": q}, p1, yan, r["F"], r["R"],
        closed_form=closed,
    )
    row.checks["same K and M/N"] = r["K"] == 1 and r["M"] == 1
    row.checks["closed forms agree"] = closed["F"] == r["F"] and closed["R"] == r["R"]
    row.checks["R ratio = (q-1)k/C(k,t)"] = r["R"] == Fraction((q - 1) * k, a)
    return row


def dominates(row: ComparisonRow) -> bool:
    """K1 >= K4, M1/N1 <= M4/N4, F1 < F4 and R1 < R4."""
    return row.ratio_K >= 1 and row.ratio_M <= 1 and row.ratio_F < 1 and row.ratio_R < 1


def compare_p1_vs_shang(k: int, t: int, m: int, q: int, l: int) -> ComparisonRow:
    _p_range(k, t)
    p1 = family_params("P1", k=k, t=t)
    shang = family_params("Shang", q=q, m=m, l=l)
    r = _ratios(p1, shang)
    a = comb(k, t)
    closed = {
        "F": Fraction(a, q**m * (q - 1) ** l),
        "R": Fraction(k * (q - 1) ** l, a),
    }
    row = ComparisonRow(
        "P1 vs Shang", {"k": k, "t": t, "m": m, "q": q, "l": l}, p1, shang,
        r["F"], r["R"], r["K"], r["M"], closed_form=closed,
    )
    row.checks["closed forms agree"] = closed["F"] == r["F"] and closed["R"] == r["R"]
    row.checks["P1 dominates"] = dominates(row)
    return row


def _int_root_ceil(x: Fraction, l: int) -> int:
    q = max(1, int(float(x) ** (1 / l)) - 1)
    while Fraction(q**l) < x:
        q += 1
    while q > 1 and Fraction((q - 1) ** l) >= x:
        q -= 1
    return q


def dominating_q_range(k: int, t: int, m: int, l: int) -> range:
    """q values meeting the K and M/N conditions: C(k,t)/(t+1) <= q^l <= C(k,t+1)/C(m,l)."""
    lo = _int_root_ceil(Fraction(comb(k, t), t + 1), l)
    hi_bound = Fraction(comb(k, t + 1), comb(m, l))
    hi = _int_root_ceil(hi_bound, l)
    if hi**l > hi_bound:
        hi -= 1
    return range(max(lo, 2), hi + 1)


def search_dominating_params(
    k_values: Iterable[int],
    m_values: Iterable[int],
    q_values: Iterable[int],
    l_values: Optional[Iterable[int]] = None,
    t_values: Optional[Iterable[int]] = None,
) -> list[ComparisonRow]:
    """All (k, t, m, q, l) in the given ranges where P1 beats the Shang PDA on every axis.

    ``l_values=None`` means every 1 <= l <= m; ``t_values=None`` every 0 < t < k-1.
    """
    m_values, q_values = list(m_values), list(q_values)
    l_list = None if l_values is None else list(l_values)
    t_list = None if t_values is None else list(t_values)
    out = []
    for k in sorted(k_values):
        ts = range(1, k - 1) if t_list is None else [t for t in t_list if 0 < t < k - 1]
        for t in ts:
            a, b = comb(k, t), comb(k, t + 1)
            for m in sorted(m_values):
                ls = range(1, m + 1) if l_list is None else [l for l in l_list if 1 <= l <= m]
                for q in sorted(q_values):
                    if q < 2:
                        continue
                    for l in ls:
                        if (
                            b >= comb(m, l) * q**l
                            and (t + 1) * q**l >= a
                            and a < q**m * (q - 1) ** l
                            and k * (q - 1) ** l < a
                        ):
                            out.append(compare_p1_vs_shang(k, t, m, q, l))
    return out


# -- rendering --------------------------------------------------------------


def render_decimal(x: Fraction, digits: int, sci: bool = False) -> str:
    """Round half-even to ``digits`` decimals, or ``digits`` significant figures if sci."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 80
        d = Decimal(x.numerator) / Decimal(x.denominator)
        if sci:
            if d == 0:
                return "0"
            exp = d.adjusted()
            mant = (d.scaleb(-exp)).quantize(
                Decimal(1).scaleb(-(digits - 1)), rounding=ROUND_HALF_EVEN
            )
            if abs(mant) >= 10:
                mant, exp = mant / 10, exp + 1
            return f"{mant}e{exp}"
        return format(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN), "f")


def _printed_format(printed: str) -> tuple[bool, int]:
    if "e" in printed:
        mant = printed.split("e")[0]
        digits = len(mant.replace("-", "").replace(".", "").lstrip("0")) or 1
        return True, digits
    return False, len(printed.split(".")[1]) if "." in printed else 0


def matches_printed(x: Fraction, printed: str) -> bool:
    """Whether x rounds (half-even) to the published string at its own precision."""
    sci, digits = _printed_format(printed)
    ours = render_decimal(x, digits, sci)
    if sci:
        m1, e1 = ours.split("e")
        m2, e2 = printed.split("e")
        return Decimal(m1) == Decimal(m2) and int(e1) == int(e2)
    return Decimal(ours) == Decimal(printed)


# -- published tables -------------------------------------------------------

# t = k - 3, P1 against MN: k -> (K, F1/F_MN, R1/R_MN)
PUBLISHED_TK3: dict[int, tuple[str, str, str]] = {
    5: ("10", "0.194", "1.333"),
    6: ("20", "0.088", "1.3"),
    7: ("35", "0.047", "1.267"),
    8: ("56", "0.028", "1.238"),
    9: ("84", "0.018", "1.214"),
    10: ("120", "0.013", "1.194"),
    11: ("165", "0.009", "1.178"),
    12: ("220", "0.007", "1.164"),
    13: ("286", "0.005", "1.152"),
    14: ("364", "0.004", "1.141"),
    15: ("455", "0.003", "1.132"),
}

# t = 2, P2 against MN: k -> (F2/F_MN, R2/R_MN)
PUBLISHED_P2T2: dict[int, tuple[str, str]] = {
    4: ("0.2000", "1.3"),
    5: ("2.3810e-2", "1.7"),
    6: ("1.9980e-3", "2.0"),
    7: ("1.2900e-4", "2.3"),
    8: ("6.7565e-6", "2.7"),
    9: ("2.9742e-7", "3.0"),
    10: ("1.1285e-8", "3.3"),
}

# P1 against Yan: (k, t, m, q) -> (F1/F3, R1/R3)
PUBLISHED_YAN: dict[tuple[int, int, int, int], tuple[str, str]] = {
    (6, 2, 3, 5): ("0.03", "1.6"),
    (6, 3, 2, 5): ("0.2", "1.2"),
    (7, 2, 4, 7): ("0.001457", "2"),
    (7, 4, 2, 7): ("0.119048", "1.2"),
    (8, 3, 4, 14): ("0.000112", "1.85714"),
    (8, 4, 3, 14): ("0.001962", "1.48571"),
    (9, 2, 6, 12): ("0.000001", "2.75"),
    (9, 6, 2, 12): ("0.05303", "1.17857"),
    (10, 2, 7, 15): ("0.00000002", "3.11111"),
}

# P1 against Shang with l = m - 1: (k, t, m, q) -> (K1/K4, M ratio, F1/F4, R1/R4)
PUBLISHED_SHANG: dict[tuple[int, int, int, int], tuple[str, str, str, str]] = {
    (7, 3, 3, 3): ("1.2963", "0.9964", "0.6481", "0.8000"),
    (25, 22, 3, 10): ("7.6667", "1", "0.2556", "0.8804"),
    (9, 4, 4, 3): ("1.1667", "0.9973", "0.7778", "0.5714"),
    (13, 7, 4, 6): ("1.9861", "1", "0.2648", "0.9470"),
    (14, 9, 4, 6): ("2.3171", "0.9996", "0.3090", "0.8741"),
    (17, 12, 4, 8): ("3.0215", "0.9999", "0.2158", "0.9423"),
    (20, 15, 4, 10): ("3.8760", "1", "0.1723", "0.9404"),
    (11, 5, 5, 3): ("1.1407", "0.9994", "0.9506", "0.3810"),
    (13, 5, 5, 4): ("1.0055", "0.9992", "0.4189", "0.8182"),
    (13, 6, 5, 4): ("1.3406", "0.9998", "0.5586", "0.6136"),
    (13, 7, 5, 4): ("1.3406", "0.9992", "0.5586", "0.6136"),
    (16, 9, 5, 6): ("1.7654", "0.9999", "0.2942", "0.8741"),
    (18, 10, 5, 8): ("2.1366", "1", "0.1908", "0.9877"),
    (19, 12, 5, 8): ("2.4604", "1", "0.2197", "0.9054"),
    (23, 17, 5, 9): ("3.0772", "1", "0.2137", "0.9332"),
    (25, 19, 5, 10): ("3.5420", "1", "0.1968", "0.9262"),
    (15, 7, 6, 4): ("1.0474", "0.9997", "0.5237", "0.5664"),
    (17, 7, 6, 5): ("1.0372", "0.9999", "0.3112", "0.8951"),
    (17, 8, 6, 5): ("1.2965", "0.9999", "0.3890", "0.7161"),
    (17, 9, 6, 5): ("1.2965", "0.9999", "0.3890", "0.7161"),
    (19, 11, 6, 6): ("1.6200", "1", "0.3240", "0.7856"),
    (20, 9, 6, 7): ("1.6656", "1", "0.2379", "0.9259"),
    (20, 10, 6, 7): ("1.8321", "1", "0.2617", "0.8418"),
    (20, 11, 6, 7): ("1.6656", "1", "0.2379", "0.9259"),
    (21, 13, 6, 7): ("2.0179", "1", "0.2883", "0.8025"),
    (21, 14, 6, 6): ("2.4923", "1", "0.4985", "0.5644"),
    (23, 14, 6, 9): ("2.3065", "1", "0.1922", "0.9223"),
    (23, 15, 6, 8): ("2.4939", "1", "0.2672", "0.7884"),
    (23, 16, 6, 7): ("2.4311", "1", "0.3473", "0.7295"),
    (26, 18, 6, 10): ("2.6038", "1", "0.1736", "0.9827"),
    (28, 21, 6, 9): ("3.3420", "1", "0.2785", "0.7749"),
}


@dataclass(frozen=True)
class Cell:
    value: Fraction
    published: Optional[str] = None
    digits: Optional[int] = None

    @property
    def matches(self) -> Optional[bool]:
        if self.published is None:
            return None
        return matches_printed(self.value, self.published)

    def render(self, digits: Optional[int] = None) -> str:
        if digits is None and self.published is not None:
            sci, digits = _printed_format(self.published)
        else:
            sci = False
            digits = self.digits if digits is None else digits
            if digits is None:
                digits = 4
        text = render_decimal(self.value, digits, sci)
        if self.published is not None and not self.matches:
            text += f" [published {self.published}]"
        return text


@dataclass
class ComparisonTable:
    name: str
    title: str
    key_columns: tuple[str, ...]
    value_columns: tuple[str, ...]
    rows: list[tuple[tuple, dict[str, Cell]]]

    def mismatches(self, column: Optional[str] = None) -> list[tuple[tuple, str]]:
        out = []
        for key, cells in self.rows:
            for name, cell in cells.items():
                if column not in (None, name):
                    continue
                if cell.matches is False:
                    out.append((key, name))
        return out

    def _records(self, digits: Optional[int]) -> list[list[str]]:
        return [
            [str(x) for x in key] + [cells[c].render(digits) for c in self.value_columns]
            for key, cells in self.rows
        ]

    def render(self, fmt: str = "text", digits: Optional[int] = None) -> str:
        header = list(self.key_columns) + list(self.value_columns)
        records = self._records(digits)
        if fmt == "csv":
            lines = [",".join(header)]
            lines += [",".join(f'"{c}"' if " " in c else c for c in r) for r in records]
            return "\n".join(lines) + "\n"
        if fmt == "md":
            lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
            lines += ["| " + " | ".join(r) + " |" for r in records]
            return "\n".join(lines) + "\n"
        if fmt != "text":
            raise ValueError(f"unknown format {fmt!r}")
        widths = [max(len(h), *(len(r[i]) for r in records)) for i, h in enumerate(header)]
        lines = [self.title, "  ".join(h.rjust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in records]
        bad = self.mismatches()
        if bad:
            lines.append(
                f"{len(bad)} cell(s) differ from the published table; "
                "formula values shown, published values in brackets"
            )
        return "\n".join(lines) + "\n"


def _table_tk3() -> ComparisonTable:
    rows = []
    for k, (k_pub, f_pub, r_pub) in PUBLISHED_TK3.items():
        row = compare_p1_vs_mn(k, k - 3)
        rows.append(((k,), {
            "K": Cell(Fraction(row.first.K), k_pub),
            "F/F_MN": Cell(row.ratio_F, f_pub),
            "R/R_MN": Cell(row.ratio_R, r_pub),
        }))
    return ComparisonTable(
        "tk3", "P1 vs MN at t = k - 3", ("k",), ("K", "F/F_MN", "R/R_MN"), rows
    )


def _table_p2t2() -> ComparisonTable:
    rows = []
    for k, (f_pub, r_pub) in PUBLISHED_P2T2.items():
        row = compare_p2_vs_mn(k, 2)
        rows.append(((k,), {
            "F2/F_MN": Cell(row.ratio_F, f_pub),
            "R2/R_MN": Cell(row.ratio_R, r_pub),
        }))
    return ComparisonTable("p2t2", "P2 vs MN at t = 2", ("k",), ("F2/F_MN", "R2/R_MN"), rows)


def _table_yan() -> ComparisonTable:
    rows = []
    for (k, t, m, q), (f_pub, r_pub) in PUBLISHED_YAN.items():
        row = compare_p1_vs_yan(k, t)
        if (row.source["m"], row.source["q"]) != (m, q):
            raise PdaError(f"published row {(k, t, m, q)} does not match the Yan matching rule")
        rows.append(((k, t, m, q), {
            "F1/F3": Cell(row.ratio_F, f_pub),
            "R1/R3": Cell(row.ratio_R, r_pub),
        }))
    return ComparisonTable("yan", "P1 vs Yan (same K and M/N)", ("k", "t", "m", "q"), ("F1/F3", "R1/R3"), rows)


def _table_shang() -> ComparisonTable:
    rows = []
    for (k, t, m, q), pubs in PUBLISHED_SHANG.items():
        row = compare_p1_vs_shang(k, t, m, q, m - 1)
        values = (row.ratio_K, row.ratio_M, row.ratio_F, row.ratio_R)
        names = ("K1/K4", "M1/M4", "F1/F4", "R1/R4")
        rows.append(((k, t, m, q), {n: Cell(v, p) for n, v, p in zip(names, values, pubs)}))
    return ComparisonTable(
        "shang", "P1 vs Shang with l = m - 1", ("k", "t", "m", "q"),
        ("K1/K4", "M1/M4", "F1/F4", "R1/R4"), rows,
    )


TABLES = {
    "tk3": _table_tk3,
    "p2t2": _table_p2t2,
    "yan": _table_yan,
    "shang": _table_shang,
}


def build_table(name: str) -> ComparisonTable:
    try:
        return TABLES[name]()
    except KeyError:
        raise ValueError(f"unknown table {name!r}; choose from {sorted(TABLES)}") from None

"""Machine-checkable Pareto-optimality certificates for the MN, P1 and P2 arrays.

A certificate is a list of exact inequalities evaluated on concrete numbers;
it is evidence for one (k, t), not a proof object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .bounds import (
    bound_first,
    bound_rate_tradeoff,
    bound_rows_for_regular,
    bound_second,
    bound_second_terms,
    frac_ceil,
)
from .constructions import ParameterOutOfRange, variant_params

__all__ = [
    "Inequality",
    "ParetoCertificate",
    "pareto_check_p1",
    "pareto_check_p2",
    "pareto_check_mn",
]

_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
}


@dataclass(frozen=True)
class Inequality:
    label: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return _OPS[self.relation](self.lhs, self.rhs)

    def __str__(self) -> str:
        mark = "ok" if self.holds else "FAILS"
        return f"[{mark}] {self.label}: {self.lhs} {self.relation} {self.rhs}"


@dataclass
class ParetoCertificate:
    family: str
    k: int
    t: int
    params: tuple[int, int, int, int]
    rate: Fraction
    checks: list[Inequality] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return bool(self.checks) and all(c.holds for c in self.checks)

    def add(self, label: str, lhs, relation: str, rhs) -> None:
        self.checks.append(Inequality(label, Fraction(lhs), relation, Fraction(rhs)))

    def to_text(self) -> str:
        K, F, Z, S = self.params
        head = (
            f"{self.family}(k={self.k}, t={self.t}) = (K={K},F={F},Z={Z},S={S}), "
            f"R = {self.rate}: {'verified' if self.holds else 'NOT verified'}"
        )
        return "\n".join([head, *("  " + str(c) for c in self.checks)]) + "\n"


def pareto_check_p1(k: int, t: int) -> ParetoCertificate:
    """Both directions of the P1 optimality argument, replayed numerically.

    Fewer rows: every F' < C(k,t) with integral Z' forces a rate above
    k/C(k,t) through the recursive bound.  Lower rate: for every F' <= C(k,t),
    each candidate S' with S'/F' < k/C(k,t) is excluded by the first bound
    applied to the (0,2,1)-conjugate, a (S', F', C(k,t+1)) PDA with
    F'(k-t) symbol entries.
    """
    if not (k >= 3 and 0 < t < k - 1):
        raise ParameterOutOfRange(f"P1 needs 0 < t < k-1, got k={k}, t={t}")
    K, F1, Z1, S1 = variant_params(k, t, "c")
    target = Fraction(k, F1)
    cert = ParetoCertificate("P1", k, t, (K, F1, Z1, S1), Fraction(S1, F1))
    memory = 1 - Fraction(t + 1, F1)
    cert.add("P1 memory ratio", Fraction(Z1, F1), "==", memory)
    cert.add("P1 rate", Fraction(S1, F1), "==", target)

    for Fp in range(1, F1 + 1):
        Zp = Fp * memory
        if Zp.denominator != 1 or not 0 < Zp < Fp:
            continue
        Zp = int(Zp)
        if Fp < F1:
            b2 = bound_second(K, Fp, Zp)
            chain = k - t - 1 + Fraction(Fp * (t + 1), F1)
            cert.add(f"F'={Fp}, Z'={Zp}: recursive bound >= chain value", b2, ">=", chain)
            cert.add(f"F'={Fp}, Z'={Zp}: rate floor > k/C(k,t)", Fraction(b2, Fp), ">", target)
        n = Fp * (k - t)
        excluded = 0
        candidates = frac_ceil(target * Fp) - 1
        for Sp in range(1, candidates + 1):
            # the conjugate has Sp columns, Fp rows, K symbols and n entries
            if n > Sp * Fp:
                excluded += 1
                continue
            lhs = K * (Sp * Fp + Fp - n)
            if lhs < n * Fp:
                excluded += 1
                continue
            cert.add(
                f"F'={Fp}: S'={Sp} not excluded by the conjugate first bound",
                lhs, "<", n * Fp,
            )
        cert.add(
            f"F'={Fp}: every S' with S'/F' < k/C(k,t) excluded", excluded, "==", candidates
        )
    return cert


def pareto_check_p2(k: int, t: int) -> ParetoCertificate:
    """P2 meets the rate tradeoff bound with equality, and the bound grows as F shrinks."""
    if not (k >= 3 and 0 < t < k - 1):
        raise ParameterOutOfRange(f"P2 needs 0 < t < k-1, got k={k}, t={t}")
    K, F, Z, S = variant_params(k, t, "f")
    cert = ParetoCertificate("P2", k, t, (K, F, Z, S), Fraction(S, F))
    memory = Fraction(t, k)
    cert.add("P2 memory ratio", Fraction(Z, F), "==", memory)
    cert.add("F <= K", F, "<=", K)
    cert.add(
        "rate equals tradeoff bound",
        Fraction(S, F), "==", bound_rate_tradeoff(K, F, memory),
    )
    cert.add("rate equals C(k,t+1)/k", Fraction(S, F), "==", Fraction(comb(k, t + 1), k))
    for Fp in range(1, F):
        Zp = Fp * memory
        if Zp.denominator != 1 or not 0 < Zp < Fp:
            continue
        cert.add(
            f"F'={Fp}: tradeoff bound > R",
            bound_rate_tradeoff(K, Fp, memory), ">", Fraction(S, F),
        )
    return cert


def pareto_check_mn(k: int, t: int) -> ParetoCertificate:
    """MN meets the first bound with equality and the regular-PDA row bound."""
    K, F, Z, S = variant_params(k, t, "a") if t < k - 1 else (
        k, comb(k, t), comb(k - 1, t - 1), comb(k, t + 1)
    )
    cert = ParetoCertificate("MN", k, t, (K, F, Z, S), Fraction(S, F))
    cert.add("S equals the first bound", S, "==", bound_first(K, F, Z))
    cert.add("regularity KZ/F + 1 = t + 1", Fraction(K * Z, F) + 1, "==", t + 1)
    cert.add("F meets the row bound C(K, KZ/F)", F, ">=", bound_rows_for_regular(K, F, Z))
    cert.add("F equals the row bound", F, "==", bound_rows_for_regular(K, F, Z))
    cert.add("S >= recursive bound", S, ">=", sum(bound_second_terms(K, F, Z)))
    return cert

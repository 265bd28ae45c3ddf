"""Run a PDA as an F-division coded caching scheme.

User k caches packet j of every file wherever column k has a star in row j.
In slot s the server broadcasts the XOR of W[d_k][j] over all cells (j, k)
holding symbol s.  Each user strips the cached terms from the slots that
carry its missing packets.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, product
from typing import Iterable, Optional, Sequence

from .pda import Pda, PdaError

__all__ = [
    "DimensionMismatch",
    "DecodeFailure",
    "SweepTooLarge",
    "FileLibrary",
    "CacheContents",
    "SimulationTranscript",
    "SweepSummary",
    "check_demand",
    "place",
    "deliver",
    "decode",
    "simulate",
    "demand_sweep",
    "DEFAULT_MAX_DEMANDS",
]

DEFAULT_MAX_DEMANDS = 4096


class DimensionMismatch(PdaError):
    pass


class DecodeFailure(PdaError):
    def __init__(self, user: int, packet: int, reason: str = ""):
        msg = f"user {user} cannot recover packet {packet}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.user = user
        self.packet = packet


class SweepTooLarge(PdaError):
    pass


def _xor(blocks: Iterable[int]) -> int:
    acc = 0
    for b in blocks:
        acc ^= b
    return acc


@dataclass(frozen=True)
class FileLibrary:
    """N files of F packets, each packet a B-byte block."""

    packets: tuple[tuple[bytes, ...], ...]

    def __post_init__(self):
        if not self.packets or not self.packets[0]:
            raise DimensionMismatch("library needs N >= 1 files and F >= 1 packets")
        F = len(self.packets[0])
        B = len(self.packets[0][0])
        if B < 1:
            raise DimensionMismatch("packets must be at least one byte")
        for f in self.packets:
            if len(f) != F or any(len(w) != B for w in f):
                raise DimensionMismatch("all files need F packets of B bytes")

    @property
    def N(self) -> int:
        return len(self.packets)

    @property
    def F(self) -> int:
        return len(self.packets[0])

    @property
    def B(self) -> int:
        return len(self.packets[0][0])

    def file(self, i: int) -> bytes:
        return b"".join(self.packets[i])

    def as_ints(self) -> list[list[int]]:
        return [[int.from_bytes(w, "big") for w in f] for f in self.packets]

    @classmethod
    def random(cls, N: int, F: int, block_size: int = 64, seed: int = 0) -> "FileLibrary":
        if N < 1 or F < 1 or block_size < 1:
            raise DimensionMismatch("N, F and block size must be positive")
        rng = random.Random(seed)
        return cls(
            tuple(
                tuple(rng.randbytes(block_size) for _ in range(F)) for _ in range(N)
            )
        )


@dataclass(frozen=True)
class CacheContents:
    """Per-user cached packets, keyed by (file, packet)."""

    contents: tuple[dict[tuple[int, int], bytes], ...]

    def indices(self, user: int) -> set[tuple[int, int]]:
        return set(self.contents[user])

    def size(self, user: int) -> int:
        return len(self.contents[user])

    def __len__(self) -> int:
        return len(self.contents)


@dataclass(frozen=True)
class SimulationTranscript:
    demand: tuple[int, ...]
    signals: tuple[bytes, ...]
    contributors: tuple[tuple[tuple[int, int], ...], ...]  # (packet j, user k) per slot
    F: int

    @property
    def delivered_packet_count(self) -> int:
        return len(self.signals)

    @property
    def rate_achieved(self) -> Fraction:
        return Fraction(len(self.signals), self.F)

    def symbolic(self) -> list[str]:
        """Slot signals as 'W_{file,packet} ⊕ ...', terms ordered by user."""
        out = []
        for slot in self.contributors:
            terms = sorted(slot, key=lambda jk: jk[1])
            out.append(" ⊕ ".join(f"W_{{{self.demand[k]},{j}}}" for j, k in terms))
        return out

    def to_table(self, payload: bool = False) -> str:
        lines = ["slot  signal"]
        for s, text in enumerate(self.symbolic()):
            if payload:
                text += "  = " + self.signals[s].hex()
            lines.append(f"{s:>4}  {text}")
        return "\n".join(lines) + "\n"


def check_demand(demand: Sequence[int], K: int, N: int) -> tuple[int, ...]:
    d = tuple(demand)
    if len(d) != K:
        raise DimensionMismatch(f"demand has {len(d)} entries for {K} users")
    for x in d:
        if not 0 <= x < N:
            raise DimensionMismatch(f"demand {x} outside [0, {N})")
    return d


def _check_dims(p: Pda, lib: FileLibrary) -> None:
    if lib.F != p.num_rows:
        raise DimensionMismatch(
            f"library has {lib.F} packets per file but the PDA has {p.num_rows} rows"
        )


def place(p: Pda, lib: FileLibrary) -> CacheContents:
    _check_dims(p, lib)
    caches = []
    for k in range(p.num_cols):
        rows = [j for j in range(p.num_rows) if p.rows[j][k] is None]
        caches.append(
            {(i, j): lib.packets[i][j] for i in range(lib.N) for j in rows}
        )
    return CacheContents(tuple(caches))


def _slots(p: Pda) -> list[list[tuple[int, int]]]:
    S = max(p.symbols(), default=-1) + 1
    slots: list[list[tuple[int, int]]] = [[] for _ in range(S)]
    for j, k, s in p.cells():
        if s is not None:
            slots[s].append((j, k))
    return slots


def deliver(p: Pda, lib: FileLibrary, demand: Sequence[int]) -> SimulationTranscript:
    _check_dims(p, lib)
    d = check_demand(demand, p.num_cols, lib.N)
    B = lib.B
    signals = []
    contributors = []
    for slot in _slots(p):
        value = _xor(int.from_bytes(lib.packets[d[k]][j], "big") for j, k in slot)
        signals.append(value.to_bytes(B, "big"))
        contributors.append(tuple(slot))
    return SimulationTranscript(d, tuple(signals), tuple(contributors), p.num_rows)


def decode(
    p: Pda,
    caches: CacheContents,
    transcript: SimulationTranscript,
    demand: Optional[Sequence[int]] = None,
) -> tuple[bytes, ...]:
    """Each user's reassembled file; raises DecodeFailure on the first gap."""
    d = transcript.demand if demand is None else tuple(demand)
    slot_of: dict[tuple[int, int], int] = {}
    for s, slot in enumerate(transcript.contributors):
        for jk in slot:
            slot_of[jk] = s
    files = []
    for k in range(p.num_cols):
        cache = caches.contents[k]
        blocks = []
        for j in range(p.num_rows):
            if (d[k], j) in cache:
                blocks.append(cache[d[k], j])
                continue
            s = slot_of.get((j, k))
            if s is None:
                raise DecodeFailure(k, j, "packet neither cached nor broadcast")
            signal = transcript.signals[s]
            value = int.from_bytes(signal, "big")
            for j2, k2 in transcript.contributors[s]:
                if (j2, k2) == (j, k):
                    continue
                key = (d[k2], j2)
                if key not in cache:
                    raise DecodeFailure(
                        k, j, f"slot {s} also carries uncached W_{{{key[0]},{key[1]}}}"
                    )
                value ^= int.from_bytes(cache[key], "big")
            blocks.append(value.to_bytes(len(signal), "big"))
        files.append(b"".join(blocks))
    return tuple(files)


def simulate(p: Pda, lib: FileLibrary, demand: Sequence[int]) -> tuple[SimulationTranscript, tuple[bytes, ...]]:
    """Place, deliver and decode; checks every recovered file byte for byte."""
    caches = place(p, lib)
    transcript = deliver(p, lib, demand)
    files = decode(p, caches, transcript)
    for k, got in enumerate(files):
        if got != lib.file(transcript.demand[k]):
            bad = next(
                j for j in range(lib.F)
                if got[j * lib.B:(j + 1) * lib.B] != lib.packets[transcript.demand[k]][j]
            )
            raise DecodeFailure(k, bad, "recovered bytes differ from the file")
    return transcript, files


# -- demand sweeps ----------------------------------------------------------


@dataclass(frozen=True)
class SweepSummary:
    mode: str
    demands_checked: int
    failures: tuple[tuple[tuple[int, ...], int, int], ...]  # (demand, user, packet)
    slots: int
    F: int

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def rate(self) -> Fraction:
        return Fraction(self.slots, self.F)


class _Scheme:
    """Precomputed slot structure for fast repeated runs over integer packets."""

    def __init__(self, p: Pda, lib: FileLibrary):
        _check_dims(p, lib)
        self.F, self.K = p.num_rows, p.num_cols
        self.words = lib.as_ints()
        self.slots = _slots(p)
        self.star = [[p.rows[j][k] is None for k in range(self.K)] for j in range(self.F)]
        self.slot_of = {jk: s for s, slot in enumerate(self.slots) for jk in slot}

    def run(self, d: tuple[int, ...]) -> Optional[tuple[int, int]]:
        """None on success, else the first (user, packet) that fails."""
        words, star = self.words, self.star
        signals = [_xor(words[d[k]][j] for j, k in slot) for slot in self.slots]
        for k in range(self.K):
            want = words[d[k]]
            for j in range(self.F):
                if star[j][k]:
                    continue
                s = self.slot_of.get((j, k))
                if s is None:
                    return k, j
                value = signals[s]
                for j2, k2 in self.slots[s]:
                    if (j2, k2) == (j, k):
                        continue
                    if not star[j2][k]:
                        return k, j
                    value ^= words[d[k2]][j2]
                if value != want[j]:
                    return k, j
        return None


_worker_scheme: Optional[_Scheme] = None


def _init_worker(p: Pda, lib: FileLibrary) -> None:
    global _worker_scheme
    _worker_scheme = _Scheme(p, lib)


def _run_chunk(demands: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], int, int]]:
    out = []
    for d in demands:
        bad = _worker_scheme.run(d)
        if bad is not None:
            out.append((d, *bad))
    return out


def _chunks(it: Iterable, size: int):
    it = iter(it)
    while chunk := list(islice(it, size)):
        yield chunk


def demand_sweep(
    p: Pda,
    n_files: int,
    *,
    sampled: Optional[int] = None,
    seed: int = 0,
    block_size: int = 64,
    max_demands: int = DEFAULT_MAX_DEMANDS,
    workers: int = 1,
) -> SweepSummary:
    """Run the scheme over every demand vector (or ``sampled`` random ones).

    The file library is drawn once from ``seed``; sampled demands use the
    same seed.  Exhaustive mode refuses when N^K exceeds ``max_demands``.
    """
    K, F = p.num_cols, p.num_rows
    lib = FileLibrary.random(n_files, F, block_size, seed)
    if sampled is None:
        total = n_files**K
        if total > max_demands:
            raise SweepTooLarge(
                f"exhaustive sweep needs N^K = {n_files}^{K} = {total} demands "
                f"(limit {max_demands})"
            )
        demands: Iterable[tuple[int, ...]] = product(range(n_files), repeat=K)
        mode, count = "exhaustive", total
    else:
        rng = random.Random(seed)
        demands = [
            tuple(rng.randrange(n_files) for _ in range(K)) for _ in range(sampled)
        ]
        mode, count = f"sampled:{sampled}", sampled

    if workers > 1 and count > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(p, lib)) as ex:
            parts = ex.map(_run_chunk, _chunks(demands, 2048))
            failures = [f for part in parts for f in part]
    else:
        scheme = _Scheme(p, lib)
        failures = []
        for d in demands:
            bad = scheme.run(d)
            if bad is not None:
                failures.append((d, *bad))
    return SweepSummary(mode, count, tuple(failures), len(_slots(p)), F)

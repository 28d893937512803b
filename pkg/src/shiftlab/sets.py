"""Exact finite-horizon combinatorics of subsets of the naturals.

All quantities here are finite analogues of asymptotic densities: the best
(worst) count of a set inside a sliding window of length s replaces the
limsup (liminf) window count, and prefix ratios on the back half of the
horizon stand in for asymptotic frequency.  Gap statistics, difference sets,
shifted self-intersections, arithmetic progressions and dilation preimages
are computed exactly with integer arithmetic.

Every operation is a pure function of immutable inputs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

import numpy as np

ESTIMATOR_NOTES = (
    "window counts are exact maxima/minima over all length-s windows inside the horizon"
    " (finite stand-ins for limsup/liminf window counts)",
    "prefix ratios are sampled on the back half [N/2, N] of the horizon",
    "density verdicts use a caller-chosen (delta, s) window proxy; defaults are documented"
    " per operation",
)


def _as_members(values: Iterable[int]) -> tuple[int, ...]:
    members = tuple(sorted(set(int(v) for v in values)))
    if members and members[0] < 0:
        raise ValueError(f"members must be non-negative, got {members[0]}")
    return members


@dataclass(frozen=True)
class FiniteSubset:
    """A finite set of non-negative integers observed up to a horizon.

    members are strictly increasing and bounded by the horizon.  origin
    records the index convention of the source (0 for orbit times, 1 for
    weight indices) and is echoed into reports.
    """

    members: tuple[int, ...]
    horizon: int
    origin: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if self.origin not in (0, 1):
            raise ValueError("origin must be 0 or 1")
        ms = self.members
        for i in range(1, len(ms)):
            if ms[i] <= ms[i - 1]:
                raise ValueError("members must be strictly increasing")
        if ms:
            if ms[0] < 0:
                raise ValueError("members must be non-negative")
            if ms[-1] > self.horizon:
                raise ValueError(f"member {ms[-1]} exceeds horizon {self.horizon}")

    @classmethod
    def from_iterable(cls, values: Iterable[int], horizon: int, origin: int = 0) -> "FiniteSubset":
        return cls(_as_members(values), horizon, origin)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, n: object) -> bool:
        i = bisect.bisect_left(self.members, n)
        return i < len(self.members) and self.members[i] == n

    @cached_property
    def _cum(self) -> np.ndarray:
        """cum[i] = |A ∩ [0, i]| for i in [0, horizon]."""
        ind = np.zeros(self.horizon + 1, dtype=np.int64)
        if self.members:
            ind[np.fromiter(self.members, dtype=np.int64)] = 1
        return np.cumsum(ind)

    @cached_property
    def _mask(self) -> int:
        """Bit i set iff i is a member; supports exact shift/AND set algebra."""
        buf = bytearray((self.horizon >> 3) + 1)
        for a in self.members:
            buf[a >> 3] |= 1 << (a & 7)
        return int.from_bytes(bytes(buf), "little")

    def count_in(self, lo: int, hi: int) -> int:
        """|A ∩ [lo, hi]| with 0 <= lo; hi may exceed the horizon."""
        if hi < lo:
            return 0
        i = bisect.bisect_left(self.members, lo)
        j = bisect.bisect_right(self.members, hi)
        return j - i


def _members_from_mask(mask: int, horizon: int) -> tuple[int, ...]:
    if mask == 0:
        return ()
    raw = mask.to_bytes((mask.bit_length() + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    idx = np.nonzero(bits)[0]
    idx = idx[idx <= horizon]
    return tuple(int(i) for i in idx)


def window_counts(A: FiniteSubset, s: int) -> np.ndarray:
    """Counts |A ∩ [k+1, k+s]| for every k with 0 <= k <= horizon − s."""
    if s < 1:
        raise ValueError("window size must be positive")
    if s > A.horizon:
        raise ValueError(f"window size {s} exceeds horizon {A.horizon}")
    cum = A._cum
    return cum[s:] - cum[: A.horizon - s + 1]


def window_max_count(A: FiniteSubset, s: int) -> int:
    """Best window count: the finite analogue of the limsup window count."""
    return int(window_counts(A, s).max())


def window_min_count(A: FiniteSubset, s: int, lo: Optional[int] = None, hi: Optional[int] = None) -> int:
    """Worst window count over windows [k+1, k+s] ⊆ [lo, hi] (defaults: whole horizon).

    The optional range restricts the sweep to a stabilized region, e.g. past
    an initial transient of the set under study.
    """
    counts = window_counts(A, s)
    k_lo = 0 if lo is None else max(0, lo - 1)
    k_hi = A.horizon - s if hi is None else min(A.horizon - s, hi - s)
    if k_hi < k_lo:
        raise ValueError(f"no length-{s} window fits in the requested range")
    return int(counts[k_lo : k_hi + 1].min())


@dataclass(frozen=True)
class DensityReport:
    """Window statistics and back-half prefix ratios of one finite set."""

    horizon: int
    origin: int
    set_size: int
    window_sizes: tuple[int, ...]
    window_max_counts: tuple[int, ...]
    window_min_counts: tuple[int, ...]
    prefix_samples: tuple[tuple[int, int], ...]  # (n, |A ∩ [1, n]|) on [N/2, N]
    prefix_ratio_min: float
    prefix_ratio_max: float
    max_gap: Optional[int]
    semantics: tuple[str, ...] = ESTIMATOR_NOTES

    def window_estimate(self, s: int) -> float:
        """Best window density α̂^s / s."""
        return self.window_max_counts[self.window_sizes.index(s)] / s


def density_report(A: FiniteSubset, window_sizes: Iterable[int]) -> DensityReport:
    """Exact window max/min counts per requested size plus prefix-ratio sweep.

    Rejects any window size exceeding the horizon.  Prefix ratios
    |A ∩ [1, n]|/n are scanned exactly for all n in [ceil(N/2), N]; the
    report stores the exact min/max and a decimated sample for plotting.
    """
    sizes = tuple(int(s) for s in window_sizes)
    maxima = []
    minima = []
    for s in sizes:
        counts = window_counts(A, s)
        maxima.append(int(counts.max()))
        minima.append(int(counts.min()))

    n_lo = max(1, (A.horizon + 1) // 2)
    ns = np.arange(n_lo, A.horizon + 1, dtype=np.int64)
    cum = A._cum
    prefix_counts = cum[ns] - cum[0]
    ratios = prefix_counts / ns
    r_min = float(ratios.min()) if len(ns) else 0.0
    r_max = float(ratios.max()) if len(ns) else 0.0

    if len(ns) > 64:
        pick = np.unique(np.linspace(0, len(ns) - 1, 64).astype(np.int64))
    else:
        pick = np.arange(len(ns))
    samples = tuple((int(ns[i]), int(prefix_counts[i])) for i in pick)

    return DensityReport(
        horizon=A.horizon,
        origin=A.origin,
        set_size=len(A),
        window_sizes=sizes,
        window_max_counts=tuple(maxima),
        window_min_counts=tuple(minima),
        prefix_samples=samples,
        prefix_ratio_min=r_min,
        prefix_ratio_max=r_max,
        max_gap=syndetic_gap(A),
    )


def syndetic_gap(A: FiniteSubset) -> Optional[int]:
    """Largest gap of A within [0, horizon], boundary gaps included.

    Consecutive members contribute their difference; the leading gap is the
    first member itself and the trailing gap is horizon − max(A).  Returns
    None for the empty set (no finite gap statistic exists).
    """
    if not A.members:
        return None
    ms = A.members
    best = max(ms[0], A.horizon - ms[-1])
    for i in range(1, len(ms)):
        d = ms[i] - ms[i - 1]
        if d > best:
            best = d
    return best


def complement_runs(A: FiniteSubset, lo: Optional[int] = None, hi: Optional[int] = None) -> tuple[tuple[int, int], ...]:
    """Maximal runs (start, length) of consecutive non-members inside [lo, hi]."""
    lo = A.origin if lo is None else lo
    hi = A.horizon if hi is None else hi
    runs = []
    prev = lo - 1
    for a in A.members:
        if a < lo:
            prev = max(prev, min(a, hi))
            continue
        if a > hi:
            break
        if a > prev + 1:
            runs.append((prev + 1, a - prev - 1))
        prev = a
    if hi > prev:
        runs.append((prev + 1, hi - prev))
    return tuple(runs)


def difference_set(A: FiniteSubset, cap: int) -> FiniteSubset:
    """Positive differences {a − a' : a, a' ∈ A, 0 < a − a' <= cap}.

    Computed exactly via bitset shifts: O(|A| · horizon/64) word operations.
    """
    if cap > A.horizon:
        raise ValueError(f"cap {cap} exceeds horizon {A.horizon}")
    mask = A._mask
    acc = 0
    for a in A.members:
        acc |= mask >> a
    acc &= ((1 << (cap + 1)) - 1) & ~1  # keep bits 1..cap
    return FiniteSubset(_members_from_mask(acc, cap), cap, origin=1)


def shift_intersection(A: FiniteSubset, k: int, r: int) -> FiniteSubset:
    """{a : a, a+k, ..., a+rk ∈ A}, observed up to horizon − rk."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be >= 1")
    if r * k > A.horizon:
        raise ValueError(f"r*k = {r * k} exceeds horizon {A.horizon}")
    acc = A._mask
    for j in range(1, r + 1):
        acc &= A._mask >> (j * k)
    new_horizon = A.horizon - r * k
    acc &= (1 << (new_horizon + 1)) - 1
    return FiniteSubset(_members_from_mask(acc, new_horizon), new_horizon, A.origin)


@dataclass(frozen=True)
class ApResult:
    start: int
    step: int
    length: int


def longest_ap(A: FiniteSubset, max_len: int) -> ApResult:
    """A maximum-length arithmetic progression inside A, capped at max_len.

    Ties break toward the smallest step, then the smallest start.  Sets with
    fewer than 3 members return (first member or 0, step 0, length |A|).
    """
    if max_len < 3:
        raise ValueError("max_len must be >= 3")
    ms = A.members
    if len(ms) < 3:
        return ApResult(ms[0] if ms else 0, 0, len(ms))

    members = set(ms)
    span = ms[-1] - ms[0]
    best = ApResult(ms[0], 0, 1)
    for step in range(1, span + 1):
        # any strictly longer progression needs span >= best.length * step
        if best.length * step > span:
            break
        for a in ms:
            if a - step in members:
                continue  # not the head of a run for this step
            length = 1
            b = a + step
            while length < max_len and b in members:
                length += 1
                b += step
            if length > best.length:
                best = ApResult(a, step, length)
                if length == max_len:
                    break
        if best.length == max_len:
            break
    return best


def dilate_preimage(A: FiniteSubset, l: int) -> FiniteSubset:
    """{n : l·n ∈ A}, observed up to floor(horizon / l)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    new_horizon = A.horizon // l
    members = tuple(a // l for a in A.members if a % l == 0)
    return FiniteSubset(members, new_horizon, A.origin)


# --- decidable family proxies ------------------------------------------------

@dataclass(frozen=True)
class Cofinite:
    """Holds iff every point of [start, horizon] is a member."""

    start: int


@dataclass(frozen=True)
class SyndeticGap:
    """Holds iff the largest gap (boundaries included) is at most gap."""

    gap: int


@dataclass(frozen=True)
class BanachLower:
    """Holds iff every length-window count inside [lo, hi] is >= delta · window.

    lo/hi default to the whole horizon; a restricted range confines the sweep
    to a stabilized region of the set.
    """

    delta: float
    window: int
    lo: Optional[int] = None
    hi: Optional[int] = None


FamilyProxy = Union[Cofinite, SyndeticGap, BanachLower]


@dataclass(frozen=True)
class ProxyVerdict:
    holds: bool
    proxy: FamilyProxy
    witness: Optional[dict] = None


def proxy_label(proxy: FamilyProxy) -> str:
    if isinstance(proxy, Cofinite):
        return f"cofinite(start={proxy.start})"
    if isinstance(proxy, SyndeticGap):
        return f"syndetic(gap={proxy.gap})"
    rng = "" if proxy.lo is None and proxy.hi is None else f",range=[{proxy.lo},{proxy.hi}]"
    return f"banach_lower(delta={proxy.delta},window={proxy.window}{rng})"


def family_membership(A: FiniteSubset, proxy: FamilyProxy) -> ProxyVerdict:
    """Decidable membership test against a family proxy, with a witness on failure."""
    if isinstance(proxy, Cofinite):
        if proxy.start > A.horizon:
            raise ValueError(f"cofinite start {proxy.start} exceeds horizon {A.horizon}")
        expected = A.horizon - proxy.start + 1
        if A.count_in(proxy.start, A.horizon) == expected:
            return ProxyVerdict(True, proxy)
        n = proxy.start
        for run_start, _ in complement_runs(A, lo=proxy.start):
            n = run_start
            break
        return ProxyVerdict(False, proxy, {"kind": "missing_point", "n": n})

    if isinstance(proxy, SyndeticGap):
        gap = syndetic_gap(A)
        if gap is None:
            return ProxyVerdict(False, proxy, {"kind": "empty_set"})
        if gap <= proxy.gap:
            return ProxyVerdict(True, proxy)
        return ProxyVerdict(False, proxy, {"kind": "oversized_gap", "gap": gap})

    if isinstance(proxy, BanachLower):
        if proxy.window > A.horizon:
            raise ValueError(f"proxy window {proxy.window} exceeds horizon {A.horizon}")
        counts = window_counts(A, proxy.window)
        k_lo = 0 if proxy.lo is None else max(0, proxy.lo - 1)
        k_hi = A.horizon - proxy.window if proxy.hi is None else min(A.horizon - proxy.window, proxy.hi - proxy.window)
        if k_hi < k_lo:
            raise ValueError("no window fits the requested proxy range")
        section = counts[k_lo : k_hi + 1]
        worst = int(section.min())
        if worst >= proxy.delta * proxy.window:
            return ProxyVerdict(True, proxy)
        k = k_lo + int(section.argmin())
        return ProxyVerdict(False, proxy, {"kind": "deficient_window", "k": k, "count": worst})

    raise TypeError(f"unknown proxy {proxy!r}")


# --- set file format ----------------------------------------------------------

def load_set(path: str) -> FiniteSubset:
    """Read one integer per line; optional leading headers #horizon=N, #origin=K."""
    horizon = None
    origin = 0
    members = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                key = key.strip().lower()
                if key == "horizon":
                    horizon = int(value)
                elif key == "origin":
                    origin = int(value)
                continue
            try:
                members.append(int(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not an integer: {line!r}") from exc
    if horizon is None:
        horizon = members[-1] if members else 0
    return FiniteSubset.from_iterable(members, horizon, origin)


def save_set(A: FiniteSubset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#horizon={A.horizon}\n")
        fh.write(f"#origin={A.origin}\n")
        for a in A.members:
            fh.write(f"{a}\n")

"""Block counting, entropy series and certified entropy intervals.

All logarithms are base 2.  Entropy is ``inf_n log|B_n|/n``, so only levels
known exactly can certify an upper bound; levels that are merely lower bounds
are kept in the series for diagnostics but never enter an interval endpoint.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .blocks import ENUM_CAP, Block, BlockSet
from .errors import BudgetError, InputError
from .language import (FiniteLanguage, Status, _iter_window_indices, closure_of_set,
                       language_of_point)
from .points import ConstructionTrace, PointGenerator, periodic_point

DENSE_MAX_N = 26

Number = Union[Fraction, float]


@dataclass(frozen=True)
class SeriesEntry:
    n: int
    count: int
    a: float
    ratio: float
    status: Status


def make_entry(n: int, count: int, status=Status.EXACT) -> SeriesEntry:
    a = math.log2(count) if count > 0 else -math.inf
    return SeriesEntry(n, int(count), a, a / n, Status(status))


@dataclass
class EntropySeries:
    entries: list
    source: str = ""
    note: str = ""

    @classmethod
    def from_counts(cls, counts, statuses=None, source: str = "") -> EntropySeries:
        statuses = statuses or [Status.EXACT] * len(counts)
        return cls([make_entry(n, c, s) for n, (c, s) in enumerate(zip(counts, statuses), 1)], source)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def entry(self, n: int) -> SeriesEntry:
        for e in self.entries:
            if e.n == n:
                return e
        raise InputError(f"series has no entry for n={n}")

    @property
    def n_max(self) -> int:
        return max((e.n for e in self.entries), default=0)

    def exact(self) -> list:
        return [e for e in self.entries if e.status is Status.EXACT]

    def counts(self) -> list:
        return [e.count for e in self.entries]

    def ratios(self) -> list:
        return [e.ratio for e in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count", "a_n", "ratio", "status"])
        for e in self.entries:
            w.writerow([e.n, e.count, repr(e.a), repr(e.ratio), e.status.value])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, source: str = "") -> EntropySeries:
        rows = list(csv.DictReader(io.StringIO(text)))
        entries = [SeriesEntry(int(r["n"]), int(r["count"]), float(r["a_n"]), float(r["ratio"]),
                               Status(r["status"])) for r in rows]
        return cls(entries, source)

    def plot_text(self) -> str:
        """Two columns ``n ratio`` for gnuplot."""
        return "".join(f"{e.n} {e.ratio!r}\n" for e in self.entries)


# --------------------------------------------------------------------------
# intervals

def _encode(x: Number):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def _decode(x) -> Number:
    if isinstance(x, str):
        if x in ("inf", "-inf"):
            return float(x)
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class EntropyInterval:
    lower: Number
    upper: Number
    lower_provenance: str = ""
    upper_provenance: str = ""
    lower_open: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise InputError(f"interval lower {self.lower} exceeds upper {self.upper}")

    @property
    def width(self) -> Number:
        return self.upper - self.lower

    def contains(self, x, ulps: int = 1) -> bool:
        """Membership test.  Float endpoints get ``ulps`` units of slack;
        rational endpoints and rational ``x`` are compared exactly."""
        lo, hi = self.lower, self.upper
        if isinstance(hi, float):
            for _ in range(ulps):
                hi = math.nextafter(hi, math.inf)
        if isinstance(lo, float) and not math.isinf(lo):
            for _ in range(ulps):
                lo = math.nextafter(lo, -math.inf)
        above = x > lo if self.lower_open else x >= lo
        return bool(above and x <= hi)

    def scaled(self, k: int) -> EntropyInterval:
        return EntropyInterval(self.lower * k, self.upper * k,
                               f"{k} x ({self.lower_provenance})", f"{k} x ({self.upper_provenance})",
                               self.lower_open)

    def to_json(self) -> dict:
        return {"lower": _encode(self.lower), "upper": _encode(self.upper),
                "lower_provenance": self.lower_provenance, "upper_provenance": self.upper_provenance,
                "lower_open": self.lower_open}

    @classmethod
    def from_json(cls, doc: dict) -> EntropyInterval:
        return cls(_decode(doc["lower"]), _decode(doc["upper"]), doc.get("lower_provenance", ""),
                   doc.get("upper_provenance", ""), bool(doc.get("lower_open", False)))

    def __str__(self) -> str:
        return f"{'(' if self.lower_open else '['}{float(self.lower)!r}, {float(self.upper)!r}]"


# --------------------------------------------------------------------------
# counting

def count_blocks(lang: FiniteLanguage, n: int) -> tuple:
    if n > lang.horizon:
        raise InputError(f"n={n} is beyond the horizon {lang.horizon}")
    return len(lang.level(n)), lang.status(n)


def _closure_count_binary(masks: np.ndarray, n: int) -> int:
    table = np.zeros(1 << n, dtype=bool)
    table[np.asarray(masks, dtype=np.int64)] = True
    for i in range(n):
        view = table.reshape(-1, 2, 1 << i)
        view[:, 0, :] |= view[:, 1, :]
    return int(np.count_nonzero(table))


def subordinate_count_fast(windows: BlockSet, max_n: int = DENSE_MAX_N) -> int:
    """Size of the downward closure of a set of binary n-blocks.

    Each window's 1-mask is marked in a table of size 2^n, then n sweeps clear
    one bit at a time (sum-over-subsets), O(n 2^n).
    """
    if windows.r != 2:
        raise InputError("the fast path is for binary blocks")
    n = windows.length
    if n > max_n:
        raise BudgetError(f"fast subordinate count needs a 2^{n} table, cap is 2^{max_n}; use bound mode",
                          required=n, cap=max_n)
    return _closure_count_binary(windows.indices(), n)


def _count_level(idx: np.ndarray, n: int, r: int, subordinate: bool, max_dense_n: int, cap: int) -> int:
    if not subordinate:
        return int(np.unique(idx).size)
    if r == 2:
        if n > max_dense_n:
            raise BudgetError(f"subordinate count at n={n} exceeds the dense cap n <= {max_dense_n}",
                              required=n, cap=max_dense_n)
        return _closure_count_binary(np.unique(idx), n)
    return len(closure_of_set(BlockSet.from_indices(n, r, idx), cap))


def entropy_series(source, n_max: int, *, subordinate: bool = False, prefix_len: Optional[int] = None,
                   max_dense_n: int = DENSE_MAX_N, cap: int = ENUM_CAP, threads: int = 1) -> EntropySeries:
    """Counts ``|B_n|`` for n = 1..n_max.

    ``source`` is a :class:`FiniteLanguage` or a :class:`PointGenerator`.  With
    ``subordinate=True`` the count is that of the downward closure (the
    subordinate shift).  For a generator, windows are read from
    ``prefix(prefix_len)``; the default for periodic points is just long enough
    to make every level exact.  If a level breaks a budget the series stops
    there and ``note`` says why.
    """
    if isinstance(source, FiniteLanguage):
        lang = source
        top = min(n_max, lang.horizon)
        entries, note = [], ""
        for n in range(1, top + 1):
            level = lang.level(n)
            try:
                if subordinate and lang.r == 2 and n <= max_dense_n:
                    count = subordinate_count_fast(level, max_dense_n)
                elif subordinate:
                    count = len(closure_of_set(level, cap))
                else:
                    count = len(level)
            except BudgetError as exc:
                note = f"truncated at n={n}: {exc}"
                break
            entries.append(make_entry(n, count, lang.status(n)))
        if not note and top < n_max:
            note = f"language horizon {lang.horizon} < requested n_max {n_max}"
        kind = "subordinate closure of language" if subordinate else "language"
        return EntropySeries(entries, f"{kind} (r={lang.r})", note)

    if not isinstance(source, PointGenerator):
        raise InputError(f"cannot build an entropy series from {type(source).__name__}")
    g = source
    if prefix_len is None:
        if g.kind != "periodic":
            raise InputError("prefix_len is required for non-periodic generators")
        prefix_len = len(g.period) + n_max - 1
    if prefix_len < n_max:
        raise InputError(f"prefix length {prefix_len} shorter than n_max {n_max}")
    x = g.prefix(prefix_len)
    r = g.alphabet.size

    def status(n):
        exact = g.kind == "periodic" and prefix_len >= len(g.period) + n - 1
        return Status.EXACT if exact else Status.LOWER

    def work(item):
        n, idx = item
        return _count_level(idx, n, r, subordinate, max_dense_n, cap)

    entries, note = [], ""
    items = []
    for n, idx in _iter_window_indices(x, n_max):
        if subordinate and r == 2 and n > max_dense_n:
            note = f"truncated at n={n}: subordinate count needs n <= {max_dense_n}"
            break
        items.append((n, idx))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(work, it) for it in items]
            results = []
            for f in futures:
                try:
                    results.append(f.result())
                except BudgetError as exc:
                    note = note or f"truncated at n={len(results) + 1}: {exc}"
                    break
    else:
        results = []
        for it in items:
            try:
                results.append(work(it))
            except BudgetError as exc:
                note = f"truncated at n={it[0]}: {exc}"
                break
    entries = [make_entry(n, c, status(n)) for (n, _), c in zip(items, results)]
    kind = "subordinate shift of" if subordinate else "orbit closure language of"
    return EntropySeries(entries, f"{kind} {g.description or g.kind}, prefix {prefix_len}", note)


# --------------------------------------------------------------------------
# estimates and certificates

def fekete_estimate(series: EntropySeries, lower: Optional[Number] = None,
                    lower_provenance: str = "") -> EntropyInterval:
    """Upper endpoint: the smallest ``a_n/n`` over exact entries, which bounds
    the entropy from above because the entropy is the infimum of these ratios."""
    exact = series.exact()
    if not exact:
        raise InputError("no exact entries: the series certifies nothing")
    best = min(exact, key=lambda e: (e.ratio, e.n))
    if lower is None:
        lower, lower_provenance = -math.inf, "none (finite data gives no lower bound)"
    return EntropyInterval(lower, best.ratio, lower_provenance,
                           f"min a_n/n over {len(exact)} exact levels, attained at n={best.n}")


def check_subadditive(series: EntropySeries) -> bool:
    """``|B_{m+n}| <= |B_m| |B_n|`` over all exact listed pairs (integer test)."""
    counts = {e.n: e.count for e in series.exact()}
    for m in counts:
        for n in counts:
            if m <= n and m + n in counts and counts[m + n] > counts[m] * counts[n]:
                return False
    return True


@dataclass
class RationalCaseRow:
    j: int
    length: int
    count: int
    lower: int
    upper: int
    ratio: float
    distance: float

    @property
    def ok(self) -> bool:
        return self.lower <= self.count <= self.upper


@dataclass
class RationalCaseReport:
    block: Block
    p: int
    q: int
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


def subordinate_periodic_count(w: Block, n: int, max_dense_n: int = DENSE_MAX_N) -> int:
    """Exact ``|B_n|`` of the subordinate shift of ``w^inf``."""
    g = periodic_point(w)
    idx = next(idx for m, idx in _iter_window_indices(g.prefix(len(w) + n - 1), n) if m == n)
    return _count_level(idx, n, w.r, True, max_dense_n, ENUM_CAP)


def rational_case_check(w: Block, j_max: int, max_dense_n: int = DENSE_MAX_N) -> RationalCaseReport:
    """Check ``2^{pj} <= |B_{qj}| <= q 2^{pj}`` for the subordinate shift of
    ``w^inf`` (q = |w|, p = number of 1s), j = 1..j_max, with exact counts."""
    if w.r != 2 or len(w) == 0:
        raise InputError("rational case check needs a nonempty binary block")
    q, p = len(w), w.ones()
    if q * j_max > max_dense_n:
        raise BudgetError(f"length {q * j_max} exceeds the counting cap {max_dense_n}",
                          required=q * j_max, cap=max_dense_n)
    report = RationalCaseReport(w, p, q)
    for j in range(1, j_max + 1):
        n = q * j
        count = subordinate_periodic_count(w, n, max_dense_n)
        ratio = math.log2(count) / n
        report.rows.append(RationalCaseRow(j, n, count, 2 ** (p * j), q * 2 ** (p * j), ratio, abs(ratio - p / q)))
    return report


def theorem3_interval(trace: ConstructionTrace, n: int) -> EntropyInterval:
    """``(s_n - 10^-n, s_n]`` for the subordinate shift of ``x(t)``.

    Upper: x is dominated by ``(w^(n))^inf``, whose subordinate shift has
    entropy ``p_n / 10^n = s_n``.  Lower: the entropy equals t and rounding up
    overshoots t by less than ``10^-n``.
    """
    s = trace.level(n).s
    step = Fraction(1, 10 ** n)
    return EntropyInterval(s - step, s,
                           f"s_{n} - 10^-{n}: entropy equals t and s_{n} - t < 10^-{n}",
                           f"s_{n}: x is dominated by (w^({n}))^inf, periodic case gives p_{n}/10^{n}",
                           lower_open=True)


@dataclass(frozen=True)
class Theorem3Counts:
    m: int
    level: int
    periodic_exact: int   # |B_m| of the subordinate shift of (w^(level))^inf: an upper bound
    prefix_lower: int     # closure of the windows of w^(level) = x[1, 10^level]: a lower bound


def theorem3_counts(trace: ConstructionTrace, m: int, level: Optional[int] = None,
                    max_dense_n: int = DENSE_MAX_N) -> Theorem3Counts:
    """Enclose ``|B_m|`` of the subordinate shift of x(t) from the trace."""
    level = trace.depth if level is None else level
    w = trace.block(level)
    if m > len(w):
        raise InputError(f"m={m} exceeds the block length {len(w)} at level {level}")
    upper = subordinate_periodic_count(w, m, max_dense_n)
    idx = next(idx for k, idx in _iter_window_indices(w, m) if k == m)
    lower = _count_level(idx, m, 2, True, max_dense_n, ENUM_CAP)
    return Theorem3Counts(m, level, upper, lower)


def interval_to_text(interval: EntropyInterval) -> str:
    return json.dumps(interval.to_json(), indent=1)


def interval_from_text(text: str) -> EntropyInterval:
    return EntropyInterval.from_json(json.loads(text))

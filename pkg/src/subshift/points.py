"""Infinite one-sided sequences, produced lazily by prefix.

Four kinds of generators are provided: periodic points ``w^inf``, limits of
prefix-coherent block sequences, the square-free indicator ``eta`` and the point
``x(t)`` obtained from the decimal construction (:func:`theorem3_trace`).
"""
from __future__ import annotations

import json
import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .blocks import Alphabet, AlphabetLike, Block, as_alphabet, block_text, dominates, is_prefix
from .errors import BudgetError, InputError, PrecisionError

DEPTH_CAP = 7
SIDECAR_THRESHOLD = 10 ** 4


class PrefixViolation(InputError):
    def __init__(self, level: int, message: str):
        super().__init__(message)
        self.level = level


class PointGenerator:
    """Lazy producer of prefixes of a point of ``A^N``.

    ``extend(n, current)`` must return a symbol sequence of length >= n that
    starts with ``current``.  The longest prefix computed so far is memoized;
    ``prefix`` is safe to call from several threads.
    """

    def __init__(self, alphabet: AlphabetLike, kind: str,
                 extend: Callable[[int, bytes], bytes], *,
                 period: Optional[Block] = None, description: str = ""):
        self.alphabet = as_alphabet(alphabet)
        self.kind = kind
        self.period = period
        self.description = description
        self._extend = extend
        self._memo = b"" if self.alphabet.size <= 256 else ()
        self._lock = threading.Lock()

    def prefix(self, n: int) -> Block:
        if n < 0:
            raise InputError("prefix length must be nonnegative")
        with self._lock:
            if len(self._memo) < n:
                # grow geometrically so repeated calls with increasing n stay linear
                target = max(n, 2 * len(self._memo))
                memo = self._extend(target, self._memo)
                if len(memo) < n:
                    raise InputError(f"{self.kind} generator produced only {len(memo)} symbols, {n} requested")
                self._memo = memo
            memo = self._memo
        return Block(memo[:n], self.alphabet)

    def __repr__(self) -> str:
        return f"PointGenerator(kind={self.kind!r}, r={self.alphabet.size}{', ' + self.description if self.description else ''})"


def periodic_point(w: Block) -> PointGenerator:
    if len(w) == 0:
        raise InputError("periodic point needs a nonempty block")
    q = len(w)

    def extend(n, current):
        return (w.symbols * (n // q + 1))[:n]

    return PointGenerator(w.alphabet, "periodic", extend, period=w, description=f"({w})^inf")


def prefix_limit(blocks: Iterable[Block], alphabet: AlphabetLike = 2, kind: str = "prefix_limit") -> PointGenerator:
    """The point whose prefix of length ``len(blocks[n])`` is ``blocks[n]``.

    The sequence is consumed lazily; each consumed block is checked to extend
    its predecessor and a :class:`PrefixViolation` names the offending level
    (1-based).
    """
    it = iter(blocks)
    state = {"level": 0, "last": None}

    def extend(n, current):
        last = state["last"]
        while last is None or len(last) < n:
            try:
                nxt = next(it)
            except StopIteration:
                have = 0 if last is None else len(last)
                raise InputError(f"block sequence exhausted at length {have}, {n} symbols requested") from None
            state["level"] += 1
            if last is not None and not is_prefix(last, nxt):
                raise PrefixViolation(state["level"],
                                      f"level {state['level']}: block is not an extension of level {state['level'] - 1}")
            last = nxt
            state["last"] = nxt
        return last.symbols

    return PointGenerator(alphabet, kind, extend)


def shift_point(g: PointGenerator) -> PointGenerator:
    """The image of ``g`` under the shift map (first symbol dropped)."""
    if g.kind == "periodic":
        w = g.period
        return periodic_point(w[1:] + w[:1])

    def extend(n, current):
        return g.prefix(n + 1).symbols[1:]

    return PointGenerator(g.alphabet, g.kind, extend, description=f"shift of {g.description or g.kind}")


def _primes_upto(m: int) -> np.ndarray:
    if m < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(m) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.flatnonzero(sieve)


def _squarefree_array(n: int) -> np.ndarray:
    eta = np.ones(n + 1, dtype=np.uint8)
    eta[0] = 0
    for p in _primes_upto(math.isqrt(n)):
        sq = int(p) * int(p)
        eta[sq::sq] = 0
    return eta[1:]


def squarefree_eta(n: int) -> Block:
    """``eta_1 ... eta_n`` with ``eta_k = 1`` iff ``k`` is square-free."""
    if n < 0:
        raise InputError("n must be nonnegative")
    return Block(_squarefree_array(n).tobytes(), 2)


def squarefree_point() -> PointGenerator:
    def extend(n, current):
        return _squarefree_array(n).tobytes()

    return PointGenerator(2, "squarefree", extend, description="eta")


# --------------------------------------------------------------------------
# decimal targets and the construction of x(t)

_DECIMAL_RE = re.compile(r"^(\d+)(?:\.(\d*))?$")


@dataclass(frozen=True)
class DecimalTarget:
    """A decimal numeral for a target value.

    ``declared_exact`` says the value equals the written expansion; otherwise
    the written digits are a truncation of a longer (nonterminating) expansion.
    ``upper`` bounds the integer part, 1 for the binary construction.
    """

    digits: str
    declared_exact: bool = True
    upper: Optional[int] = 1

    def __post_init__(self):
        m = _DECIMAL_RE.match(self.digits)
        if not m:
            raise InputError(f"not a decimal numeral: {self.digits!r}")
        int_part, frac = m.group(1), m.group(2) or ""
        object.__setattr__(self, "digits", str(int(int_part)) + ("." + frac if frac else ""))
        if self.upper is not None:
            value = self.value
            if value > self.upper or (value == self.upper and not self.declared_exact):
                raise InputError(f"target {self.text()} exceeds {self.upper}")

    @classmethod
    def parse(cls, text: str, upper: Optional[int] = 1) -> DecimalTarget:
        text = text.strip()
        exact = True
        for suffix in ("...", "…"):
            if text.endswith(suffix):
                text, exact = text[: -len(suffix)], False
        return cls(text, exact, upper)

    @property
    def integer_part(self) -> int:
        return int(self.digits.split(".")[0])

    @property
    def fraction_digits(self) -> str:
        parts = self.digits.split(".")
        return parts[1] if len(parts) > 1 else ""

    @property
    def value(self) -> Fraction:
        """Exact value of the written digits (a lower bound when not exact)."""
        frac = self.fraction_digits
        return Fraction(int(str(self.integer_part) + frac), 10 ** len(frac))

    def text(self) -> str:
        return self.digits + ("" if self.declared_exact else "...")

    def __str__(self) -> str:
        return self.text()


def round_up_decimal(t: DecimalTarget, n: int) -> Fraction:
    """``ceil(t * 10**n) / 10**n``, computed on the digit string."""
    if n < 1:
        raise InputError("n must be at least 1")
    frac = t.fraction_digits
    if not t.declared_exact and len(frac) < n + 1:
        raise PrecisionError(f"{t.text()} has {len(frac)} fractional digits; rounding at n={n} needs at least {n + 1}")
    head = int(str(t.integer_part) + frac[:n].ljust(n, "0"))
    up = (not t.declared_exact) or any(c != "0" for c in frac[n:])
    return Fraction(head + int(up), 10 ** n)


@dataclass(frozen=True)
class TraceLevel:
    n: int
    s: Fraction
    p: int
    block: Block


@dataclass
class ConstructionTrace:
    target: DecimalTarget
    levels: list = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> TraceLevel:
        if not 1 <= n <= self.depth:
            raise InputError(f"trace has levels 1..{self.depth}, asked for {n}")
        return self.levels[n - 1]

    def block(self, n: int) -> Block:
        return self.level(n).block

    @property
    def p(self) -> tuple:
        return tuple(lv.p for lv in self.levels)

    @property
    def s(self) -> tuple:
        return tuple(lv.s for lv in self.levels)


def _next_level(t: DecimalTarget, prev: Optional[TraceLevel], n: int) -> TraceLevel:
    s = round_up_decimal(t, n)
    p = s * 10 ** n
    assert p.denominator == 1
    p = int(p)
    if prev is None:
        arr = np.zeros(10, dtype=np.uint8)
        arr[:p] = 1
    else:
        arr = np.tile(prev.block.to_array(), 10)
        # keep the first p occurrences of 1, zero the rest
        arr[np.cumsum(arr, dtype=np.int64) > p] = 0
    return TraceLevel(n, s, p, Block(arr.tobytes(), 2))


def theorem3_trace(t: DecimalTarget, n_max: int, depth_cap: int = DEPTH_CAP) -> ConstructionTrace:
    """Build ``w^(1), ..., w^(n_max)``.

    ``w^(1) = 1^{p_1} 0^{10-p_1}`` and ``w^(n+1)`` is ten copies of ``w^(n)`` with
    every 1 after the first ``p_{n+1}`` of them turned into 0, where
    ``p_n = 10**n * s_n`` and ``s_n`` is ``t`` rounded up to ``n`` decimals.
    """
    if isinstance(t, str):
        t = DecimalTarget.parse(t)
    if n_max < 1:
        raise InputError("depth must be at least 1")
    if n_max > depth_cap:
        raise BudgetError(f"depth {n_max} exceeds the cap {depth_cap} (block length 10^{n_max})",
                          required=n_max, cap=depth_cap)
    trace = ConstructionTrace(t)
    prev = None
    for n in range(1, n_max + 1):
        prev = _next_level(t, prev, n)
        trace.levels.append(prev)
    return trace


def extend_trace(trace: ConstructionTrace, n_max: int, depth_cap: int = DEPTH_CAP) -> ConstructionTrace:
    if n_max > depth_cap:
        raise BudgetError(f"depth {n_max} exceeds the cap {depth_cap}", required=n_max, cap=depth_cap)
    while trace.depth < n_max:
        prev = trace.levels[-1] if trace.levels else None
        trace.levels.append(_next_level(trace.target, prev, trace.depth + 1))
    return trace


def verify_trace(trace: ConstructionTrace) -> dict:
    """Check the construction invariants level by level.

    Keys: ``length`` (|w^(n)| = 10^n), ``ones`` (w^(n) has p_n ones),
    ``prefix`` (w^(n) is a prefix of w^(n+1)), ``dominated`` ((w^(n))^10
    dominates w^(n+1)), ``p_monotone`` (p_n <= p_{n+1} <= 10 p_n).
    """
    checks = {"length": True, "ones": True, "prefix": True, "dominated": True, "p_monotone": True}
    prev = None
    for lv in trace.levels:
        checks["length"] &= len(lv.block) == 10 ** lv.n
        checks["ones"] &= lv.block.ones() == lv.p
        if prev is not None:
            cur = lv.block.to_array()
            checks["prefix"] &= is_prefix(prev.block, lv.block)
            checks["dominated"] &= bool(np.all(cur <= np.tile(prev.block.to_array(), 10)))
            checks["p_monotone"] &= prev.p <= lv.p <= 10 * prev.p
        prev = lv
    return {k: bool(v) for k, v in checks.items()}


def theorem3_point(trace: ConstructionTrace, depth_cap: int = DEPTH_CAP) -> PointGenerator:
    """The limit point of the trace blocks; deeper levels are built on demand."""

    def levels() -> Iterator[Block]:
        n = 0
        while True:
            n += 1
            if n > trace.depth:
                extend_trace(trace, n, depth_cap)
            yield trace.block(n)

    g = prefix_limit(levels(), 2, kind="theorem3")
    g.description = f"x({trace.target.text()})"
    g.trace = trace
    return g


# --------------------------------------------------------------------------
# serialization

def trace_to_json(trace: ConstructionTrace, sidecar_dir=None) -> dict:
    """JSON-compatible document; blocks longer than 10^4 go to sidecar files
    ``w<n>.txt`` in ``sidecar_dir`` (required when such blocks exist)."""
    levels = []
    for lv in trace.levels:
        entry = {"n": lv.n, "s_numerator": lv.s.numerator, "s_denominator": lv.s.denominator, "p": lv.p}
        if len(lv.block) > SIDECAR_THRESHOLD:
            if sidecar_dir is None:
                raise InputError(f"level {lv.n} block has {len(lv.block)} symbols; a sidecar directory is required")
            path = Path(sidecar_dir) / f"w{lv.n}.txt"
            path.write_text(block_text(lv.block) + "\n", encoding="utf-8")
            entry["w_path"] = path.name
        else:
            entry["w_text"] = block_text(lv.block)
        levels.append(entry)
    return {"target_digits": trace.target.text(), "declared_exact": trace.target.declared_exact, "levels": levels}


def trace_from_json(doc: dict, sidecar_dir=None) -> ConstructionTrace:
    target = DecimalTarget.parse(doc["target_digits"])
    if target.declared_exact != doc.get("declared_exact", target.declared_exact):
        raise InputError("declared_exact flag disagrees with the target text")
    trace = ConstructionTrace(target)
    for entry in doc["levels"]:
        if "w_text" in entry:
            text = entry["w_text"]
        else:
            if sidecar_dir is None:
                raise InputError("trace refers to sidecar files but no directory was given")
            text = (Path(sidecar_dir) / entry["w_path"]).read_text(encoding="utf-8").strip()
        s = Fraction(entry["s_numerator"], entry["s_denominator"])
        trace.levels.append(TraceLevel(entry["n"], s, entry["p"], Block.parse(text, 2)))
    return trace


def write_trace(trace: ConstructionTrace, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "trace.json"
    path.write_text(json.dumps(trace_to_json(trace, directory), indent=1) + "\n", encoding="utf-8")
    return path


def read_trace(path) -> ConstructionTrace:
    path = Path(path)
    return trace_from_json(json.loads(path.read_text(encoding="utf-8")), path.parent)

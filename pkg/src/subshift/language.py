"""Finite-horizon languages ``B_1(X), ..., B_N(X)`` and structural predicates."""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .blocks import (ENUM_CAP, Alphabet, AlphabetLike, Block, BlockSet, as_alphabet,
                     block_text, dominated_enumerate, index_dtype)
from .errors import BudgetError, InputError
from .points import PointGenerator


class Status(str, enum.Enum):
    EXACT = "exact"
    LOWER = "lower_bound"
    UPPER = "upper_bound"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FiniteLanguage:
    """Levels ``1..horizon`` of a language, each tagged with how it relates to
    the true ``B_n(X)``: equal, a subset, or a superset."""

    alphabet: Alphabet
    levels: tuple
    statuses: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", as_alphabet(self.alphabet))
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "statuses", tuple(Status(s) for s in self.statuses))
        if len(self.levels) != len(self.statuses):
            raise InputError("one status per level is required")
        for n, lv in enumerate(self.levels, 1):
            if lv.length != n or lv.alphabet != self.alphabet:
                raise InputError(f"level {n} holds {lv.length}-blocks over {lv.r} symbols")

    @property
    def horizon(self) -> int:
        return len(self.levels)

    @property
    def r(self) -> int:
        return self.alphabet.size

    def level(self, n: int) -> BlockSet:
        if not 1 <= n <= self.horizon:
            raise InputError(f"level {n} outside horizon {self.horizon}")
        return self.levels[n - 1]

    def status(self, n: int) -> Status:
        self.level(n)
        return self.statuses[n - 1]

    def is_exact(self, upto: Optional[int] = None) -> bool:
        upto = self.horizon if upto is None else upto
        return all(s is Status.EXACT for s in self.statuses[:upto])

    def counts(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def truncate(self, horizon: int) -> FiniteLanguage:
        return FiniteLanguage(self.alphabet, self.levels[:horizon], self.statuses[:horizon])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteLanguage):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.statuses == other.statuses
                and all(a == b for a, b in zip(self.levels, other.levels))
                and self.horizon == other.horizon)

    __hash__ = None


def full_language(r: AlphabetLike, horizon: int) -> FiniteLanguage:
    alphabet = as_alphabet(r)
    levels = [BlockSet.full(n, alphabet) for n in range(1, horizon + 1)]
    return FiniteLanguage(alphabet, levels, [Status.EXACT] * horizon)


# --------------------------------------------------------------------------
# gap sets

@dataclass(frozen=True)
class GapSet:
    """A set ``S`` of nonnegative integers: finitely many explicit members plus
    an optional tail ``{j >= tail_from}``, optionally thinned to the residues
    ``j % modulus in residues``."""

    explicit: frozenset = frozenset()
    tail_from: Optional[int] = None
    modulus: Optional[int] = None
    residues: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "explicit", frozenset(int(j) for j in self.explicit))
        object.__setattr__(self, "residues", frozenset(int(j) for j in self.residues))
        if any(j < 0 for j in self.explicit):
            raise InputError("gap sets hold nonnegative integers")
        if self.tail_from is not None and self.tail_from < 0:
            raise InputError("tail start must be nonnegative")
        if self.modulus is not None:
            if self.tail_from is None or self.modulus < 1 or not self.residues:
                raise InputError("a periodic tail needs tail_from, modulus >= 1 and residues")

    @classmethod
    def of(cls, *members: int) -> GapSet:
        return cls(frozenset(members))

    @classmethod
    def naturals(cls) -> GapSet:
        """``N = {1, 2, ...}``: the golden mean shift."""
        return cls(tail_from=1)

    @classmethod
    def everything(cls) -> GapSet:
        return cls(tail_from=0)

    @classmethod
    def parse(cls, text: str) -> GapSet:
        """``"1,3,7+"`` is ``{1, 3} U {j >= 7}``; ``""`` is the empty set."""
        text = text.strip().replace(" ", "")
        explicit, tail = set(), None
        if text:
            for tok in text.split(","):
                try:
                    if tok.endswith("+"):
                        if tail is not None:
                            raise InputError(f"gap set {text!r} has two tails")
                        tail = int(tok[:-1])
                    else:
                        explicit.add(int(tok))
                except ValueError:
                    raise InputError(f"bad gap set token {tok!r}") from None
        return cls(frozenset(explicit), tail)

    def text(self) -> str:
        if self.modulus is not None:
            raise InputError("periodic gap sets have no text form")
        toks = [str(j) for j in sorted(self.explicit)]
        if self.tail_from is not None:
            toks.append(f"{self.tail_from}+")
        return ",".join(toks)

    def __contains__(self, j: int) -> bool:
        if j in self.explicit:
            return True
        if self.tail_from is None or j < self.tail_from:
            return False
        return self.modulus is None or j % self.modulus in self.residues

    @property
    def is_infinite(self) -> bool:
        return self.tail_from is not None

    @property
    def is_empty(self) -> bool:
        return not self.explicit and self.tail_from is None

    @property
    def is_everything(self) -> bool:
        return (self.tail_from is not None and self.modulus is None
                and all(j in self.explicit for j in range(self.tail_from)))

    def members_upto(self, bound: int) -> np.ndarray:
        """Sorted members ``j <= bound``."""
        out = [j for j in self.explicit if j <= bound]
        if self.tail_from is not None and bound >= self.tail_from:
            tail = np.arange(self.tail_from, bound + 1, dtype=np.int64)
            if self.modulus is not None:
                tail = tail[np.isin(tail % self.modulus, list(self.residues))]
            out = np.union1d(np.asarray(out, dtype=np.int64), tail)
        return np.unique(np.asarray(out, dtype=np.int64))


def sgap_forbidden(S: GapSet, max_len: int) -> list[Block]:
    """The blocks ``1 0^p 1`` with ``p`` not in ``S`` and length at most ``max_len``."""
    if max_len < 2:
        raise InputError("max_len must be at least 2")
    return [Block(b"\x01" + bytes(p) + b"\x01", 2) for p in range(max_len - 1) if p not in S]


# --------------------------------------------------------------------------
# building languages

def prune_forbidden(forbidden: Sequence[Block], horizon: int, alphabet: Optional[AlphabetLike] = None,
                    cap: int = ENUM_CAP) -> FiniteLanguage:
    """All n-blocks (n <= horizon) containing no forbidden block as a factor.

    Level n+1 is grown from level n by appending one symbol and testing only
    the suffixes against the forbidden blocks.  These are the locally
    admissible blocks; for forbidden sets where some admissible block cannot
    be continued forever they overcount ``B_n(X_F)``.
    """
    forbidden = list(forbidden)
    if alphabet is None:
        alphabet = forbidden[0].alphabet if forbidden else Alphabet(2)
    alphabet = as_alphabet(alphabet)
    r = alphabet.size
    if any(f.alphabet != alphabet for f in forbidden):
        raise InputError("forbidden blocks use a different alphabet")
    dtype = index_dtype(r, horizon)
    if any(len(f) == 0 for f in forbidden):
        # the empty block occurs everywhere: X_F is empty
        empty = [BlockSet.empty(n, alphabet) for n in range(1, horizon + 1)]
        return FiniteLanguage(alphabet, empty, [Status.EXACT] * horizon)
    by_len: dict[int, np.ndarray] = {}
    for f in forbidden:
        by_len.setdefault(len(f), []).append(f.index())
    by_len = {L: np.unique(np.asarray(v, dtype=dtype)) for L, v in by_len.items()}

    symbols = np.arange(r, dtype=np.int64).astype(dtype)
    cur = np.zeros(1, dtype=dtype)
    levels = []
    for n in range(1, horizon + 1):
        ext = (cur[:, None] * r + symbols).ravel()
        for L, fidx in by_len.items():
            if L <= n:
                ext = ext[~np.isin(ext % (r ** L), fidx)]
        if ext.size > cap:
            raise BudgetError(f"level {n} holds {ext.size} blocks, cap is {cap}", required=int(ext.size), cap=cap)
        levels.append(BlockSet.from_indices(n, alphabet, ext))
        cur = ext
    return FiniteLanguage(alphabet, levels, [Status.EXACT] * horizon)


def window_indices(x: Block, n: int, dtype=None) -> np.ndarray:
    """Radix indices of all length-n windows of ``x`` (with repetitions)."""
    r = x.r
    dtype = dtype or index_dtype(r, n)
    arr = x.to_array().astype(np.int64).astype(dtype)
    L = arr.size
    if n > L:
        return np.zeros(0, dtype=dtype)
    idx = arr[: L - n + 1].copy()
    for k in range(1, n):
        idx = idx * r + arr[k: L - n + 1 + k]
    return idx


def _iter_window_indices(x: Block, horizon: int):
    r = x.r
    dtype = index_dtype(r, horizon)
    arr = x.to_array().astype(np.int64).astype(dtype)
    L = arr.size
    idx = arr
    for n in range(1, horizon + 1):
        if n > 1:
            idx = idx[:-1] * r + arr[n - 1:]
        yield n, idx


def language_of_point(g: PointGenerator, horizon: int, prefix_len: int) -> FiniteLanguage:
    """Blocks of length <= horizon occurring in ``g.prefix(prefix_len)``.

    A level is exact when ``g`` is periodic with period ``q`` and the prefix
    has length at least ``q + n - 1`` (every window position is seen);
    otherwise it is only a lower bound for the language of the point.
    """
    if prefix_len < horizon:
        raise InputError(f"prefix length {prefix_len} is shorter than the horizon {horizon}")
    x = g.prefix(prefix_len)
    levels, statuses = [], []
    for n, idx in _iter_window_indices(x, horizon):
        levels.append(BlockSet.from_indices(n, g.alphabet, idx))
        exact = g.kind == "periodic" and prefix_len >= len(g.period) + n - 1
        statuses.append(Status.EXACT if exact else Status.LOWER)
    return FiniteLanguage(g.alphabet, levels, statuses)


def downward_closure_table(table: np.ndarray, r: int, n: int) -> np.ndarray:
    """Close a dense membership table of n-blocks downward under domination.

    One pass per position: at position i every present block with symbol v
    marks the same block with symbol v-1 there (v = r-1, ..., 1).  For r = 2
    this is the usual subset-sum sweep over bit masks, O(n 2^n).
    """
    t = np.array(table, dtype=bool, copy=True)
    for i in range(n):
        view = t.reshape(-1, r, r ** i)
        for v in range(r - 1, 0, -1):
            view[:, v - 1, :] |= view[:, v, :]
    return t


def closure_of_set(level: BlockSet, cap: int = ENUM_CAP) -> BlockSet:
    if level.is_dense:
        return BlockSet.from_table(level.length, level.alphabet,
                                   downward_closure_table(level.table(), level.r, level.length))
    parts, total = [], 0
    for b in level:
        part = dominated_enumerate(b, cap).indices()
        total += part.size
        if total > cap:
            raise BudgetError(f"closure of level {level.length} needs more than {cap} blocks", required=total, cap=cap)
        parts.append(part)
    if not parts:
        return BlockSet.empty(level.length, level.alphabet)
    return BlockSet.from_indices(level.length, level.alphabet, np.concatenate(parts))


def subordinate_closure(lang: FiniteLanguage, cap: int = ENUM_CAP) -> FiniteLanguage:
    """Level-wise downward closure under domination; status flags carry over."""
    levels = [closure_of_set(lv, cap) for lv in lang.levels]
    return FiniteLanguage(lang.alphabet, levels, lang.statuses)


# --------------------------------------------------------------------------
# predicates

def _require_exact(lang: FiniteLanguage, upto: Optional[int] = None) -> None:
    if not lang.is_exact(upto):
        raise InputError("this check needs exact levels")


def is_factorial(lang: FiniteLanguage, strict: bool = True) -> bool:
    """Every factor of a member is a member.  Checking the two one-symbol
    shortenings of each block suffices, by induction on length."""
    if strict:
        _require_exact(lang)
    r = lang.r
    for n in range(2, lang.horizon + 1):
        idx = lang.level(n).indices()
        if idx.size == 0:
            continue
        lower = lang.level(n - 1)
        if not (lower.contains_indices(idx // r).all() and lower.contains_indices(idx % (r ** (n - 1))).all()):
            return False
    return True


def is_prolongable(lang: FiniteLanguage, strict: bool = True) -> bool:
    """Every member of a level below the horizon extends by one symbol."""
    if strict:
        _require_exact(lang)
    r = lang.r
    for n in range(1, lang.horizon):
        here = lang.level(n).indices()
        heads = np.unique(lang.level(n + 1).indices() // r)
        if not np.isin(here, heads).all():
            return False
    return True


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    window: Optional[tuple] = None   # 1-based inclusive (i, j) of a rejected window

    def __bool__(self) -> bool:
        return self.consistent


def membership_check(g: PointGenerator, lang: FiniteLanguage, depth: int) -> Verdict:
    """Look for a window of ``g.prefix(depth)`` (length <= horizon) missing from
    ``lang``.  Finding none is evidence of membership, not proof."""
    _require_exact(lang)
    x = g.prefix(depth)
    best = None
    for n, idx in _iter_window_indices(x, min(lang.horizon, depth)):
        missing = np.flatnonzero(~lang.level(n).contains_indices(idx))
        if missing.size:
            i = int(missing[0]) + 1
            cand = (i + n - 1, i)
            if best is None or cand < best:
                best = cand
    if best is None:
        return Verdict(True)
    j, i = best
    return Verdict(False, (i, j))


def is_irreducible_at_horizon(lang: FiniteLanguage, n: int, max_gap: int) -> bool:
    """For all u, v in level n, is there y with ``|y| <= max_gap`` and uyv in the language?"""
    need = 2 * n + max_gap
    if need > lang.horizon:
        raise InputError(f"irreducibility at n={n}, max_gap={max_gap} needs horizon {need}, have {lang.horizon}")
    _require_exact(lang, need)
    r = lang.r
    members = lang.level(n).indices()
    if members.size == 0:
        return True
    dtype = index_dtype(r, 2 * n)
    rn = r ** n
    found = []
    for gap in range(max_gap + 1):
        b = lang.level(2 * n + gap).indices().astype(dtype)
        found.append((b // (r ** (n + gap))) * rn + b % rn)
    pairs = np.unique(np.concatenate(found))
    us, vs = pairs // rn, pairs % rn
    ok = np.isin(us, members) & np.isin(vs, members)
    return int(np.count_nonzero(ok)) == members.size ** 2


def suffix_invariant(lang: FiniteLanguage) -> bool:
    """Dropping the first symbol of any level-n member lands in level n-1."""
    r = lang.r
    for n in range(2, lang.horizon + 1):
        idx = lang.level(n).indices()
        if idx.size and not lang.level(n - 1).contains_indices(idx % (r ** (n - 1))).all():
            return False
    return True


# --------------------------------------------------------------------------
# language files

def dump_language(lang: FiniteLanguage, fh) -> None:
    fh.write(f"alphabet={lang.r} horizon={lang.horizon}\n")
    for n, (lv, st) in enumerate(zip(lang.levels, lang.statuses), 1):
        fh.write(f"n={n} status={st.value} count={len(lv)}\n")
        for b in lv:
            fh.write(block_text(b) + "\n")


def load_language(fh) -> FiniteLanguage:
    lines = iter(fh.read().splitlines())

    def fields(line):
        try:
            return dict(tok.split("=", 1) for tok in line.split())
        except ValueError:
            raise InputError(f"malformed header line {line!r}") from None

    try:
        head = fields(next(lines))
        alphabet = Alphabet(int(head["alphabet"]))
        horizon = int(head["horizon"])
        levels, statuses = [], []
        for n in range(1, horizon + 1):
            h = fields(next(lines))
            if int(h["n"]) != n:
                raise InputError(f"expected level {n}, found {h['n']}")
            count = int(h["count"])
            bl = [Block.parse(next(lines), alphabet) for _ in range(count)]
            levels.append(BlockSet.from_blocks(n, alphabet, bl))
            statuses.append(Status(h["status"]))
    except (StopIteration, KeyError) as exc:
        raise InputError(f"truncated or malformed language file ({exc})") from None
    return FiniteLanguage(alphabet, levels, statuses)


def language_to_text(lang: FiniteLanguage) -> str:
    buf = io.StringIO()
    dump_language(lang, buf)
    return buf.getvalue()


def language_from_text(text: str) -> FiniteLanguage:
    return load_language(io.StringIO(text))


def write_language(lang: FiniteLanguage, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_language(lang, fh)


def read_language(path) -> FiniteLanguage:
    with open(path, encoding="utf-8") as fh:
        return load_language(fh)


def read_block_list(path, alphabet: AlphabetLike = 2) -> list[Block]:
    """One block per line; blank lines and ``#`` comments ignored."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(Block.parse(line, alphabet))
    return out

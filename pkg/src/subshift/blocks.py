"""Alphabets, blocks and sets of equal-length blocks.

A block over ``{0, ..., r-1}`` is stored as ``bytes`` when ``r <= 256`` and as a
tuple of ints otherwise, so that the very long blocks produced by the
construction in :mod:`subshift.points` stay compact.

Blocks of length ``n`` are indexed by their radix-``r`` value, most significant
symbol first.  For binary blocks this index is exactly the bit mask of the
positions holding a ``1`` (first symbol = highest bit), which is what the
counting core in :mod:`subshift.entropy` works on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import BudgetError, InputError

MAX_ALPHABET = 2 ** 16
DENSE_CAP = 2 ** 26   # r**n at or below this -> dense boolean table
ENUM_CAP = 2 ** 26    # max blocks produced by a single enumeration


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or not 1 <= self.size <= MAX_ALPHABET:
            raise InputError(f"alphabet size must be an integer in [1, {MAX_ALPHABET}], got {self.size!r}")
        object.__setattr__(self, "size", int(self.size))

    def __contains__(self, symbol) -> bool:
        return 0 <= symbol < self.size

    def __len__(self) -> int:
        return self.size

    @property
    def symbols(self) -> range:
        return range(self.size)


AlphabetLike = Union[Alphabet, int]


def as_alphabet(a: AlphabetLike) -> Alphabet:
    return a if isinstance(a, Alphabet) else Alphabet(a)


def index_dtype(r: int, n: int):
    """numpy dtype able to hold radix-r indices of n-blocks."""
    return np.int64 if r ** n < 2 ** 62 else object


def _parse_text(text: str, r: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if r <= 10:
        if not text.isdigit():
            raise InputError(f"block text {text!r} is not a digit string")
        return [int(c) for c in text]
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InputError(f"block text {text!r} is not a comma-separated integer list") from None


@dataclass(frozen=True)
class Block:
    """A finite word over ``Alphabet(r)``; the empty block has length 0."""

    symbols: Union[bytes, tuple]
    alphabet: Alphabet = Alphabet(2)

    def __post_init__(self):
        alphabet = as_alphabet(self.alphabet)
        r = alphabet.size
        symbols = self.symbols
        if isinstance(symbols, str):
            symbols = _parse_text(symbols, r)
        if r <= 256:
            if isinstance(symbols, np.ndarray):
                if symbols.size and (symbols.min() < 0 or symbols.max() >= r):
                    raise InputError(f"symbol out of range for alphabet of size {r}")
                data = symbols.astype(np.uint8).tobytes()
            else:
                try:
                    data = bytes(symbols)
                except (ValueError, TypeError):
                    raise InputError(f"symbols must be integers in [0, {r})") from None
            if data and max(data) >= r:
                raise InputError(f"symbol {max(data)} out of range for alphabet of size {r}")
        else:
            data = tuple(int(s) for s in symbols)
            if any(not 0 <= s < r for s in data):
                raise InputError(f"symbol out of range for alphabet of size {r}")
        object.__setattr__(self, "symbols", data)
        object.__setattr__(self, "alphabet", alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: AlphabetLike = 2) -> Block:
        alphabet = as_alphabet(alphabet)
        return cls(_parse_text(text, alphabet.size), alphabet)

    @classmethod
    def empty(cls, alphabet: AlphabetLike = 2) -> Block:
        return cls((), alphabet)

    @classmethod
    def from_index(cls, index: int, length: int, alphabet: AlphabetLike = 2) -> Block:
        alphabet = as_alphabet(alphabet)
        r = alphabet.size
        index = int(index)
        if r == 1:
            return cls(bytes(length), alphabet)
        out = [0] * length
        for i in range(length - 1, -1, -1):
            index, out[i] = divmod(index, r)
        if index:
            raise InputError(f"index too large for a {length}-block over {r} symbols")
        return cls(out, alphabet)

    @property
    def r(self) -> int:
        return self.alphabet.size

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Block(self.symbols[item], self.alphabet)
        return self.symbols[item]

    def __add__(self, other: Block) -> Block:
        return concat(self, other)

    def __mul__(self, n: int) -> Block:
        return power(self, n)

    def __str__(self) -> str:
        return block_text(self)

    def __repr__(self) -> str:
        text = block_text(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"Block({text!r}, r={self.r})"

    def ones(self) -> int:
        """Number of nonzero symbols (the number of 1s for a binary block)."""
        if isinstance(self.symbols, bytes):
            return len(self.symbols) - self.symbols.count(0)
        return sum(1 for s in self.symbols if s)

    def index(self) -> int:
        """Radix-r value of the block, most significant symbol first."""
        r = self.r
        if r == 1 or not self.symbols:
            return 0
        if r <= 10 and isinstance(self.symbols, bytes):
            return int(self.symbols.translate(_DIGITS), r)
        value = 0
        for s in self.symbols:
            value = value * r + s
        return value

    def to_array(self) -> np.ndarray:
        if isinstance(self.symbols, bytes):
            return np.frombuffer(self.symbols, dtype=np.uint8)
        return np.asarray(self.symbols, dtype=np.int64)


_DIGITS = bytes.maketrans(bytes(range(10)), b"0123456789")


def block_text(w: Block) -> str:
    """Text form: digit string for r <= 10, comma-separated integers otherwise."""
    if w.r <= 10:
        return w.symbols.translate(_DIGITS).decode("ascii")
    return ",".join(str(s) for s in w.symbols)


def parse_block(text: str, alphabet: AlphabetLike = 2) -> Block:
    return Block.parse(text, alphabet)


def _check_same(u: Block, v: Block) -> None:
    if u.alphabet != v.alphabet:
        raise InputError(f"alphabet mismatch: {u.r} vs {v.r} symbols")


def concat(u: Block, v: Block) -> Block:
    _check_same(u, v)
    return Block(u.symbols + v.symbols, u.alphabet)


def power(u: Block, n: int) -> Block:
    if n < 0:
        raise InputError("power exponent must be nonnegative")
    return Block(u.symbols * n, u.alphabet)


def is_prefix(u: Block, z: Block) -> bool:
    _check_same(u, z)
    return len(u) <= len(z) and z.symbols[: len(u)] == u.symbols


def dominates(w: Block, v: Block) -> bool:
    """True iff ``len(w) == len(v)`` and ``v[i] <= w[i]`` for every position.

    Blocks of different lengths never dominate each other.
    """
    _check_same(w, v)
    if len(w) != len(v):
        return False
    if len(w) > 64:
        return bool(np.all(v.to_array() <= w.to_array()))
    return all(b <= a for a, b in zip(w.symbols, v.symbols))


def dominated_count(w: Block) -> int:
    """Exact number of blocks dominated by ``w``: the product of ``w[i] + 1``."""
    if w.r == 2:
        return 1 << w.ones()
    return math.prod(s + 1 for s in w.symbols)


def dominated_enumerate(w: Block, cap: int = ENUM_CAP) -> BlockSet:
    count = dominated_count(w)
    if count > cap:
        raise BudgetError(f"{count} blocks are dominated by this block, cap is {cap}",
                          required=count, cap=cap)
    r, n = w.r, len(w)
    dtype = index_dtype(r, n)
    idx = np.zeros(1, dtype=dtype)
    for s in w.symbols:
        idx = (idx[:, None] * r + np.arange(s + 1, dtype=np.int64).astype(dtype)).ravel()
    return BlockSet.from_indices(n, w.alphabet, idx)


class BlockSet:
    """A set of n-blocks, stored densely (boolean table indexed by radix value)
    when ``r**n <= DENSE_CAP`` and as a sorted index array otherwise."""

    __slots__ = ("length", "alphabet", "_table", "_sorted")

    def __init__(self, length: int, alphabet: AlphabetLike, *, table=None, sorted_indices=None):
        self.length = int(length)
        self.alphabet = as_alphabet(alphabet)
        self._table = table
        self._sorted = sorted_indices

    @property
    def r(self) -> int:
        return self.alphabet.size

    @property
    def universe(self) -> int:
        return self.r ** self.length

    @property
    def is_dense(self) -> bool:
        return self._table is not None

    @classmethod
    def from_indices(cls, length: int, alphabet: AlphabetLike, indices) -> BlockSet:
        alphabet = as_alphabet(alphabet)
        universe = alphabet.size ** length
        dtype = index_dtype(alphabet.size, length)
        idx = np.asarray(indices, dtype=dtype) if not isinstance(indices, np.ndarray) else indices
        if idx.dtype != dtype:
            idx = idx.astype(dtype)
        if universe <= DENSE_CAP:
            table = np.zeros(universe, dtype=bool)
            table[idx.astype(np.int64)] = True
            return cls(length, alphabet, table=table)
        return cls(length, alphabet, sorted_indices=np.unique(idx))

    @classmethod
    def from_table(cls, length: int, alphabet: AlphabetLike, table: np.ndarray) -> BlockSet:
        alphabet = as_alphabet(alphabet)
        table = np.asarray(table, dtype=bool).ravel()
        if table.size != alphabet.size ** length:
            raise InputError("table size does not match r**length")
        return cls(length, alphabet, table=table)

    @classmethod
    def from_blocks(cls, length: int, alphabet: AlphabetLike, blocks: Iterable[Block]) -> BlockSet:
        alphabet = as_alphabet(alphabet)
        idx = []
        for b in blocks:
            if len(b) != length or b.alphabet != alphabet:
                raise InputError(f"block {b!r} does not belong to a set of {length}-blocks over {alphabet.size} symbols")
            idx.append(b.index())
        return cls.from_indices(length, alphabet, idx)

    @classmethod
    def empty(cls, length: int, alphabet: AlphabetLike) -> BlockSet:
        return cls.from_indices(length, alphabet, [])

    @classmethod
    def full(cls, length: int, alphabet: AlphabetLike) -> BlockSet:
        alphabet = as_alphabet(alphabet)
        universe = alphabet.size ** length
        if universe <= DENSE_CAP:
            return cls(length, alphabet, table=np.ones(universe, dtype=bool))
        raise BudgetError(f"full set of {universe} blocks exceeds the dense cap", required=universe, cap=DENSE_CAP)

    def indices(self) -> np.ndarray:
        if self._table is not None:
            return np.flatnonzero(self._table).astype(index_dtype(self.r, self.length))
        return self._sorted

    def table(self) -> np.ndarray:
        """Dense boolean membership table (read-only view)."""
        if self._table is None:
            raise BudgetError(f"{self.universe} entries exceed the dense cap {DENSE_CAP}",
                              required=self.universe, cap=DENSE_CAP)
        view = self._table.view()
        view.flags.writeable = False
        return view

    def contains_indices(self, idx: np.ndarray) -> np.ndarray:
        """Vectorized membership test for radix indices."""
        if self._table is not None:
            return self._table[np.asarray(idx, dtype=np.int64)]
        return np.isin(idx, self._sorted)

    def __len__(self) -> int:
        if self._table is not None:
            return int(np.count_nonzero(self._table))
        return int(self._sorted.size)

    def __contains__(self, block: Block) -> bool:
        if len(block) != self.length or block.alphabet != self.alphabet:
            return False
        i = block.index()
        if self._table is not None:
            return bool(self._table[i])
        pos = np.searchsorted(self._sorted, i)
        return bool(pos < self._sorted.size and self._sorted[pos] == i)

    def __iter__(self) -> Iterator[Block]:
        for i in self.indices():
            yield Block.from_index(int(i), self.length, self.alphabet)

    def __eq__(self, other) -> bool:
        if isinstance(other, BlockSet):
            return (self.length == other.length and self.alphabet == other.alphabet
                    and np.array_equal(self.indices(), other.indices()))
        if isinstance(other, (set, frozenset)):
            return self.texts() == {str(b) if isinstance(b, Block) else b for b in other}
        return NotImplemented

    __hash__ = None

    def __or__(self, other: BlockSet) -> BlockSet:
        if self.length != other.length or self.alphabet != other.alphabet:
            raise InputError("union of block sets with different length or alphabet")
        if self._table is not None and other._table is not None:
            return BlockSet(self.length, self.alphabet, table=self._table | other._table)
        return BlockSet.from_indices(self.length, self.alphabet,
                                     np.concatenate([self.indices(), other.indices()]))

    def texts(self) -> set[str]:
        return {str(b) for b in self}

    def __repr__(self) -> str:
        return f"BlockSet(length={self.length}, r={self.r}, size={len(self)})"


def blocks(texts: Sequence[str], alphabet: AlphabetLike = 2) -> list[Block]:
    """Shorthand: ``blocks(["11", "101"])``."""
    return [Block.parse(t, alphabet) for t in texts]

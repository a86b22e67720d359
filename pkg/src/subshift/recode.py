"""Recoding binary k-chunks as single symbols of ``{0, ..., 2^k - 1}``.

Block counts satisfy ``|B_n(Y)| = |B_{kn}(X)|`` so entropy is multiplied by k;
this is how targets above 1 are reached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .blocks import Alphabet, Block, BlockSet
from .errors import InputError
from .language import FiniteLanguage
from .points import DecimalTarget


@dataclass(frozen=True)
class RecodeMap:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InputError("k must be at least 1")

    @property
    def alphabet_out(self) -> Alphabet:
        return Alphabet(2 ** self.k)

    def __call__(self, u: Block) -> Block:
        return recode_block(u, self.k)


def recode_block(u: Block, k: int) -> Block:
    """Each k-chunk becomes its binary value, most significant bit first."""
    if u.r != 2:
        raise InputError("recoding applies to binary blocks")
    if k < 1:
        raise InputError("k must be at least 1")
    if len(u) % k:
        raise InputError(f"block length {len(u)} is not divisible by k={k}")
    chunks = u.to_array().astype(np.int64).reshape(-1, k)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    return Block(chunks @ weights, Alphabet(2 ** k))


def recode_language(lang: FiniteLanguage, k: int) -> FiniteLanguage:
    """Level n of the result is the image of level kn.

    With MSB-first indexing a binary kn-block and its recoded n-block have the
    same radix value, so level indices carry over unchanged.
    """
    if lang.r != 2:
        raise InputError("recoding applies to binary languages")
    if k < 1:
        raise InputError("k must be at least 1")
    horizon = lang.horizon // k
    if horizon < 1:
        raise InputError(f"horizon {lang.horizon} is shorter than k={k}")
    out = Alphabet(2 ** k)
    levels = [BlockSet.from_indices(n, out, lang.level(k * n).indices()) for n in range(1, horizon + 1)]
    statuses = [lang.status(k * n) for n in range(1, horizon + 1)]
    return FiniteLanguage(out, levels, statuses)


@dataclass
class ScalingReport:
    k: int
    levels: list        # (n, count_Y, count_X at kn, equal)

    @property
    def ok(self) -> bool:
        return bool(self.levels) and all(eq for *_, eq in self.levels)


def entropy_scaling_check(series_x, series_y, k: int) -> ScalingReport:
    """Compare ``a_n(Y)`` with ``a_{kn}(X)`` wherever both are listed.

    Counts are compared as integers, so ``ratio_Y(n) = k ratio_X(kn)`` holds
    exactly at every level reported equal.
    """
    xs = {e.n: e.count for e in series_x}
    rows = []
    for e in series_y:
        if k * e.n in xs:
            rows.append((e.n, e.count, xs[k * e.n], e.count == xs[k * e.n]))
    return ScalingReport(k, rows)


def choose_k(t: DecimalTarget) -> tuple:
    """``k = floor(t) + 1`` and ``s = t / k`` (exact), so that ``s`` lies in (0, 1)."""
    k = t.integer_part + 1
    return k, t.value / k


def fraction_to_decimal(x: Fraction) -> str:
    """Exact decimal text of a terminating fraction, else :class:`InputError`."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise InputError(f"{x} has a nonterminating decimal expansion")
    places = max(twos, fives)
    scaled = x.numerator * 10 ** places // x.denominator
    int_part, frac = divmod(scaled, 10 ** places)
    return f"{int_part}" + (f".{frac:0{places}d}" if places else "")


def realize_target(t: DecimalTarget, s_digits=None) -> tuple:
    """``(k, s)`` with ``s`` a :class:`DecimalTarget` in (0, 1).

    ``s = t/k`` is derived exactly when it terminates; otherwise the caller
    supplies ``s_digits`` (a truncated expansion of t/k), which is checked
    against t.
    """
    if t.value < 1 or (t.value == 1 and t.declared_exact):
        raise InputError("realize is for targets t > 1")
    k, s = choose_k(t)
    if s_digits is None:
        if not t.declared_exact:
            raise InputError("t is a truncated expansion; supply digits of s = t/k")
        try:
            text = fraction_to_decimal(s)
        except InputError:
            raise InputError(f"t/k = {t.digits}/{k} does not terminate; supply digits of s") from None
        return k, DecimalTarget(text, True)
    s_target = DecimalTarget.parse(s_digits) if isinstance(s_digits, str) else s_digits
    # both t and s may be truncations: their value ranges must be compatible
    t_hi = t.value + (0 if t.declared_exact else Fraction(1, 10 ** len(t.fraction_digits)))
    s_lo = s_target.value
    s_hi = s_lo + (0 if s_target.declared_exact else Fraction(1, 10 ** len(s_target.fraction_digits)))
    if s_hi < t.value / k or s_lo > t_hi / k or (t.declared_exact and s_target.declared_exact and s_lo != s):
        raise InputError(f"supplied s = {s_target.text()} is not an expansion of t/k with t = {t.text()}, k = {k}")
    return k, s_target

"""Quick invariant suites run by ``subshift check``.

Each suite returns ``(name, passed, detail)``.  Sizes are kept small so the
whole run takes a few seconds; the test suite covers the same ground more
exhaustively.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .blocks import Block, BlockSet, dominated_count, dominated_enumerate, dominates
from .entropy import (check_subadditive, entropy_series, rational_case_check,
                      subordinate_count_fast, theorem3_interval)
from .language import (GapSet, is_factorial, is_prolongable, language_of_point, prune_forbidden,
                       sgap_forbidden, subordinate_closure, suffix_invariant)
from .points import (DecimalTarget, periodic_point, round_up_decimal, squarefree_eta,
                     theorem3_trace, verify_trace)
from .recode import entropy_scaling_check, recode_language
from .sgap import sgap_entropy


def _all_binary(n):
    return [Block(bits, 2) for bits in itertools.product((0, 1), repeat=n)]


def check_domination(max_len=5):
    for n in range(max_len + 1):
        bl = _all_binary(n)
        for u in bl:
            if not dominates(u, u) or len(dominated_enumerate(u)) != dominated_count(u):
                return False, f"reflexivity/count at {u}"
            for v in bl:
                if dominates(u, v) and dominates(v, u) and u != v:
                    return False, f"antisymmetry at {u},{v}"
                if dominates(u, v):
                    for w in bl:
                        if dominates(v, w) and not dominates(u, w):
                            return False, f"transitivity at {u},{v},{w}"
    return True, f"binary lengths <= {max_len}"


def random_binary_language(rng, horizon):
    """Language of a random periodic point: exact, factorial and prolongable."""
    q = rng.randint(1, 6)
    w = Block([rng.randint(0, 1) for _ in range(q)], 2)
    return language_of_point(periodic_point(w), horizon, q + horizon - 1)


def check_closure(rng, trials=20, horizon=6):
    for _ in range(trials):
        lang = random_binary_language(rng, horizon)
        cl = subordinate_closure(lang)
        if subordinate_closure(cl) != cl:
            return False, "closure not idempotent"
        if not (is_factorial(cl) and is_prolongable(cl)):
            return False, "closure lost factorial/prolongable"
        for lv in cl.levels:
            for b in lv:
                if not all(v in lv for v in dominated_enumerate(b)):
                    return False, "closure not downward closed"
    return True, f"{trials} random periodic languages, horizon {horizon}"


def check_fast_count(rng, trials=50, n=8):
    for _ in range(trials):
        idx = [rng.randrange(2 ** n) for _ in range(rng.randint(1, 6))]
        ws = BlockSet.from_indices(n, 2, idx)
        brute = set()
        for b in ws:
            brute |= set(dominated_enumerate(b).indices().tolist())
        if subordinate_count_fast(ws) != len(brute):
            return False, f"mismatch on {sorted(idx)}"
    return True, f"{trials} random window sets, n={n}"


def check_traces(rng, trials=30, depth=4):
    for _ in range(trials):
        digits = "0." + "".join(str(rng.randint(0, 9)) for _ in range(10))
        t = DecimalTarget(digits, True)
        trace = theorem3_trace(t, depth)
        if not all(verify_trace(trace).values()):
            return False, f"trace invariants fail for {digits}"
        for n in range(1, depth + 1):
            s = round_up_decimal(t, n)
            if not 0 <= s - t.value < Fraction(1, 10 ** n):
                return False, f"round-up error bound fails for {digits}, n={n}"
            iv = theorem3_interval(trace, n)
            if not iv.contains(t.value) or iv.width > Fraction(1, 10 ** n):
                return False, f"interval fails for {digits}, n={n}"
    return True, f"{trials} random 10-digit targets, depth {depth}"


def check_languages(horizon=10):
    langs = {"golden mean": prune_forbidden(sgap_forbidden(GapSet.naturals(), horizon), horizon),
             "S={0,2}": prune_forbidden(sgap_forbidden(GapSet.of(0, 2), horizon), horizon),
             "full": prune_forbidden([], horizon, 2)}
    for name, lang in langs.items():
        if not suffix_invariant(lang):
            return False, f"suffix invariance fails for {name}"
        if not check_subadditive(entropy_series(lang, horizon)):
            return False, f"subadditivity fails for {name}"
    return True, ", ".join(langs)


def check_recode():
    gm = prune_forbidden(sgap_forbidden(GapSet.naturals(), 12), 12)
    sx = entropy_series(gm, 12)
    for k in (1, 2, 3):
        sy = entropy_series(recode_language(gm, k), 12 // k)
        if not entropy_scaling_check(sx, sy, k).ok:
            return False, f"count identity fails for k={k}"
    return True, "golden mean, k = 1, 2, 3"


def check_rational(max_q=5):
    for q in range(1, max_q + 1):
        for bits in itertools.product((0, 1), repeat=q):
            if not rational_case_check(Block(bits, 2), 2).ok:
                return False, f"bounds fail for {bits}"
    return True, f"all binary w with |w| <= {max_q}, j <= 2"


def check_sgap():
    gm = sgap_entropy(GapSet.naturals(), 1e-10).entropy_bits
    ok = abs(gm - math.log2((1 + math.sqrt(5)) / 2)) <= 1e-9
    ok &= sgap_entropy(GapSet.of(0)).entropy_bits == 0.0
    ok &= sgap_entropy(GapSet.everything()).entropy_bits == 1.0
    return ok, f"golden mean {gm!r}"


def check_squarefree(n=2000):
    eta = squarefree_eta(n)
    for k in range(1, n + 1):
        sf = all(k % (p * p) for p in range(2, math.isqrt(k) + 1))
        if eta[k - 1] != int(sf):
            return False, f"eta_{k} wrong"
    return True, f"first {n} terms vs trial division"


def run_all(seed: int = 0) -> list:
    rng = random.Random(seed)
    suites = [
        ("domination partial order", check_domination),
        ("subordinate closure", lambda: check_closure(rng)),
        ("fast subordinate count", lambda: check_fast_count(rng)),
        ("construction traces", lambda: check_traces(rng)),
        ("pruned languages", check_languages),
        ("recode counts", check_recode),
        ("periodic subordinate bounds", check_rational),
        ("S-gap solver", check_sgap),
        ("square-free indicator", check_squarefree),
    ]
    results = []
    for name, fn in suites:
        ok, detail = fn()
        results.append((name, bool(ok), detail))
    return results

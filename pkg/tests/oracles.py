"""Brute-force reference implementations, independent of the package code paths."""
import itertools
import math


def all_words(r, n):
    return [tuple(w) for w in itertools.product(range(r), repeat=n)]


def has_factor(word, factor):
    k = len(factor)
    return any(tuple(word[i:i + k]) == tuple(factor) for i in range(len(word) - k + 1))


def avoiding(r, n, forbidden):
    return [w for w in all_words(r, n) if not any(has_factor(w, f) for f in forbidden)]


def below(w):
    """All words dominated by w, by direct filtering of the full cube."""
    r = max(w) + 1 if w else 1
    return {v for v in all_words(r, len(w)) if all(a <= b for a, b in zip(v, w))}


def closure_size(windows):
    out = set()
    for w in windows:
        out |= below(tuple(w))
    return len(out)


def windows(seq, n):
    return {tuple(seq[i:i + n]) for i in range(len(seq) - n + 1)}


def is_squarefree(k):
    p = 2
    while p * p <= k:
        if k % (p * p) == 0:
            return False
        p += 1
    return True


def sgap_f_closed(explicit, tail_from, x, modulus=None, residues=()):
    """Exact value of sum_{j in S} x^(-j-1) with geometric tails summed in closed form."""
    def in_tail(j):
        if tail_from is None or j < tail_from:
            return False
        return modulus is None or j % modulus in residues

    total = math.fsum(x ** (-j - 1) for j in explicit if not in_tail(j))
    if tail_from is not None:
        if modulus is None:
            total += x ** (-tail_from) / (x - 1)
        else:
            for res in residues:
                j0 = tail_from + ((res - tail_from) % modulus)
                total += x ** (-j0 - 1) / (1 - x ** (-modulus))
    return total


def closure_size_binary(windows):
    """Binary closure size by explicit submask enumeration of each window's 1-mask."""
    out = set()
    for w in windows:
        m = int("".join(map(str, w)) or "0", 2)
        sub = m
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & m
    return len(out)

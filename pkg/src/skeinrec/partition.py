"""Young-diagram combinatorics for the skein module basis.

Partitions are tuples of weakly decreasing positive integers; the empty
partition is ().  Provides contents, hooks, the framing exponent kappa,
border-strip addition/removal with height parity, Littlewood-Richardson
coefficients, and the Koike structure constants for products of basis
elements labelled by pairs of partitions.
"""

from __future__ import annotations

from collections import namedtuple
from functools import cache

from .ring import QRational, Scalar


def check_partition(lam) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1)) and \
        all(p > 0 for p in lam)


def conjugate(lam: tuple) -> tuple:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > c) for c in range(lam[0]))


def contents(lam: tuple) -> list:
    """Contents c(box) = col - row over all boxes, row by row."""
    return [c - r for r, p in enumerate(lam) for c in range(p)]


def hooks(lam: tuple) -> list:
    """Hook lengths h(box) in the same order as contents."""
    conj = conjugate(lam)
    return [p - c + conj[c] - r - 1
            for r, p in enumerate(lam) for c in range(p)]


def kappa(lam: tuple) -> int:
    """Framing exponent: 2 * sum of contents = sum lam_i^2 - sum (lam^t)_j^2."""
    return 2 * sum(contents(lam))


def content_poly(lam: tuple, s_exponent: int) -> Scalar:
    """C_lam(q^s_exponent) = sum over boxes of q^(s_exponent * content)."""
    if s_exponent == 0:
        raise ValueError("s_exponent must be nonzero")
    counts = {}
    for c in contents(lam):
        e = s_exponent * c
        counts[e] = counts.get(e, 0) + 1
    return Scalar.from_q(QRational.from_coeffs(counts))


BorderStripResult = namedtuple("BorderStripResult", ["result", "height_parity"])


def border_strips(lam: tuple, n: int, mode: str) -> list:
    """All partitions reachable by adding/removing a length-n border strip.

    A strip move is a single beta-number shift by n; the height parity is
    the parity of the number of rows of the strip minus one, which equals
    the number of beta-numbers jumped over.
    """
    if n <= 0:
        raise ValueError("strip length must be positive")
    if mode not in ("add", "remove"):
        raise ValueError("mode must be add or remove")
    rows = len(lam) + (n if mode == "add" else 0)
    beta = [(lam[i] if i < len(lam) else 0) + (rows - 1 - i)
            for i in range(rows)]
    bset = set(beta)
    out = []
    for b in beta:
        nb = b + n if mode == "add" else b - n
        if nb < 0 or nb in bset:
            continue
        crossed = sum(1 for c in beta if min(b, nb) < c < max(b, nb))
        newbeta = sorted((bset - {b}) | {nb}, reverse=True)
        mu = tuple(newbeta[j] - (rows - 1 - j) for j in range(rows))
        while mu and mu[-1] == 0:
            mu = mu[:-1]
        out.append(BorderStripResult(mu, crossed % 2))
    out.sort(key=lambda r: r.result)
    return out


def partitions(n: int):
    """All partitions of n, largest-part-first lexicographic order."""
    return _partitions_cached(n)


@cache
def _partitions_cached(n: int) -> tuple:
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []
    _gen_partitions(n, n, [], out)
    return tuple(out)


def _gen_partitions(n, maxpart, prefix, out):
    if n == 0:
        out.append(tuple(prefix))
        return
    for p in range(min(n, maxpart), 0, -1):
        prefix.append(p)
        _gen_partitions(n - p, p, prefix, out)
        prefix.pop()


def partitions_upto(n: int):
    """All partitions of size 0..n, by size then lexicographically."""
    for k in range(n + 1):
        yield from partitions(k)


@cache
def lr_coefficient(lam: tuple, mu: tuple, nu: tuple) -> int:
    """Littlewood-Richardson coefficient c^nu_{lam,mu}.

    Counts column-strict fillings of the skew shape nu/lam with content mu
    whose reverse reading word is a lattice word.
    """
    if sum(nu) != sum(lam) + sum(mu):
        return 0
    if len(nu) < len(lam) or any(nu[i] < lam[i] for i in range(len(lam))):
        return 0
    if not mu:
        return 1 if nu == lam else 0
    boxes = []
    for r in range(len(nu)):
        lo = lam[r] if r < len(lam) else 0
        for c in range(nu[r] - 1, lo - 1, -1):
            boxes.append((r, c))
    k = len(mu)
    grid = {}
    count = [0] * (k + 1)

    def rec(idx):
        if idx == len(boxes):
            return 1
        r, c = boxes[idx]
        hi = k
        right = grid.get((r, c + 1))
        if right is not None:
            hi = right
        above = grid.get((r - 1, c))
        lo = above + 1 if above is not None else 1
        total = 0
        for e in range(lo, hi + 1):
            if count[e] >= mu[e - 1]:
                continue
            if e > 1 and count[e] + 1 > count[e - 1]:
                continue
            count[e] += 1
            grid[(r, c)] = e
            total += rec(idx + 1)
            del grid[(r, c)]
            count[e] -= 1
        return total

    return rec(0)


@cache
def _lr_pairs(lam: tuple, rho: tuple) -> tuple:
    """Pairs (alpha, beta) with weight sum_kappa c^lam_{kappa,alpha} c^rho_{kappa,beta}."""
    out = {}
    for ksize in range(min(sum(lam), sum(rho)) + 1):
        for kap in partitions(ksize):
            for alpha in partitions(sum(lam) - ksize):
                c1 = lr_coefficient(kap, alpha, lam)
                if not c1:
                    continue
                for beta in partitions(sum(rho) - ksize):
                    c2 = lr_coefficient(kap, beta, rho)
                    if c2:
                        out[(alpha, beta)] = out.get((alpha, beta), 0) + c1 * c2
    return tuple(sorted(out.items()))


@cache
def koike_coefficient(lam, mub, nu, rhob, sigma, taub) -> int:
    """Structure constant of the product of two-sided basis labels.

    W_{lam,mub} * W_{nu,rhob} = sum M^{sigma,taub} W_{sigma,taub}; M couples
    the positive part of each factor with the negative part of the other
    through cancelling pairs, then recombines with two LR coefficients.
    """
    total = 0
    for (alpha, beta), w1 in _lr_pairs(lam, rhob):
        for (gamma, delta), w2 in _lr_pairs(mub, nu):
            c1 = lr_coefficient(alpha, delta, sigma)
            if not c1:
                continue
            c2 = lr_coefficient(beta, gamma, taub)
            if c2:
                total += w1 * w2 * c1 * c2
    return total

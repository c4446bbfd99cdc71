"""Independent brute-force oracles.  Nothing here imports arrkit."""

from __future__ import annotations

import itertools
from fractions import Fraction


def dense_rank(rows) -> int:
    """Plain Gaussian elimination over Fractions on a list of dense rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# regions of a real line arrangement in the plane

def _side(line, pt) -> int:
    a, b, c = line
    v = a * pt[0] + b * pt[1] - c
    return (v > 0) - (v < 0)


def _meet(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return (Fraction(c1 * b2 - c2 * b1, 1) / det, Fraction(a1 * c2 - a2 * c1, 1) / det)


def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_key(v):
    # sort by angle exactly: half plane first, then by cross-product comparison via slope-like key
    h = _half(v)
    x, y = v
    # within a half plane, angle increases as the direction rotates counterclockwise;
    # use the cotangent (decreasing in angle) with an infinite sentinel for y = 0
    if y == 0:
        return (h, float("-inf"))
    return (h, -Fraction(x) / Fraction(y))


def count_regions(lines) -> int:
    """Number of connected components of R^2 minus the lines a x + b y = c.

    Every region touches an intersection point unless all lines are
    parallel, so it is enough to step off each vertex into every angular
    sector and record the sign vectors seen.
    """
    lines = [tuple(Fraction(t) for t in l) for l in lines]
    if not lines:
        return 1
    vertices = set()
    for l1, l2 in itertools.combinations(lines, 2):
        p = _meet(l1, l2)
        if p is not None:
            vertices.add(p)
    if not vertices:
        return len({(l[2] / l[0] if l[0] else l[2] / l[1]) for l in lines}) + 1
    seen = set()
    for v in vertices:
        through = [l for l in lines if _side(l, v) == 0]
        rays = []
        for a, b, _ in through:
            rays += [(-b, a), (b, -a)]
        rays = sorted(set(rays), key=_angle_key)
        for u, w in zip(rays, rays[1:] + rays[:1]):
            direction = (u[0] + w[0], u[1] + w[1])
            eps = Fraction(1, 8)
            while True:
                pt = (v[0] + eps * direction[0], v[1] + eps * direction[1])
                ok = all(_side(l, pt) == _side(l, v) for l in lines if _side(l, v) != 0)
                if ok:
                    break
                eps /= 8
            seen.add(tuple(_side(l, pt) for l in lines))
    assert all(0 not in s for s in seen)
    return len(seen)


# ---------------------------------------------------------------------------
# Kriz model of two distinct points on P^1, written out by hand

def kriz_p1_k2_betti() -> list:
    """Basis 1, a, b, ab, D, aD (aD = bD, abD = 0); dD = a + b, d(aD) = ab."""
    names = ["1", "a", "b", "ab", "D", "aD"]
    degree = {"1": 0, "a": 2, "b": 2, "ab": 4, "D": 1, "aD": 3}
    diff = {"D": {"a": 1, "b": 1}, "aD": {"ab": 1}}
    betti = []
    for n in range(5):
        src = [x for x in names if degree[x] == n]
        tgt = [x for x in names if degree[x] == n + 1]
        prev = [x for x in names if degree[x] == n - 1]
        d_out = [[diff.get(s, {}).get(t, 0) for s in src] for t in tgt]
        d_in = [[diff.get(s, {}).get(t, 0) for s in prev] for t in src]
        r_out = dense_rank(d_out) if tgt and src else 0
        r_in = dense_rank(d_in) if src and prev else 0
        betti.append(len(src) - r_out - r_in)
    return betti


# ---------------------------------------------------------------------------

def chromatic_poly_brute(n: int, edges, k: int) -> int:
    """Number of proper k-colourings, by enumeration."""
    return sum(1 for c in itertools.product(range(k), repeat=n)
               if all(c[a - 1] != c[b - 1] for a, b in edges))


def moebius_boolean_top(n: int) -> int:
    return (-1) ** n

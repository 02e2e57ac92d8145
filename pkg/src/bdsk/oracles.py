"""Deliberately naive reference implementations used to cross-check the main code.

Nothing here is tuned for speed; each routine follows a definition as
literally as practical and shares no helper logic with the production path
beyond the system data structure itself.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .dynamics import AdmissiblePair, RelativeGBDS
from .snf import IntegerMatrix


# -- integer linear algebra ----------------------------------------------------


def _bezout(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def naive_smith_invariants(m: IntegerMatrix) -> tuple[int, tuple[int, ...]]:
    """Rank and diagonal of the Smith form via Bezout row/column combinations.

    Pivots are the first nonzero entry in row-major order, unlike the
    production code which selects the smallest absolute value.
    """
    a = [list(r) for r in m.entries]
    diag: list[int] = []
    while a and a[0]:
        pos = next(((i, j) for i, r in enumerate(a) for j, x in enumerate(r) if x), None)
        if pos is None:
            break
        i0, j0 = pos
        a[0], a[i0] = a[i0], a[0]
        for r in a:
            r[0], r[j0] = r[j0], r[0]
        while True:
            for i in range(1, len(a)):
                if a[i][0] and a[i][0] % a[0][0] == 0:
                    q = a[i][0] // a[0][0]
                    a[i] = [t - q * s for s, t in zip(a[0], a[i])]
                elif a[i][0]:
                    g, x, y = _bezout(a[0][0], a[i][0])
                    p, q = a[0][0] // g, a[i][0] // g
                    top = [x * s + y * t for s, t in zip(a[0], a[i])]
                    bot = [-q * s + p * t for s, t in zip(a[0], a[i])]
                    a[0], a[i] = top, bot
            for j in range(1, len(a[0])):
                if a[0][j] and a[0][j] % a[0][0] == 0:
                    q = a[0][j] // a[0][0]
                    for r in a:
                        r[j] -= q * r[0]
                elif a[0][j]:
                    g, x, y = _bezout(a[0][0], a[0][j])
                    p, q = a[0][0] // g, a[0][j] // g
                    for r in a:
                        s, t = r[0], r[j]
                        r[0], r[j] = x * s + y * t, -q * s + p * t
            if any(a[i][0] for i in range(1, len(a))):
                continue
            d = a[0][0]
            bad = next((i for i in range(1, len(a)) if any(x % d for x in a[i][1:])), None)
            if bad is None:
                break
            a[0] = [s + t for s, t in zip(a[0], a[bad])]
        diag.append(abs(a[0][0]))
        a = [r[1:] for r in a[1:]]
    return len(diag), tuple(diag)


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by plain Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    width = len(a[0]) if a else 0
    for col in range(width):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][col] != 0:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _minor(a: list[list[int]], rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    sub = [[Fraction(a[i][j]) for j in cols] for i in rows]
    n = len(sub)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if sub[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            sub[c], sub[piv] = sub[piv], sub[c]
            det = -det
        det *= sub[c][c]
        for i in range(c + 1, n):
            f = sub[i][c] / sub[c][c]
            sub[i] = [x - f * y for x, y in zip(sub[i], sub[c])]
    return int(det)


def determinantal_invariants(m: IntegerMatrix) -> tuple[int, ...]:
    """Invariant factors from gcds of minors (exponential; small matrices only)."""
    a = [list(r) for r in m.entries]
    divisors = [1]
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                g = gcd(g, _minor(a, rows, cols))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


# -- Condition (K) ---------------------------------------------------------------


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def _is_power_of(word: tuple[int, ...], root: tuple[int, ...]) -> bool:
    k, r = divmod(len(word), len(root))
    return r == 0 and root * k == word


def condition_k_oracle(n: int, edges: Sequence[tuple[int, int]]) -> tuple[bool, int | None]:
    """Brute-force Condition (K) on a digraph with edges labelled by their index.

    At each vertex ``a`` the return words (all paths ``a -> a``) up to
    length ``2n`` are enumerated.  Condition (K) fails at ``a`` when return
    words exist and all of them are powers of one word.  Length ``2n``
    suffices: a second first-return path, if any, can be chosen of length
    below ``2n``, and two distinct first-return words are never powers of a
    common word.
    """
    limit = 2 * n
    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (s, r) in enumerate(edges):
        out[s].append((k, r))
    for a in range(n):
        # distance to a, for pruning prefixes that cannot close in time
        dist = [None] * n
        dist[a] = 0
        changed = True
        while changed:
            changed = False
            for s, r in edges:
                if dist[r] is not None and (dist[s] is None or dist[r] + 1 < dist[s]):
                    if s != a:
                        dist[s] = dist[r] + 1
                        changed = True
        root: tuple[int, ...] | None = None
        broken = False
        stack: list[tuple[int, tuple[int, ...]]] = [(a, ())]
        while stack and not broken:
            v, word = stack.pop()
            for k, r in out[v]:
                w = word + (k,)
                if r == a:
                    if root is None:
                        root = _primitive_root(w)
                    elif not _is_power_of(w, root):
                        broken = True
                        break
                if dist[r] is not None and len(w) + max(dist[r], 1 if r == a else 0) <= limit:
                    stack.append((r, w))
        if root is not None and not broken:
            return False, a
    return True, None


# -- tails ------------------------------------------------------------------------


def vanishing_tail_orbit(sys: RelativeGBDS, mask: int, within_j: bool) -> bool:
    """Breadth-first search over the elements ``theta_gamma(A)``."""
    seen: set[int] = set()
    frontier = {mask} if mask else set()
    edges: dict[int, set[int]] = {}
    while frontier:
        nxt = set()
        for x in frontier:
            seen.add(x)
            if within_j and x & ~sys.j_top:
                return False
            succ = {sys.theta(label, x) for label in sys.labels} - {0}
            edges[x] = succ
            nxt |= succ
        frontier = nxt - seen
    # the word set is infinite iff some element reaches itself
    for x in seen:
        todo = list(edges[x])
        visited = set()
        while todo:
            y = todo.pop()
            if y == x:
                return False
            if y in visited:
                continue
            visited.add(y)
            todo.extend(edges[y])
    return True


# -- ideals at the level of the definitions ------------------------------------


def _all_submasks(mask: int) -> list[int]:
    return [s for s in range(mask + 1) if s & ~mask == 0]


def brute_force_pairs(sys: RelativeGBDS) -> list[tuple[int, int]]:
    """Admissible pairs checked element by element against the definitions."""
    labels = sys.labels
    top = sys.top_mask
    out = []
    for h in range(top + 1):
        ideal = _all_submasks(h)
        if any(sys.theta(label, x) & ~h for x in ideal for label in labels):
            continue
        saturated = True
        for x in _all_submasks(sys.j_top):
            if x & ~h == 0:
                continue
            if all(sys.theta(label, x) & ~h == 0 for label in labels if sys.theta(label, x)):
                saturated = False
                break
        if not saturated:
            continue
        # B_H: elements whose class is regular in the quotient
        b_h = 0
        for x in range(top + 1):
            regular = all(
                any(sys.theta(label, y) & ~h for label in labels)
                for y in _all_submasks(x & ~h)
                if y
            )
            if regular:
                b_h |= x
        for s in range(top + 1):
            if (h | sys.j_top) & ~s == 0 and s & ~b_h == 0:
                out.append((h, s))
    return sorted(out)


def is_admissible_brute(sys: RelativeGBDS, pair: AdmissiblePair) -> bool:
    return (pair.h_top, pair.s_top) in brute_force_pairs(sys)

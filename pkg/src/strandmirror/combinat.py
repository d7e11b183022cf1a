"""Close subsets, interval partitions, triple overlaps, the complex X(n,k) and gradings."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactlinalg import SparseMatrix, smith_normal_form


@dataclass(frozen=True, order=True)
class SubsetLabel:
    k: int
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError(f"elements {els} not strictly increasing")
        if els and (els[0] < 0 or els[-1] > self.k):
            raise ValueError(f"elements {els} outside [0,{self.k}]")
        if not 1 <= len(els) <= self.k + 1:
            raise ValueError("size must lie in [1, k+1]")
        object.__setattr__(self, "_hash", hash((self.k, els)))

    def __hash__(self):
        return self._hash

    @property
    def n(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, i):
        return i in self.elements

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


def subset(k: int, elements: Iterable[int]) -> SubsetLabel:
    return SubsetLabel(k, tuple(sorted(elements)))


def all_subsets(n: int, k: int) -> list[SubsetLabel]:
    return [SubsetLabel(k, c) for c in combinations(range(k + 1), n)]


@dataclass(frozen=True, order=True)
class IntervalLabel:
    """Closed integer interval [lo, hi]; ``IntervalLabel.EMPTY`` has lo > hi."""

    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def members(self) -> range:
        return range(self.lo, self.hi + 1)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.members())

    def __contains__(self, i):
        return self.lo <= i <= self.hi

    def __len__(self):
        return max(0, self.hi - self.lo + 1)

    def __str__(self):
        return "[]" if self.empty else f"[{self.lo},{self.hi}]"


IntervalLabel.EMPTY = IntervalLabel(1, 0)


def interval_of(s: Iterable[int]) -> IntervalLabel:
    """The interval equal to the set ``s`` (which must be contiguous)."""
    s = sorted(set(s))
    if not s:
        return IntervalLabel.EMPTY
    if s[-1] - s[0] + 1 != len(s):
        raise ValueError(f"{s} is not an interval")
    return IntervalLabel(s[0], s[-1])


def _check_pair(S: SubsetLabel, T: SubsetLabel):
    if S.k != T.k:
        raise ValueError("labels live over different k")
    if S.n != T.n:
        raise ValueError(f"size mismatch {S.n} != {T.n}")


def enumerate_bijections(S: SubsetLabel, T: SubsetLabel) -> list[dict[int, int]]:
    """All bijections g: S -> T with |g(i) - i| <= 1, by backtracking in increasing order."""
    _check_pair(S, T)
    src = S.elements
    tgt = set(T.elements)
    out: list[dict[int, int]] = []
    used: set[int] = set()
    cur: dict[int, int] = {}

    def rec(pos: int):
        if pos == len(src):
            out.append(dict(cur))
            return
        i = src[pos]
        for j in (i - 1, i, i + 1):
            if j in tgt and j not in used:
                used.add(j)
                cur[i] = j
                rec(pos + 1)
                used.discard(j)
                del cur[i]

    rec(0)
    return out


@lru_cache(maxsize=None)
def is_close(S: SubsetLabel, T: SubsetLabel) -> bool:
    _check_pair(S, T)
    # greedy matching in increasing order is exact for this interval structure:
    # take the smallest admissible target still free
    tgt = set(T.elements)
    for i in S.elements:
        for j in (i - 1, i, i + 1):
            if j in tgt:
                tgt.discard(j)
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ClosePartition:
    up_intervals: tuple[IntervalLabel, ...]
    down_intervals: tuple[IntervalLabel, ...]
    fixed: tuple[int, ...]

    def moving_union(self, which: str) -> frozenset[int]:
        ivs = self.up_intervals if which == "up" else self.down_intervals
        return frozenset(i for iv in ivs for i in iv.members())


def partition_from_bijection(g: dict[int, int]) -> ClosePartition:
    """Read off the up/down intervals from a bijection; swaps are discarded.

    A maximal run i, i+1, ..., j-1 with g(t) = t+1 gives the up interval [i, j];
    a maximal run i+1, ..., j with g(t) = t-1 gives the down interval [i, j].
    Adjacent pairs t -> t+1, t+1 -> t are swaps and count as fixed.
    """
    ups: list[IntervalLabel] = []
    downs: list[IntervalLabel] = []
    swapped = {t for t, s in g.items() if s == t + 1 and g.get(t + 1) == t}
    swapped |= {t + 1 for t in swapped}
    shifted_up = sorted(t for t, s in g.items() if s == t + 1 and t not in swapped)
    shifted_down = sorted(t for t, s in g.items() if s == t - 1 and t not in swapped)

    def runs(xs):
        res = []
        for x in xs:
            if res and res[-1][1] == x - 1:
                res[-1][1] = x
            else:
                res.append([x, x])
        return res

    for a, b in runs(shifted_up):
        ups.append(IntervalLabel(a, b + 1))
    for a, b in runs(shifted_down):
        downs.append(IntervalLabel(a - 1, b))
    moving = {i for iv in ups + downs for i in iv.members()}
    fixed = tuple(sorted(t for t in g if t not in moving))
    return ClosePartition(tuple(ups), tuple(downs), fixed)


@lru_cache(maxsize=None)
def close_partition(S: SubsetLabel, T: SubsetLabel) -> ClosePartition:
    """The canonical interval partition of a close pair, computed directly from S and T."""
    _check_pair(S, T)
    if not is_close(S, T):
        raise ValueError(f"{S} and {T} are not close")
    s, t = set(S.elements), set(T.elements)
    # prefix flow: f(c) = |S cap [0,c]| - |T cap [0,c]| is 0, 1 or -1 for a close
    # pair; an up interval is a maximal block where f = 1 plus its right end.
    ups: list[IntervalLabel] = []
    downs: list[IntervalLabel] = []
    flow = 0
    start = None
    for c in range(S.k + 1):
        prev = flow
        flow += (c in s) - (c in t)
        if prev == 0 and flow != 0:
            start = c
        elif prev != 0 and flow == 0:
            (ups if prev > 0 else downs).append(IntervalLabel(start, c))
        elif prev != 0 and flow != 0 and prev != flow:
            raise AssertionError("flow jumped by 2 in a close pair")
    moving = {i for iv in ups + downs for i in iv.members()}
    fixed = tuple(sorted(i for i in s if i not in moving))
    return ClosePartition(tuple(ups), tuple(downs), fixed)


def triple_overlap(S: SubsetLabel, T: SubsetLabel, U: SubsetLabel) -> frozenset[int] | None:
    """Variables i with [i-1, i] inside the overlap set of a composable triple.

    Returns None when S and U are not close, in which case the composite of the
    distinguished generators vanishes.
    """
    if not is_close(S, T) or not is_close(T, U):
        raise ValueError("triple is not composable: consecutive labels must be close")
    if not is_close(S, U):
        return None
    p1 = close_partition(S, T)
    p2 = close_partition(T, U)
    out = set()
    # [i-1, i] must sit inside a single intersection of intervals; adjacent
    # intervals such as [0,1] and [2,3] do not contribute x_2
    for ups, downs in ((p1.up_intervals, p2.down_intervals), (p2.up_intervals, p1.down_intervals)):
        for a in ups:
            for b in downs:
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                out.update(range(lo + 1, hi + 1))
    return frozenset(out)


@dataclass(frozen=True)
class ComplexX:
    n: int
    k: int
    vertices: tuple[SubsetLabel, ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "vertices": [list(v.elements) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "triangles": [list(t) for t in self.triangles],
        }


def build_complex_X(n: int, k: int) -> ComplexX:
    if not 1 <= n <= k + 1:
        raise ValueError("need 1 <= n <= k+1")
    verts = all_subsets(n, k)
    m = len(verts)
    adj = [[False] * m for _ in range(m)]
    edges = []
    for a in range(m):
        for b in range(a + 1, m):
            if is_close(verts[a], verts[b]):
                adj[a][b] = adj[b][a] = True
                edges.append((a, b))
    tris = []
    for a, b in edges:
        for c in range(b + 1, m):
            if adj[a][c] and adj[b][c]:
                tris.append((a, b, c))
    return ComplexX(n, k, tuple(verts), tuple(edges), tuple(sorted(tris)))


def coboundary_matrices(X: ComplexX) -> tuple[SparseMatrix, SparseMatrix]:
    """delta0: C^0 -> C^1 and delta1: C^1 -> C^2 with the standard oriented signs."""
    V, E, T = len(X.vertices), len(X.edges), len(X.triangles)
    eidx = {e: i for i, e in enumerate(X.edges)}
    d0 = SparseMatrix.build(E, V, [t for i, (a, b) in enumerate(X.edges) for t in ((i, b, 1), (i, a, -1))])
    items = []
    for r, (a, b, c) in enumerate(X.triangles):
        items += [(r, eidx[(b, c)], 1), (r, eidx[(a, c)], -1), (r, eidx[(a, b)], 1)]
    d1 = SparseMatrix.build(T, E, items)
    return d0, d1


def h1_of_X(X: ComplexX) -> tuple[int, list[int]]:
    """(betti_1, torsion) of H^1(X; Z)."""
    d0, d1 = coboundary_matrices(X)
    s0 = smith_normal_form(d0)
    s1 = smith_normal_form(d1)
    betti = len(X.edges) - s1.rank - s0.rank
    return betti, s0.torsion()


@dataclass
class GradingSolution:
    n: int
    k: int
    d_vars: tuple
    d_pairs: dict[tuple[SubsetLabel, SubsetLabel], object]

    def degree(self, S: SubsetLabel, T: SubsetLabel):
        return self.d_pairs[(S, T)]


def ordered_close_pairs(X: ComplexX) -> list[tuple[SubsetLabel, SubsetLabel]]:
    out = [(v, v) for v in X.vertices]
    for a, b in X.edges:
        out += [(X.vertices[a], X.vertices[b]), (X.vertices[b], X.vertices[a])]
    return sorted(out)


def ordered_triangles(X: ComplexX) -> list[tuple[SubsetLabel, SubsetLabel, SubsetLabel]]:
    """All ordered triples (S, T, U), repetitions allowed, that are pairwise close."""
    nbr: dict[SubsetLabel, list[SubsetLabel]] = {v: [v] for v in X.vertices}
    for a, b in X.edges:
        nbr[X.vertices[a]].append(X.vertices[b])
        nbr[X.vertices[b]].append(X.vertices[a])
    out = []
    for S in X.vertices:
        for T in nbr[S]:
            for U in nbr[T]:
                if U in nbr[S]:
                    out.append((S, T, U))
    return out


def spanning_tree(X: ComplexX) -> list[tuple[SubsetLabel, SubsetLabel]]:
    """Breadth-first tree edges (parent, child) from the lexicographically smallest vertex."""
    if not X.vertices:
        return []
    nbr: dict[int, list[int]] = {i: [] for i in range(len(X.vertices))}
    for a, b in X.edges:
        nbr[a].append(b)
        nbr[b].append(a)
    root = min(range(len(X.vertices)), key=lambda i: X.vertices[i])
    seen = {root}
    q = deque([root])
    tree = []
    while q:
        a = q.popleft()
        for b in sorted(nbr[a], key=lambda i: X.vertices[i]):
            if b not in seen:
                seen.add(b)
                tree.append((X.vertices[a], X.vertices[b]))
                q.append(b)
    if len(seen) != len(X.vertices):
        raise ValueError("X is disconnected")
    return tree


def _solve_unit_gradings(X: ComplexX) -> dict[tuple[SubsetLabel, SubsetLabel], tuple[int, ...]]:
    """For each ordered close pair, the integer vector c with d_pairs = <c, d_vars>.

    Unknowns are the d_pairs; equations are the triangle identities, d(S,S) = 0
    and d = 0 on forward tree edges.  The right-hand side is solved for all k
    unit vectors d_vars = e_j at once by sparse exact elimination.
    """
    k = X.k
    pairs = ordered_close_pairs(X)
    idx = {p: i for i, p in enumerate(pairs)}
    eqs: list[tuple[dict[int, Fraction], list[Fraction]]] = []
    zero = [Fraction(0)] * k
    for S in X.vertices:
        eqs.append(({idx[(S, S)]: Fraction(1)}, list(zero)))
    for P, C in spanning_tree(X):
        eqs.append(({idx[(P, C)]: Fraction(1)}, list(zero)))
    for S, T, U in ordered_triangles(X):
        over = triple_overlap(S, T, U)
        row: dict[int, Fraction] = {}
        for key, c in (((S, T), 1), ((T, U), 1), ((S, U), -1)):
            j = idx[key]
            row[j] = row.get(j, 0) + c
        row = {j: Fraction(v) for j, v in row.items() if v}
        rhs = [Fraction(1 if i + 1 in over else 0) for i in range(k)]
        eqs.append((row, rhs))

    pivots: dict[int, tuple[dict[int, Fraction], list[Fraction]]] = {}
    for row, rhs in sorted(eqs, key=lambda e: len(e[0])):
        row, rhs = dict(row), list(rhs)
        while row:
            lead = min(row)
            if lead not in pivots:
                f = row[lead]
                pivots[lead] = ({j: v / f for j, v in row.items()}, [v / f for v in rhs])
                break
            prow, prhs = pivots[lead]
            f = row[lead]
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            rhs = [a - f * b for a, b in zip(rhs, prhs)]
        else:
            if any(rhs):
                raise ArithmeticError("grading system is inconsistent")
    if len(pivots) != len(pairs):
        raise ArithmeticError("grading system is underdetermined (H^1(X) != 0?)")
    sol: dict[int, list[Fraction]] = {}
    for lead in sorted(pivots, reverse=True):
        prow, prhs = pivots[lead]
        val = list(prhs)
        for j, v in prow.items():
            if j != lead:
                val = [a - v * b for a, b in zip(val, sol[j])]
        sol[lead] = val
    out = {}
    for p, i in idx.items():
        if any(v.denominator != 1 for v in sol[i]):
            raise ArithmeticError("non-integral grading solution")
        out[p] = tuple(int(v) for v in sol[i])
    return out


_UNIT_CACHE: dict[tuple[int, int], dict] = {}


def unit_gradings(n: int, k: int) -> dict[tuple[SubsetLabel, SubsetLabel], tuple[int, ...]]:
    key = (n, k)
    if key not in _UNIT_CACHE:
        _UNIT_CACHE[key] = _solve_unit_gradings(build_complex_X(n, k))
    return _UNIT_CACHE[key]


def solve_grading(n: int, k: int, d_vars: Sequence[int] | None = None) -> GradingSolution:
    """Integer gradings d_pairs compatible with deg x_i = d_vars[i-1]."""
    d_vars = tuple(int(d) for d in (d_vars if d_vars is not None else [0] * k))
    if len(d_vars) != k:
        raise ValueError(f"need {k} variable degrees, got {len(d_vars)}")
    units = unit_gradings(n, k)
    pairs = {p: sum(c * d for c, d in zip(cv, d_vars)) for p, cv in units.items()}
    return GradingSolution(n, k, d_vars, pairs)


def check_grading(sol: GradingSolution, add=lambda a, b: a + b, eq=lambda a, b: a == b) -> list:
    """Triangle identities violated by ``sol`` (empty list when consistent)."""
    X = build_complex_X(sol.n, sol.k)
    bad = []
    for S, T, U in ordered_triangles(X):
        over = triple_overlap(S, T, U)
        lhs = add(sol.d_pairs[(S, T)], sol.d_pairs[(T, U)])
        rhs = sol.d_pairs[(S, U)]
        for i in sorted(over):
            rhs = add(rhs, sol.d_vars[i - 1])
        if not eq(lhs, rhs):
            bad.append((S, T, U))
    for S in X.vertices:
        if not eq(sol.d_pairs[(S, S)], add(sol.d_pairs[(S, S)], sol.d_pairs[(S, S)])):
            bad.append((S, S, S))
    return bad

"""A-side morphism complexes between products of arcs in a punctured disk.

Arcs L_0..L_k sit in a chain; interior puncture p (1 <= p <= k) lies between
L_{p-1} and L_p and carries the chords u_p: L_{p-1} -> L_p and
v_p: L_p -> L_{p-1}.  The exterior puncture carries no letters.

A basis element is stored per *slot*: every arc a of the source label S
records ``(p, l)``, the puncture its boundary path winds around and the number
of letters, with ``(0, 0)`` for an idle strand.  A path of length l starting on
L_{p-1} alternates u, v, u, ... and ends on L_p when l is odd, back on L_{p-1}
when l is even (similarly from L_p).  This data is equivalent to the local
normal forms: at a puncture where both arcs are present and neither strand
leaves through its other end, the pair of lengths (l_left, l_right) is

    a^m c^n = (2m+n, n),   b^m c^n = (n, 2m+n),   c^n = (n, n).

Every other puncture carries at most one path: a loop (u v)^m / (v u)^m or a
chord u(vu)^m / v(uv)^m.

Products are written left to right in the order of travel: ``multiply(f, g)``
is "f, then g" (the composite g o f).  Signs are Koszul signs for the tensor
factors ordered by puncture, with local degree the exponent of c.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

from .combinat import (
    GradingSolution,
    SubsetLabel,
    all_subsets,
    close_partition,
    is_close,
    solve_grading,
)
from .exactlinalg import QQ, Field, SparseMatrix, rank

DEFAULT_WMAX = 6

Slot = tuple[int, int]  # (puncture, letter count); (0, 0) = idle


# ---------------------------------------------------------------- local forms


@dataclass(frozen=True, order=True)
class LocalMonomial:
    """One puncture's piece of a basis element.

    shape: ``A``/``B``/``C`` two-strand normal forms a^m c^n, b^m c^n, c^n;
    ``lL`` loop (u v)^m on the left end of L_p; ``lR`` loop (v u)^m on the
    right end of L_{p-1}; ``uL`` chord u(vu)^m leaving L_{p-1}; ``uR`` chord
    v(uv)^m leaving L_p.
    """

    p: int
    shape: str
    m: int
    n: int = 0

    @property
    def degree(self) -> int:
        return self.n if self.shape in ("A", "B", "C") else 0

    def to_json(self) -> dict:
        return {"p": self.p, "shape": self.shape, "m": self.m, "n": self.n}


def two_strand_form(l1: int, l2: int) -> tuple[str, int, int]:
    """(kind, m, n) of the two-strand element with lengths (l1, l2)."""
    if (l1 - l2) % 2:
        raise ValueError("two-strand lengths must have equal parity")
    if l1 > l2:
        return "A", (l1 - l2) // 2, l2
    if l2 > l1:
        return "B", (l2 - l1) // 2, l1
    return "C", 0, l1


def two_strand_lengths(kind: str, m: int, n: int) -> tuple[int, int]:
    if kind == "A":
        return 2 * m + n, n
    if kind == "B":
        return n, 2 * m + n
    return n, n


def _slot_target(a: int, p: int, l: int) -> int:
    if l % 2 == 0:
        return a
    return p if a == p - 1 else p - 1


# ---------------------------------------------------------------- generators


@dataclass(frozen=True, order=True)
class StrandGenerator:
    source: SubsetLabel
    target: SubsetLabel
    slots: tuple[Slot, ...]

    def slot_of(self, arc: int) -> Slot:
        return self.slots[self.source.elements.index(arc)]

    def bijection(self) -> dict[int, int]:
        return {a: _slot_target(a, p, l) for a, (p, l) in zip(self.source.elements, self.slots)}

    def multidegree(self) -> tuple[int, ...]:
        w = [0] * self.source.k
        for p, l in self.slots:
            if l:
                w[p - 1] += l
        return tuple(w)

    def local_data(self) -> dict[int, tuple]:
        return _local_data(self.source.elements, self.slots)

    def locals(self) -> dict[int, LocalMonomial]:
        out = {}
        for p, (two, l1, l2) in sorted(self.local_data().items()):
            if two:
                kind, m, n = two_strand_form(l1, l2)
                out[p] = LocalMonomial(p, kind, m, n)
            elif l1:
                out[p] = LocalMonomial(p, "lR" if l1 % 2 == 0 else "uL", l1 // 2)
            else:
                out[p] = LocalMonomial(p, "lL" if l2 % 2 == 0 else "uR", l2 // 2)
        return out

    def c_degree(self) -> int:
        return sum(_local_degrees(self.source.elements, self.slots).values())

    def to_json(self) -> list:
        return [lm.to_json() for lm in self.locals().values()]


@lru_cache(maxsize=1 << 18)
def _local_data(src: tuple[int, ...], slots: tuple[Slot, ...]) -> dict[int, tuple[bool, int, int]]:
    """{p: (two_strand, l_left, l_right)} for punctures carrying letters."""
    where = dict(zip(src, slots))
    out = {}
    for p in sorted({p for p, l in slots if l}):
        left, right = where.get(p - 1), where.get(p)
        l1 = left[1] if left is not None and left[0] == p else 0
        l2 = right[1] if right is not None and right[0] == p else 0
        two = (
            left is not None
            and right is not None
            and left[0] in (0, p)
            and right[0] in (0, p)
        )
        out[p] = (two, l1, l2)
    return out


def _local_degrees(src, slots) -> dict[int, int]:
    return {p: min(l1, l2) for p, (two, l1, l2) in _local_data(src, slots).items() if two and min(l1, l2)}


def is_valid_generator(S: SubsetLabel, T: SubsetLabel, slots: Sequence[Slot]) -> bool:
    if len(slots) != S.n:
        return False
    seen = set()
    for a, (p, l) in zip(S.elements, slots):
        if l < 0 or (l == 0) != (p == 0):
            return False
        if l and (p not in (a, a + 1) or not 1 <= p <= S.k):
            return False
        t = _slot_target(a, p, l)
        if t in seen:
            return False
        seen.add(t)
    return seen == set(T.elements)


def _enumerate_slots(S: SubsetLabel, T: SubsetLabel, caps: Sequence[int], exact: bool):
    """Slot tuples for S -> T with letters per puncture <= caps (== caps if exact)."""
    k = S.k
    src = S.elements
    tgt = set(T.elements)
    used = [0] * (k + 2)
    taken: set[int] = set()
    cur: list[Slot] = []
    out: list[tuple[Slot, ...]] = []

    def rec(i: int):
        if i == len(src):
            if not exact or all(used[p] == caps[p - 1] for p in range(1, k + 1)):
                out.append(tuple(cur))
            return
        a = src[i]
        options: list[Slot] = [(0, 0)]
        for p in (a, a + 1):
            if 1 <= p <= k:
                options += [(p, l) for l in range(1, caps[p - 1] - used[p] + 1)]
        for p, l in options:
            t = _slot_target(a, p, l) if l else a
            if t not in tgt or t in taken:
                continue
            used[p] += l
            taken.add(t)
            cur.append((p, l))
            # a puncture to the left of every remaining slot can no longer grow
            ok = True
            if exact:
                nxt = src[i + 1] if i + 1 < len(src) else k + 2
                for q in range(1, min(nxt, k + 1)):
                    if used[q] != caps[q - 1]:
                        ok = False
                        break
            if ok:
                rec(i + 1)
            cur.pop()
            taken.discard(t)
            used[p] -= l

    rec(0)
    return out


def _check_bound(w: Sequence[int], bound: int | None):
    if bound is not None and any(x > bound for x in w):
        raise ValueError(f"multidegree {tuple(w)} exceeds the bound {bound}")


def hom_basis(S: SubsetLabel, T: SubsetLabel, w: Sequence[int], bound: int | None = DEFAULT_WMAX) -> list[StrandGenerator]:
    """Basis of the morphism complex from L_S to L_T in multidegree w."""
    if S.k != T.k or S.n != T.n:
        raise ValueError("labels must share k and size")
    w = tuple(w)
    if len(w) != S.k or any(x < 0 for x in w):
        raise ValueError("bad multidegree")
    _check_bound(w, bound)
    if not is_close(S, T):
        return []
    return sorted(StrandGenerator(S, T, s) for s in _enumerate_slots(S, T, w, exact=True))


def basis_upto(S: SubsetLabel, T: SubsetLabel, wmax: int) -> dict[tuple[int, ...], list[StrandGenerator]]:
    """All basis elements with every w_i <= wmax, grouped by multidegree."""
    out: dict[tuple[int, ...], list[StrandGenerator]] = {}
    if not is_close(S, T):
        return out
    for s in _enumerate_slots(S, T, [wmax] * S.k, exact=False):
        g = StrandGenerator(S, T, s)
        out.setdefault(g.multidegree(), []).append(g)
    for v in out.values():
        v.sort()
    return dict(sorted(out.items()))


# ---------------------------------------------------------------- elements


@dataclass
class MorElement:
    source: SubsetLabel
    target: SubsetLabel
    terms: dict[tuple[Slot, ...], int] = dc_field(default_factory=dict)

    @classmethod
    def of(cls, g: StrandGenerator, c: int = 1) -> "MorElement":
        return cls(g.source, g.target, {g.slots: c} if c else {})

    @classmethod
    def identity(cls, S: SubsetLabel) -> "MorElement":
        return cls(S, S, {tuple((0, 0) for _ in S.elements): 1})

    def generators(self) -> list[tuple[StrandGenerator, int]]:
        return [(StrandGenerator(self.source, self.target, s), c) for s, c in sorted(self.terms.items())]

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "MorElement", scale: int = 1) -> "MorElement":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("cannot add elements of different hom spaces")
        out = dict(self.terms)
        for s, c in other.terms.items():
            v = out.get(s, 0) + scale * c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return MorElement(self.source, self.target, out)

    def scaled(self, c: int) -> "MorElement":
        return MorElement(self.source, self.target, {s: c * v for s, v in self.terms.items()} if c else {})

    def __eq__(self, other):
        return (
            isinstance(other, MorElement)
            and (self.source, self.target) == (other.source, other.target)
            and self.terms == other.terms
        )

    def to_json(self) -> dict:
        return {
            "source": list(self.source.elements),
            "target": list(self.target.elements),
            "terms": [[g.to_json(), c] for g, c in self.generators()],
        }


# ---------------------------------------------------------------- differential


def _diff_slots(src, slots) -> list[tuple[int, tuple[Slot, ...]]]:
    out = []
    data = _local_data(src, slots)
    sign = 1
    pos = {a: i for i, a in enumerate(src)}
    for p in sorted(data):
        two, l1, l2 = data[p]
        if not two:
            continue
        kind, m, n = two_strand_form(l1, l2)
        if kind != "C":
            s = sign if kind == "A" else -sign
            if m == 1:
                new = [(n + 1, n + 1)]
            else:
                new = [two_strand_lengths("A", m - 1, n + 1), two_strand_lengths("B", m - 1, n + 1)]
            for nl1, nl2 in new:
                lst = list(slots)
                lst[pos[p - 1]] = (p, nl1)
                lst[pos[p]] = (p, nl2)
                out.append((s, tuple(lst)))
        if n % 2:
            sign = -sign
    return out


def differential(x: MorElement) -> MorElement:
    out: dict[tuple[Slot, ...], int] = {}
    src = x.source.elements
    for slots, c in x.terms.items():
        for s, new in _diff_slots(src, slots):
            v = out.get(new, 0) + s * c
            if v:
                out[new] = v
            else:
                out.pop(new, None)
    return MorElement(x.source, x.target, out)


# ---------------------------------------------------------------- product


def _mul_slots(S: SubsetLabel, mid: SubsetLabel, xs: tuple[Slot, ...], ys: tuple[Slot, ...]):
    """(sign, slots) of "xs then ys", or None when the composite vanishes."""
    src = S.elements
    msrc = mid.elements
    mpos = {a: i for i, a in enumerate(msrc)}
    res = []
    for a, (p1, l1) in zip(src, xs):
        b = _slot_target(a, p1, l1)
        p2, l2 = ys[mpos[b]]
        if l1 and l2:
            if p1 != p2:
                return None
            res.append((p1, l1 + l2))
        elif l1:
            res.append((p1, l1))
        else:
            res.append((p2, l2))
    dx = _local_data(src, xs)
    dy = _local_data(msrc, ys)
    # two-strand rewriting: a^i c^j . (b or a)^r c^s vanishes on an a/b clash
    for p in dx.keys() & dy.keys():
        twox, a1, a2 = dx[p]
        twoy, b1, b2 = dy[p]
        if not (twox and twoy):
            continue
        k1, m1, n1 = two_strand_form(a1, a2)
        k2, m2, n2 = two_strand_form(b1, b2)
        if n1 % 2 and k2 != "C":
            k2 = "B" if k2 == "A" else "A"
        if m1 and m2 and k1 != k2:
            return None
    degx = {p: min(l1, l2) for p, (two, l1, l2) in dx.items() if two}
    degy = {p: min(l1, l2) for p, (two, l1, l2) in dy.items() if two}
    odd = 0
    for q, dq in degx.items():
        if dq % 2:
            odd += sum(dp for p, dp in degy.items() if p < q)
    return (-1 if odd % 2 else 1), tuple(res)


def multiply(f: MorElement, g: MorElement) -> MorElement:
    """f then g (the composite g o f)."""
    if f.target != g.source:
        raise ValueError(f"not composable: {f.target} != {g.source}")
    out: dict[tuple[Slot, ...], int] = {}
    for xs, a in f.terms.items():
        for ys, b in g.terms.items():
            r = _mul_slots(f.source, f.target, xs, ys)
            if r is None:
                continue
            s, new = r
            v = out.get(new, 0) + s * a * b
            if v:
                out[new] = v
            else:
                out.pop(new, None)
    return MorElement(f.source, g.target, out)


# ---------------------------------------------------------------- gradings


@lru_cache(maxsize=None)
def f_multidegree(S: SubsetLabel, T: SubsetLabel) -> tuple[int, ...]:
    part = close_partition(S, T)
    w = [0] * S.k
    for iv in part.up_intervals + part.down_intervals:
        for p in range(iv.lo + 1, iv.hi + 1):
            w[p - 1] = 1
    return tuple(w)


def coh_degree(gen: StrandGenerator, grading: GradingSolution | None = None) -> int:
    """Exponent of c summed over punctures, plus the grading shift of (S, S', w).

    With variable degrees d_i the shift is d_{S,S'} + sum_i d_i (w_i - m_i)/2
    where m is the multidegree of f_{S,S'}; for d = 0 it is just d_{S,S'}.
    """
    base = gen.c_degree()
    if grading is None:
        return base
    return base + degree_shift(gen.source, gen.target, gen.multidegree(), grading)


def degree_shift(S: SubsetLabel, T: SubsetLabel, w: Sequence[int], grading: GradingSolution) -> int:
    m = f_multidegree(S, T)
    extra = 0
    for d, wi, mi in zip(grading.d_vars, w, m):
        if (wi - mi) % 2:
            raise ValueError("multidegree has the wrong parity for this pair")
        extra += d * (wi - mi) // 2
    return grading.d_pairs[(S, T)] + extra


# ---------------------------------------------------------------- complexes


@dataclass
class GradedComplex:
    source: SubsetLabel
    target: SubsetLabel
    w: tuple[int, ...]
    basis: dict[int, list[StrandGenerator]]
    diffs: dict[int, SparseMatrix]  # degree d -> matrix from basis[d] to basis[d+1]

    def homology(self, field: Field = QQ) -> dict[int, int]:
        out = {}
        for d, gens in self.basis.items():
            r_out = rank(self.diffs[d], field) if d in self.diffs else 0
            r_in = rank(self.diffs[d - 1], field) if d - 1 in self.diffs else 0
            h = len(gens) - r_out - r_in
            if h:
                out[d] = h
        return out

    def to_json(self) -> dict:
        return {
            "source": list(self.source.elements),
            "target": list(self.target.elements),
            "multidegree": list(self.w),
            "basis": {str(d): [g.to_json() for g in gs] for d, gs in sorted(self.basis.items())},
            "differential": {
                str(d): [[r, c, int(v)] for r, c, v in m.triples()] for d, m in sorted(self.diffs.items())
            },
        }


def build_complex(gens: list[StrandGenerator], S, T, w, shift: int = 0) -> GradedComplex:
    basis: dict[int, list[StrandGenerator]] = {}
    for g in gens:
        basis.setdefault(g.c_degree() + shift, []).append(g)
    index = {d: {g.slots: i for i, g in enumerate(gs)} for d, gs in basis.items()}
    diffs = {}
    src = S.elements
    for d, gs in basis.items():
        if d + 1 not in basis:
            for g in gs:
                if _diff_slots(src, g.slots):
                    # differential must land in degree d+1 of the same multidegree
                    acc = {}
                    for s, new in _diff_slots(src, g.slots):
                        acc[new] = acc.get(new, 0) + s
                    if any(acc.values()):
                        raise AssertionError("differential leaves the basis")
            continue
        tgt = index[d + 1]
        items = []
        for c, g in enumerate(gs):
            for s, new in _diff_slots(src, g.slots):
                items.append((tgt[new], c, s))
        diffs[d] = SparseMatrix.build(len(basis[d + 1]), len(gs), items)
    return GradedComplex(S, T, tuple(w), dict(sorted(basis.items())), diffs)


def graded_complex(S, T, w, grading: GradingSolution | None = None, bound: int | None = DEFAULT_WMAX) -> GradedComplex:
    gens = hom_basis(S, T, w, bound)
    shift = degree_shift(S, T, w, grading) if (grading is not None and gens) else 0
    return build_complex(gens, S, T, w, shift)


def cohomology(S, T, w, field: Field = QQ, grading: GradingSolution | None = None, bound: int | None = DEFAULT_WMAX) -> dict[int, int]:
    return graded_complex(S, T, w, grading, bound).homology(field)


def cohomology_table(S, T, wmax: int, field: Field = QQ, grading: GradingSolution | None = None) -> dict[tuple[int, ...], dict[int, int]]:
    """Nonzero cohomology of every multidegree piece with w_i <= wmax."""
    out = {}
    for w, gens in basis_upto(S, T, wmax).items():
        shift = degree_shift(S, T, w, grading) if grading is not None else 0
        h = build_complex(gens, S, T, w, shift).homology(field)
        if h:
            out[w] = h
    return out


# ---------------------------------------------------------------- oracle


def _runs(xs: Iterable[int]) -> list[tuple[int, int]]:
    res: list[list[int]] = []
    for x in sorted(xs):
        if res and res[-1][1] == x - 1:
            res[-1][1] = x
        else:
            res.append([x, x])
    return [tuple(r) for r in res]


@lru_cache(maxsize=None)
def algebra_factors(S: SubsetLabel, T: SubsetLabel) -> tuple[tuple[tuple[int, ...], bool], ...]:
    """The tensor factors of A(S, T): (variables, has_product_relation)."""
    part = close_partition(S, T)
    k = S.k
    out = []
    for i, j in _runs(part.fixed):
        if i > 0 and j < k:
            out.append((tuple(range(i, j + 2)), True))
        elif i == 0 and j < k:
            out.append((tuple(range(1, j + 2)), False))
        elif i > 0 and j == k:
            out.append((tuple(range(i, k + 1)), False))
        else:
            # S = [0,k] (n = k+1): no outer variables and no relation
            out.append((tuple(range(1, k + 1)), False))
    for iv in part.up_intervals + part.down_intervals:
        out.append((tuple(range(iv.lo + 1, iv.hi + 1)), False))
    return tuple(out)


def oracle_exponent(S: SubsetLabel, T: SubsetLabel, w: Sequence[int]) -> tuple[int, ...] | None:
    """The unique alpha with x^alpha f_{S,T} nonzero in multidegree w, if any."""
    if not is_close(S, T):
        return None
    m = f_multidegree(S, T)
    alpha = []
    for wi, mi in zip(w, m):
        if wi < mi or (wi - mi) % 2:
            return None
        alpha.append((wi - mi) // 2)
    return alpha_if_nonzero(S, T, alpha)


def alpha_if_nonzero(S, T, alpha) -> tuple[int, ...] | None:
    factors = algebra_factors(S, T)
    present = {v for vs, _ in factors for v in vs}
    for i, a in enumerate(alpha, start=1):
        if a and i not in present:
            return None
    for vs, rel in factors:
        if rel and all(alpha[v - 1] >= 1 for v in vs):
            return None
    return tuple(alpha)


def oracle_rank(S: SubsetLabel, T: SubsetLabel, w: Sequence[int]) -> int:
    return 0 if oracle_exponent(S, T, w) is None else 1


def oracle_table(S, T, wmax: int) -> dict[tuple[int, ...], int]:
    out = {}
    if not is_close(S, T):
        return out
    for w in iproduct(range(wmax + 1), repeat=S.k):
        if oracle_rank(S, T, w):
            out[w] = 1
    return out


# ---------------------------------------------------------------- distinguished cocycles


def x_cocycle(S: SubsetLabel, i: int) -> MorElement:
    """Representative of x_i in End(L_S); zero when x_i is not a variable of A(S,S)."""
    src = S.elements
    idle = [(0, 0)] * S.n
    left, right = i - 1 in S, i in S
    out = MorElement(S, S)
    for arc, present in ((i - 1, left), (i, right)):
        if present:
            lst = list(idle)
            lst[src.index(arc)] = (i, 2)
            out.terms[tuple(lst)] = 1
    return out


def f_cocycle(S: SubsetLabel, T: SubsetLabel) -> MorElement:
    """The distinguished generator f_{S,T}: u-chords on up intervals, v-chords on down ones."""
    part = close_partition(S, T)
    src = S.elements
    slots = [(0, 0)] * S.n
    for iv in part.up_intervals:
        for t in range(iv.lo, iv.hi):
            slots[src.index(t)] = (t + 1, 1)
    for iv in part.down_intervals:
        for t in range(iv.lo + 1, iv.hi + 1):
            slots[src.index(t)] = (t, 1)
    return MorElement(S, T, {tuple(slots): 1})


class DistinguishedReps:
    """Cached chain-level representatives x^alpha . f_{S,T}."""

    def __init__(self, k: int):
        self.k = k
        self._cache: dict = {}

    def x_power(self, S: SubsetLabel, alpha: tuple[int, ...]) -> MorElement:
        key = ("x", S, alpha)
        if key in self._cache:
            return self._cache[key]
        if not any(alpha):
            res = MorElement.identity(S)
        else:
            i = max(j for j, a in enumerate(alpha) if a)
            lower = list(alpha)
            lower[i] -= 1
            res = multiply(self.x_power(S, tuple(lower)), x_cocycle(S, i + 1))
        self._cache[key] = res
        return res

    def rep(self, S: SubsetLabel, T: SubsetLabel, alpha: tuple[int, ...]) -> MorElement:
        key = ("r", S, T, alpha)
        if key not in self._cache:
            self._cache[key] = multiply(self.x_power(S, alpha), f_cocycle(S, T))
        return self._cache[key]


def distinguished_cocycles(S: SubsetLabel, T: SubsetLabel) -> dict:
    """{"x": {i: rep} (only when S == T), "f": f_{S,T}}."""
    if not is_close(S, T):
        raise ValueError(f"{S} and {T} are not close")
    out = {"f": f_cocycle(S, T)}
    if S == T:
        out["x"] = {i: x_cocycle(S, i) for i in range(1, S.k + 1)}
    return out


@lru_cache(maxsize=None)
def distinguished_basis(S, T, wmax: int) -> tuple[tuple[int, ...], ...]:
    """Exponents alpha of the nonzero x^alpha f_{S,T} with multidegree <= wmax."""
    m = f_multidegree(S, T)
    ranges = [range((wmax - mi) // 2 + 1) for mi in m]
    out = []
    for alpha in iproduct(*ranges):
        if alpha_if_nonzero(S, T, alpha) is not None:
            out.append(tuple(alpha))
    return tuple(out)


class ClosureError(AssertionError):
    """A product of distinguished representatives left their span."""


def structure_constants(n: int, k: int, wmax: int, grading: GradingSolution | None = None, reps: DistinguishedReps | None = None):
    """Chain-level products of the distinguished representatives.

    Keys (S, T, alpha, U, beta); values (gamma, coefficient) with coefficient 0
    when the product vanishes.  Only products whose multidegree stays within
    wmax are tabulated.
    """
    reps = reps or DistinguishedReps(k)
    objs = all_subsets(n, k)
    table = {}
    for S in objs:
        for T in objs:
            if not is_close(S, T):
                continue
            for U in objs:
                if not is_close(T, U):
                    continue
                for key, val in product_entries(S, T, U, wmax, reps):
                    table[key] = val
    return table


def iter_products(S, T, U, wmax: int, reps: DistinguishedReps):
    """Yield (alpha, beta, w, product) for distinguished basis pairs whose product stays within wmax."""
    m_st, m_tu = f_multidegree(S, T), f_multidegree(T, U)
    m_sum = tuple(x + y for x, y in zip(m_st, m_tu))
    betas = [(b, tuple(2 * x for x in b), reps.rep(T, U, b)) for b in distinguished_basis(T, U, wmax)]
    for alpha in distinguished_basis(S, T, wmax):
        room = tuple(wmax - 2 * a - m for a, m in zip(alpha, m_sum))
        if min(room) < 0:
            continue
        left = reps.rep(S, T, alpha)
        base = tuple(2 * a + m for a, m in zip(alpha, m_sum))
        for beta, beta2, right in betas:
            if any(b > r for b, r in zip(beta2, room)):
                continue
            w = tuple(x + y for x, y in zip(base, beta2))
            yield alpha, beta, w, multiply(left, right)


def product_entries(S, T, U, wmax: int, reps: DistinguishedReps):
    close_su = is_close(S, U)
    for alpha, beta, w, prod in iter_products(S, T, U, wmax, reps):
        if prod.is_zero():
            yield (S, T, alpha, U, beta), (None, 0)
            continue
        if not close_su:
            raise ClosureError("nonzero product between labels that are not close")
        gamma = oracle_exponent(S, U, w)
        if gamma is None:
            raise ClosureError(f"product {S}->{T}->{U} {alpha},{beta} is nonzero but A(S,U) vanishes in {w}")
        target = reps.rep(S, U, gamma)
        coeff = _proportional(prod, target)
        if coeff is None:
            raise ClosureError(f"product {S}->{T}->{U} {alpha},{beta} is not a multiple of x^{gamma} f")
        yield (S, T, alpha, U, beta), (gamma, coeff)


def _proportional(x: MorElement, y: MorElement):
    if y.is_zero() or set(x.terms) != set(y.terms):
        return None
    ratios = [(x.terms[s], y.terms[s]) for s in x.terms]
    a, b = ratios[0]
    if a % b:
        return None
    c = a // b
    if all(p == c * q for p, q in ratios):
        return c
    return None


# ---------------------------------------------------------------- local model helpers


def local_end_complex(total: int) -> GradedComplex:
    """End(L_{p-1} x L_p) at one puncture in total letter count 2*total (k = 1, S = {0,1})."""
    S = SubsetLabel(1, (0, 1))
    return graded_complex(S, S, (2 * total,), bound=None)


def uv_acyclic_complex(total: int) -> GradedComplex:
    """The span of a^m c^n (n > 0) and b^m c^n (m > 0) with m + n = total."""
    S = SubsetLabel(1, (0, 1))
    gens = [
        g
        for g in hom_basis(S, S, (2 * total,), bound=None)
        if _in_uv_span(g)
    ]
    return build_complex(gens, S, S, (2 * total,))


def _in_uv_span(g: StrandGenerator) -> bool:
    lm = g.locals().get(1)
    if lm is None:
        return False
    if lm.shape in ("A", "C"):
        return lm.n > 0
    return lm.shape == "B" and lm.m > 0

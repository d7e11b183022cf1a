"""Comparison of the strand side with the interval-module side at n = k-1.

The dictionary sends the subset [0,k] minus {i,j} to the interval [i+1,j].
Under it the distinguished element x^alpha f_{S,T} corresponds to
x^alpha x_{I\\J}, so both structure-constant tables are indexed by the same
exponent vectors and can be compared entry by entry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product as iproduct
from typing import Iterable, Sequence

from . import bsidealg as B
from .combinat import (
    GradingSolution,
    IntervalLabel,
    SubsetLabel,
    all_subsets,
    check_grading,
    is_close,
    subset,
    triple_overlap,
    unit_gradings,
)
from .exactlinalg import QQ, Field
from .strandalg import (
    DistinguishedReps,
    MorElement,
    cohomology_table,
    distinguished_basis,
    f_cocycle,
    f_multidegree,
    iter_products,
    multiply,
)


# ---------------------------------------------------------------- dictionary


@dataclass(frozen=True)
class Dictionary:
    k: int
    forward: dict
    backward: dict

    def __call__(self, S: SubsetLabel) -> IntervalLabel:
        return self.forward[S]

    def subsets(self) -> list[SubsetLabel]:
        return sorted(self.forward, key=lambda s: s.elements)


def dictionary(k: int) -> Dictionary:
    if k < 2:
        raise ValueError("the dictionary needs k >= 2")
    fwd = {}
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            S = subset(k, [x for x in range(k + 1) if x not in (i, j)])
            fwd[S] = IntervalLabel(i + 1, j)
    bwd = {v: s for s, v in fwd.items()}
    if len(bwd) != len(fwd):
        raise AssertionError("dictionary is not injective")
    return Dictionary(k, fwd, bwd)


def triple_check(k: int) -> list:
    """Composable triples where triple_overlap differs from the interval correction set."""
    D = dictionary(k)
    objs = D.subsets()
    bad = []
    for S in objs:
        for T in objs:
            if not is_close(S, T):
                continue
            for U in objs:
                if not is_close(T, U) or not is_close(S, U):
                    continue
                if triple_overlap(S, T, U) != B.correction_set(D(S), D(T), D(U)):
                    bad.append((str(S), str(T), str(U)))
    return bad


# ---------------------------------------------------------------- reports


@dataclass
class Report:
    name: str
    checked: int = 0
    mismatches: list = dc_field(default_factory=list)
    wall_time: float = 0.0
    details: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def fail(self, **info):
        if len(self.mismatches) < 50:
            self.mismatches.append(info)
        else:
            self.details["truncated"] = self.details.get("truncated", 0) + 1

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "checked": self.checked, "mismatches": self.mismatches,
               "wall_time": round(self.wall_time, 3)}
        if self.details:
            out["details"] = self.details
        return out

    def summary(self) -> str:
        state = "PASS" if self.ok else "FAIL"
        return f"{state} {self.name}: {self.checked} checks, {len(self.mismatches)} mismatches, {self.wall_time:.1f}s"


def _timed(report: Report, start: float) -> Report:
    report.wall_time = time.perf_counter() - start
    return report


# ---------------------------------------------------------------- verify_mirror


def verify_dimensions(k: int, wmax: int, field: Field = QQ, grading: GradingSolution | None = None) -> Report:
    """Strand cohomology ranks against Hom(P_I, P_J), per pair and multidegree."""
    t0 = time.perf_counter()
    rep = Report("mirror-dimensions")
    D = dictionary(k)
    objs = D.subsets()
    for S in objs:
        for T in objs:
            I, J = D(S), D(T)
            if is_close(S, T) != bool(I.as_set() & J.as_set()):
                rep.fail(kind="closeness", S=str(S), T=str(T))
            a = {w: sum(h.values()) for w, h in cohomology_table(S, T, wmax, field, grading).items()}
            a = {w: r for w, r in a.items() if r}
            b = B.hom_table(k, I, J, wmax)
            rep.checked += 1
            if a != b:
                diff = sorted(set(a.items()) ^ set(b.items()))[:3]
                rep.fail(kind="dimension", S=str(S), T=str(T), sample=[[list(w), r] for w, r in diff])
            if is_close(S, T):
                m = f_multidegree(S, T)
                if m != B.indicator(k, I.as_set() ^ J.as_set()):
                    rep.fail(kind="f-multidegree", S=str(S), T=str(T))
    return _timed(rep, t0)


def verify_structure_constants(k: int, wmax: int, reps: DistinguishedReps | None = None) -> Report:
    """Chain-level products x^a f . x^b f against compose on the interval side.

    Products are streamed and compared one at a time; nothing is tabulated.
    """
    t0 = time.perf_counter()
    rep = Report("mirror-structure-constants")
    reps = reps or DistinguishedReps(k)
    D = dictionary(k)
    objs = D.subsets()
    nonzero = 0
    for S in objs:
        I = D(S)
        for T in objs:
            if not is_close(S, T):
                continue
            J = D(T)
            for U in objs:
                if not is_close(T, U):
                    continue
                K = D(U)
                for alpha, beta, w, prod in iter_products(S, T, U, wmax, reps):
                    rep.checked += 1
                    b = B.compose(B.generator(k, I, J, alpha), B.generator(k, J, K, beta))
                    if b.is_zero():
                        if not prod.is_zero():
                            rep.fail(S=str(S), T=str(T), U=str(U), alpha=alpha, beta=beta, w=w, kind="A nonzero, B zero")
                        continue
                    nonzero += 1
                    ((gamma, c),) = b.coeff.items()
                    target = reps.rep(S, U, gamma)
                    if prod.terms != {s: c * v for s, v in target.terms.items()}:
                        rep.fail(S=str(S), T=str(T), U=str(U), alpha=alpha, beta=beta, w=w, gamma=gamma, kind="value")
    rep.details["nonzero"] = nonzero
    return _timed(rep, t0)


def verify_mirror(k: int, wmax: int = 6, grading: GradingSolution | None = None, field: Field = QQ,
                  constants: bool = True) -> dict:
    t0 = time.perf_counter()
    parts = [verify_dimensions(k, wmax, field, grading)]
    tri = Report("triple-overlap")
    tri.checked = 1
    for bad in triple_check(k):
        tri.fail(triple=bad)
    parts.append(tri)
    if constants:
        parts.append(verify_structure_constants(k, wmax))
    return {
        "k": k,
        "wmax": wmax,
        "ok": all(p.ok for p in parts),
        "checked": sum(p.checked for p in parts),
        "mismatches": [m for p in parts for m in p.mismatches],
        "parts": [p.to_json() for p in parts],
        "wall_time": round(time.perf_counter() - t0, 3),
    }


# ---------------------------------------------------------------- stop complexes


def stop_objects(side: int, X: SubsetLabel | Sequence[int], n: int, k: int) -> list[SubsetLabel]:
    """Labels X u {j_t} in the order the complex runs (ascending for side 1)."""
    xs = tuple(X.elements) if isinstance(X, SubsetLabel) else tuple(sorted(X))
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    if len(xs) != n - 1 or len(set(xs)) != len(xs) or any(not 0 <= x <= k for x in xs):
        raise ValueError(f"X must be {n - 1} distinct elements of [0,{k}]")
    comp = [j for j in range(k + 1) if j not in xs]
    objs = [subset(k, xs + (j,)) for j in comp]
    return objs if side == 1 else objs[::-1]


def stop_chain(side: int, X, n: int, k: int) -> list[MorElement]:
    """Consecutive distinguished generators of the stop resolution."""
    objs = stop_objects(side, X, n, k)
    return [f_cocycle(a, b) for a, b in zip(objs, objs[1:])]


def stop_chain_is_complex(side: int, X, n: int, k: int) -> bool:
    maps = stop_chain(side, X, n, k)
    return all(multiply(f, g).is_zero() for f, g in zip(maps, maps[1:]))


def stop_complex(side: int, X, k: int) -> B.ProjComplex:
    """The stop resolution for n = k-1 as a complex of projectives, in degrees -2..0."""
    n = k - 1
    D = dictionary(k)
    objs = stop_objects(side, X, n, k)
    maps = [f_cocycle(a, b) for a, b in zip(objs, objs[1:])]
    z = (0,) * k
    degs = [f_multidegree(a, b) for a, b in zip(objs, objs[1:])]
    s1 = tuple(-x for x in degs[1])
    s0 = tuple(a - b for a, b in zip(s1, degs[0]))
    terms = {-2: [B.Term(D(objs[0]), s0)], -1: [B.Term(D(objs[1]), s1)], 0: [B.Term(D(objs[2]), z)]}
    diffs = {}
    for d, (a, b, f) in zip((-2, -1), zip(objs, objs[1:], maps)):
        ((slots, c),) = f.terms.items()
        diffs[d] = {(0, 0): B.BHom(k, D(a), D(b), {z: c})}
    return B.ProjComplex(k, terms, diffs)


def stop_kernel_labels(side: int, X, k: int) -> tuple[IntervalLabel, IntervalLabel]:
    """(I, J) with the stop complex equal to the presentation of M{I, J}."""
    D = dictionary(k)
    objs = stop_objects(side, X, k - 1, k)
    first, last = D(objs[0]), D(objs[2])
    return first, last


def verify_stop_complexes(k: int, wmax: int, field: Field = QQ) -> Report:
    t0 = time.perf_counter()
    rep = Report("stop-complexes")
    n = k - 1
    for xs in combinations(range(k + 1), n - 1):
        for side in (1, 2):
            rep.checked += 1
            if not stop_chain_is_complex(side, xs, n, k):
                rep.fail(side=side, X=list(xs), kind="A-side composite nonzero")
            C = stop_complex(side, xs, k)
            I, J = stop_kernel_labels(side, xs, k)
            M = B.m_module_complex(k, I, J)
            if C.to_json() != M.to_json():
                rep.fail(side=side, X=list(xs), kind="not the M{I,J} presentation", I=str(I), J=str(J))
                continue
            ex = B.exactness_report(C, wmax, field=field)
            if ex["failures"] or ex["complex_errors"]:
                rep.fail(side=side, X=list(xs), kind="not a resolution")
            # side 2 lands on the kernels M{[i,j],[j+1,m]}: no component at initial intervals
            if side == 2 and I.hi + 1 == J.lo:
                for L in B.initial_intervals(k):
                    if B.module_components(C, L, wmax, field):
                        rep.fail(side=side, X=list(xs), kind="nonzero initial component", L=str(L))
            if B.module_components(C, B.iv(1, k), wmax, field):
                rep.fail(side=side, X=list(xs), kind="nonzero component at [1,k]")
    return _timed(rep, t0)


def verify_stop_chains(n: int, k: int) -> Report:
    """A-side only: consecutive differentials of every stop resolution compose to zero."""
    t0 = time.perf_counter()
    rep = Report("stop-chains")
    for xs in combinations(range(k + 1), n - 1):
        for side in (1, 2):
            rep.checked += 1
            if not stop_chain_is_complex(side, xs, n, k):
                rep.fail(side=side, X=list(xs))
    return _timed(rep, t0)


# ---------------------------------------------------------------- gamma gradings


@dataclass(frozen=True)
class GammaGroup:
    """Finite abelian group Z/d_1 x ... x Z/d_r."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(d) for d in self.moduli))
        if any(d < 1 for d in self.moduli):
            raise ValueError(f"moduli must be >= 1, got {self.moduli}")

    @property
    def order(self) -> int:
        out = 1
        for d in self.moduli:
            out *= d
        return out

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def elem(self, v: Sequence[int] | int) -> tuple[int, ...]:
        if isinstance(v, int):
            v = (v,)
        if len(v) != len(self.moduli):
            raise ValueError(f"element {v} has the wrong length for {self.moduli}")
        return tuple(int(x) % d for x, d in zip(v, self.moduli))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.moduli))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(a, self.moduli))

    def sub(self, a, b) -> tuple[int, ...]:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a) -> tuple[int, ...]:
        return tuple((c * x) % d for x, d in zip(a, self.moduli))

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(v) for v in iproduct(*(range(d) for d in self.moduli))]

    def label(self, g) -> str:
        return ",".join(map(str, g))


def parse_gamma(text: str) -> GammaGroup:
    """'2,3' -> Z/2 x Z/3; '1' or '' -> trivial group."""
    text = text.strip()
    if not text:
        return GammaGroup((1,))
    return GammaGroup(tuple(int(x) for x in text.split(",")))


@dataclass
class GammaGrading:
    group: GammaGroup
    phi: tuple
    pair_degrees: dict

    def degree(self, S, T, alpha) -> tuple[int, ...]:
        g = self.pair_degrees[(S, T)]
        for a, p in zip(alpha, self.phi):
            g = self.group.add(g, self.group.scale(a, p))
        return g


def gamma_grade(n: int, k: int, group: GammaGroup, phi: Sequence) -> GammaGrading:
    """Gamma-valued pair degrees solving the cocycle system, gauge fixed on the spanning tree."""
    if len(phi) != k:
        raise ValueError(f"need {k} values of phi, got {len(phi)}")
    phi = tuple(group.elem(p) for p in phi)
    units = unit_gradings(n, k)
    pairs = {}
    for key, cv in units.items():
        g = group.zero()
        for c, p in zip(cv, phi):
            g = group.add(g, group.scale(c, p))
        pairs[key] = g
    sol = GradingSolution(n, k, phi, pairs)
    bad = check_grading(sol, add=group.add)
    if bad:
        raise ArithmeticError(f"Gamma grading violates {len(bad)} triangle identities")
    return GammaGrading(group, phi, pairs)


# ---------------------------------------------------------------- algebra tables


def _obj_name(S, g, group: GammaGroup | None) -> str:
    if group is None or group.order == 1:
        return str(S)
    return f"{S}@{group.label(g)}"


def strand_table(k: int, wmax: int, reps: DistinguishedReps | None = None, n: int | None = None) -> dict:
    """Distinguished basis and nonzero products of the strand algebra (n = k-1 unless given).

    {(S, T): [alpha, ...]} and {(S, T, alpha, U, beta): (gamma, coeff)}; the
    products are checked against the distinguished basis as they are built.
    """
    from .strandalg import structure_constants

    n = k - 1 if n is None else n
    objs = all_subsets(n, k)
    basis = {(S, T): list(distinguished_basis(S, T, wmax)) for S in objs for T in objs if is_close(S, T)}
    consts = {key: v for key, v in structure_constants(n, k, wmax, reps=reps).items() if v[1]}
    return {"objects": objs, "basis": basis, "products": consts}


def crossed_product(k: int, group: GammaGroup, phi: Sequence, wmax: int, base: dict | None = None) -> dict:
    """Objects (S, g); Hom((S,g),(T,h)) is the piece of A(S,T) of Gamma-degree h - g."""
    base = base or strand_table(k, wmax)
    grading = gamma_grade(k - 1, k, group, phi)
    els = group.elements()
    objs = [(S, g) for S in base["objects"] for g in els]
    basis = {}
    for (S, T), alphas in base["basis"].items():
        for g in els:
            for a in alphas:
                h = group.add(g, grading.degree(S, T, a))
                basis.setdefault(((S, g), (T, h)), []).append(a)
    products = {}
    for (S, T, a, U, b), (c, coeff) in base["products"].items():
        d1 = grading.degree(S, T, a)
        d2 = grading.degree(T, U, b)
        for g in els:
            h = group.add(g, d1)
            l = group.add(h, d2)
            products[((S, g), (T, h), a, (U, l), b)] = (c, coeff)
    return {"group": group, "grading": grading, "objects": objs, "basis": basis, "products": products}


def crossed_degree_errors(cp: dict) -> list:
    """Products whose output does not sit in the Gamma-piece predicted by additivity."""
    grading = cp["grading"]
    grp = cp["group"]
    bad = []
    for ((S, g), (T, h), a, (U, l), b), (c, coeff) in cp["products"].items():
        if grp.sub(l, g) != grading.degree(S, U, c):
            bad.append((S, T, U, a, b))
    return bad


def crossed_dimension_identity(cp: dict, base: dict) -> bool:
    """sum over (g, h) of dim Hom((S,g),(T,h)) = |Gamma| dim A(S,T), per multidegree."""
    order = cp["group"].order
    counts: dict = {}
    for ((S, g), (T, h)), alphas in cp["basis"].items():
        counts[(S, T)] = counts.get((S, T), 0) + len(alphas)
    want = {key: order * len(v) for key, v in base["basis"].items()}
    return counts == want


def associativity_errors(table: dict, wmax: int) -> tuple[int, list]:
    """Exhaustive (fg)h = f(gh) over the table's basis within the truncation.

    Triples whose total multidegree exceeds wmax are skipped since one of the
    two bracketings may leave the table.
    """
    products = table["products"]
    by_src: dict = {}
    for (X, Y), alphas in table["basis"].items():
        m = f_multidegree(_base(X), _base(Y))
        elems = [(a, tuple(2 * x + y for x, y in zip(a, m))) for a in alphas]
        by_src.setdefault(X, []).append((Y, elems))

    checked = 0
    bad = []
    for X, outs in by_src.items():
        for Y, e1 in outs:
            for Z, e2 in by_src.get(Y, []):
                for W, e3 in by_src.get(Z, []):
                    for a, wa in e1:
                        for b, wb in e2:
                            wab = tuple(x + y for x, y in zip(wa, wb))
                            if max(wab) > wmax:
                                continue
                            left = products.get((X, Y, a, Z, b))
                            for c, wc in e3:
                                if any(x + y > wmax for x, y in zip(wab, wc)):
                                    continue
                                checked += 1
                                lv = products.get((X, Z, left[0], W, c)) if left else None
                                right = products.get((Y, Z, b, W, c))
                                rv = products.get((X, Y, a, W, right[0])) if right else None
                                lval = (lv[0], lv[1] * left[1]) if lv else None
                                rval = (rv[0], rv[1] * right[1]) if rv else None
                                if lval != rval:
                                    bad.append((str(X), str(Y), str(Z), str(W), a, b, c))
    return checked, bad


def _base(O):
    return O[0] if isinstance(O, tuple) else O


def table_json(table: dict, group: GammaGroup | None = None) -> dict:
    """Deterministic JSON form shared by the base algebra and its crossed products."""

    def name(O):
        if isinstance(O, tuple):
            return _obj_name(O[0], O[1], group)
        return str(O)

    def okey(O):
        return (O[0].elements, O[1]) if isinstance(O, tuple) else (O.elements,)

    objs = sorted(table["objects"], key=okey)
    homs = []
    for (X, Y) in sorted(table["basis"], key=lambda p: (okey(p[0]), okey(p[1]))):
        alphas = sorted(table["basis"][(X, Y)])
        if not alphas:
            continue
        m = f_multidegree(X[0] if isinstance(X, tuple) else X, Y[0] if isinstance(Y, tuple) else Y)
        homs.append({"src": name(X), "tgt": name(Y), "f_multidegree": list(m), "alphas": [list(a) for a in alphas]})
    prods = []
    for key in sorted(table["products"], key=lambda t: (okey(t[0]), okey(t[1]), t[2], okey(t[3]), t[4])):
        X, Y, a, Z, b = key
        c, coeff = table["products"][key]
        prods.append([name(X), name(Y), list(a), name(Z), list(b), list(c), coeff])
    return {"objects": [name(O) for O in objs], "homs": homs, "products": prods}


def interval_table(k: int, wmax: int) -> dict:
    """The interval-module algebra in the same shape, with objects named by the dictionary's preimage."""
    D = dictionary(k)
    objs = D.subsets()
    basis = {}
    for S in objs:
        for T in objs:
            I, J = D(S), D(T)
            if not I.as_set() & J.as_set():
                continue
            ind = B.indicator(k, I.as_set() ^ J.as_set())
            alphas = []
            for beta in iproduct(*(range((wmax - e) // 2 + 1) for e in ind)):
                if B.hom_exponent(k, I, J, [2 * b + e for b, e in zip(beta, ind)]) is not None:
                    alphas.append(tuple(beta))
            basis[(S, T)] = alphas
    products = {}
    for (S, T), alphas in basis.items():
        for (T2, U), betas in basis.items():
            if T2 != T:
                continue
            mst = B.indicator(k, D(S).as_set() ^ D(T).as_set())
            mtu = B.indicator(k, D(T).as_set() ^ D(U).as_set())
            for a in alphas:
                for b in betas:
                    if max(2 * x + 2 * y + p + q for x, y, p, q in zip(a, b, mst, mtu)) > wmax:
                        continue
                    r = B.compose(B.generator(k, D(S), D(T), a), B.generator(k, D(T), D(U), b))
                    if not r.is_zero():
                        ((c, coeff),) = r.coeff.items()
                        products[(S, T, a, U, b)] = (c, coeff)
    return {"objects": objs, "basis": basis, "products": products}

"""B-side: interval modules over R = k[x_1..x_k]/(x_1...x_k) and their hom spaces.

Hom(P_I, P_J) = Hom_R(R/x_J, R/x_I) = x_{I\\J} . R/(x_{I cap J}); an element is
stored by its coefficient in R/(x_{I cap J}).  The multidegree of x^b x_{I\\J}
is 2b + 1_{I delta J}, matching letter counts on the strand side.  Composition
is written in the order of travel, ``compose(phi, psi)`` for P_I -> P_J -> P_K.

Modules are handled only through complexes of projectives whose terms carry a
multidegree shift, so that all differentials are homogeneous of degree 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct
from typing import Iterable, Sequence

from .combinat import IntervalLabel
from .exactlinalg import QQ, Field, SparseMatrix, complex_homology, complex_torsion

ExpVec = tuple[int, ...]


# ---------------------------------------------------------------- intervals


def iv(lo: int, hi: int | None = None) -> IntervalLabel:
    return IntervalLabel(lo, lo if hi is None else hi)


def all_intervals(k: int) -> list[IntervalLabel]:
    return [IntervalLabel(i, j) for i in range(1, k + 1) for j in range(i, k + 1)]


def initial_intervals(k: int) -> list[IntervalLabel]:
    return [IntervalLabel(1, j) for j in range(1, k + 1)]


def _set(I: IntervalLabel) -> frozenset[int]:
    return frozenset() if I.empty else I.as_set()


def indicator(k: int, s: Iterable[int]) -> ExpVec:
    s = set(s)
    return tuple(int(i in s) for i in range(1, k + 1))


def correction_set(I, J, K) -> frozenset[int]:
    """(J \\ (I cup K)) cup ((I cap K) \\ J)."""
    i, j, kk = _set(I), _set(J), _set(K)
    return (j - (i | kk)) | ((i & kk) - j)


# ---------------------------------------------------------------- ring R


def is_zero_mod(beta: Sequence[int], I: IntervalLabel) -> bool:
    """x^beta = 0 in R/(x_I), with x_empty = 1."""
    if I.empty:
        return True
    return all(beta[i - 1] >= 1 for i in I.members())


@dataclass
class QuotElement:
    """Element of R/(x_I) as a map from basis exponents to scalars."""

    k: int
    modulus: IntervalLabel
    terms: dict[ExpVec, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.terms = {b: c for b, c in self.terms.items() if c and not is_zero_mod(b, self.modulus)}

    def is_zero(self) -> bool:
        return not self.terms


@dataclass
class BHom:
    """coeff . x_{I\\J} in Hom(P_I, P_J)."""

    k: int
    source: IntervalLabel
    target: IntervalLabel
    coeff: dict[ExpVec, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        mod = self.modulus
        self.coeff = {b: c for b, c in self.coeff.items() if c and not is_zero_mod(b, mod)}

    @property
    def modulus(self) -> IntervalLabel:
        lo = max(self.source.lo, self.target.lo)
        hi = min(self.source.hi, self.target.hi)
        return IntervalLabel(lo, hi) if lo <= hi else IntervalLabel.EMPTY

    def is_zero(self) -> bool:
        return not self.coeff

    def quot(self) -> QuotElement:
        return QuotElement(self.k, self.modulus, dict(self.coeff))

    def multidegrees(self) -> set[ExpVec]:
        ind = indicator(self.k, _set(self.source) ^ _set(self.target))
        return {tuple(2 * b + e for b, e in zip(beta, ind)) for beta in self.coeff}

    def scaled(self, c: int) -> "BHom":
        return BHom(self.k, self.source, self.target, {b: c * v for b, v in self.coeff.items()})

    def to_json(self) -> list:
        return [[list(b), c] for b, c in sorted(self.coeff.items())]


def generator(k: int, I: IntervalLabel, J: IntervalLabel, beta: ExpVec | None = None) -> BHom:
    return BHom(k, I, J, {beta or (0,) * k: 1})


def identity(k: int, I: IntervalLabel) -> BHom:
    return generator(k, I, I)


def compose(phi: BHom, psi: BHom) -> BHom:
    """phi: P_I -> P_J followed by psi: P_J -> P_K."""
    if phi.target != psi.source:
        raise ValueError(f"cannot compose {phi.source}->{phi.target} with {psi.source}->{psi.target}")
    k = phi.k
    corr = indicator(k, correction_set(phi.source, phi.target, psi.target))
    out: dict[ExpVec, int] = {}
    for b1, c1 in phi.coeff.items():
        for b2, c2 in psi.coeff.items():
            b = tuple(x + y + z for x, y, z in zip(b1, b2, corr))
            out[b] = out.get(b, 0) + c1 * c2
    return BHom(k, phi.source, psi.target, out)


def hom_exponent(k: int, I: IntervalLabel, J: IntervalLabel, w: Sequence[int]) -> ExpVec | None:
    """The coefficient exponent of the unique basis element of Hom(P_I,P_J) in multidegree w."""
    ind = indicator(k, _set(I) ^ _set(J))
    beta = []
    for wi, e in zip(w, ind):
        if wi < e or (wi - e) % 2:
            return None
        beta.append((wi - e) // 2)
    beta = tuple(beta)
    mod = BHom(k, I, J).modulus
    if is_zero_mod(beta, mod):
        return None
    return beta


def hom_space(k: int, I: IntervalLabel, J: IntervalLabel, w: Sequence[int]) -> list[BHom]:
    beta = hom_exponent(k, I, J, w)
    return [] if beta is None else [generator(k, I, J, beta)]


def hom_table(k: int, I, J, wmax: int) -> dict[ExpVec, int]:
    """Multidegrees w <= wmax where Hom(P_I, P_J) is nonzero (each is one-dimensional)."""
    out = {}
    for w in iproduct(range(wmax + 1), repeat=k):
        if hom_exponent(k, I, J, w) is not None:
            out[w] = 1
    return out


def alpha_map(k: int, I: IntervalLabel, J: IntervalLabel) -> BHom:
    """P_I -> P_{I u J}, the projection R/x_{IuJ} -> R/x_I."""
    return generator(k, I, union(I, J))


def beta_map(k: int, I: IntervalLabel, J: IntervalLabel) -> BHom:
    """P_{I u J} -> P_J, multiplication by x_I."""
    return generator(k, union(I, J), J)


def union(I: IntervalLabel, J: IntervalLabel) -> IntervalLabel:
    s = _set(I) | _set(J)
    lo, hi = min(s), max(s)
    if hi - lo + 1 != len(s) or _set(I) & _set(J):
        raise ValueError(f"{I} and {J} are not disjoint with interval union")
    return IntervalLabel(lo, hi)


# ---------------------------------------------------------------- complexes


@dataclass(frozen=True)
class Term:
    interval: IntervalLabel
    shift: ExpVec


@dataclass
class ProjComplex:
    """Cochain complex of shifted projectives; diffs[d][(i, j)] maps terms[d][i] to terms[d+1][j]."""

    k: int
    terms: dict[int, list[Term]]
    diffs: dict[int, dict[tuple[int, int], BHom]] = dc_field(default_factory=dict)
    initial_only: bool = False

    def check(self) -> list[str]:
        """Problems found: non-homogeneous entries or d o d != 0."""
        errs = []
        for d, entries in self.diffs.items():
            for (i, j), h in entries.items():
                s, t = self.terms[d][i], self.terms[d + 1][j]
                if (h.source, h.target) != (s.interval, t.interval):
                    errs.append(f"entry {d}:{i}->{j} has the wrong endpoints")
                want = tuple(b - a for a, b in zip(s.shift, t.shift))
                if any(m != want for m in h.multidegrees()):
                    errs.append(f"entry {d}:{i}->{j} is not homogeneous")
            nxt = self.diffs.get(d + 1, {})
            acc: dict[tuple[int, int], BHom] = {}
            for (i, j), h in entries.items():
                for (j2, l), g in nxt.items():
                    if j2 != j:
                        continue
                    c = compose(h, g)
                    acc[(i, l)] = c if (i, l) not in acc else _add(acc[(i, l)], c)
            if any(not h.is_zero() for h in acc.values()):
                errs.append(f"d o d != 0 at degree {d}")
        if self.initial_only:
            for d, ts in self.terms.items():
                if any(t.interval.lo != 1 for t in ts):
                    errs.append("B-circ complex uses a non-initial interval")
        return errs

    def to_json(self) -> dict:
        return {
            "terms": {str(d): [[[t.interval.lo, t.interval.hi], list(t.shift)] for t in ts] for d, ts in sorted(self.terms.items())},
            "diffs": {
                str(d): [
                    {
                        "row": j,
                        "col": i,
                        "src": [h.source.lo, h.source.hi],
                        "tgt": [h.target.lo, h.target.hi],
                        "coeff": h.to_json(),
                    }
                    for (i, j), h in sorted(e.items())
                ]
                for d, e in sorted(self.diffs.items())
            },
        }


def _add(a: BHom, b: BHom) -> BHom:
    out = dict(a.coeff)
    for k_, v in b.coeff.items():
        out[k_] = out.get(k_, 0) + v
    return BHom(a.k, a.source, a.target, out)


def _deg(h: BHom) -> ExpVec:
    (m,) = h.multidegrees()
    return m


def projective(k: int, I: IntervalLabel) -> ProjComplex:
    return ProjComplex(k, {0: [Term(I, (0,) * k)]})


def m_module_complex(k: int, I: IntervalLabel, J: IntervalLabel) -> ProjComplex:
    """[P_I -> P_{IuJ} -> P_J] in degrees -2, -1, 0, presenting M{I,J} in degree 0."""
    if I.empty or J.empty:
        raise ValueError("intervals must be nonempty")
    U = union(I, J)
    a, b = alpha_map(k, I, J), beta_map(k, I, J)
    z = (0,) * k
    sU = tuple(-x for x in _deg(b))
    sI = tuple(x - y for x, y in zip(sU, _deg(a)))
    return ProjComplex(
        k,
        {-2: [Term(I, sI)], -1: [Term(U, sU)], 0: [Term(J, z)]},
        {-2: {(0, 0): a}, -1: {(0, 0): b}},
    )


def pbar_complex(i: int, k: int) -> ProjComplex:
    """P-bar_i over B-circ: [P_{[1,i-1]} -> P_{[1,i]}] (just P_{[1]} for i = 1)."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k, got i={i}")
    z = (0,) * k
    if i == 1:
        return ProjComplex(k, {0: [Term(iv(1), z)]}, initial_only=True)
    a = alpha_map(k, iv(1, i - 1), iv(i))
    s = tuple(-x for x in _deg(a))
    return ProjComplex(k, {-1: [Term(iv(1, i - 1), s)], 0: [Term(iv(1, i), z)]}, {-1: {(0, 0): a}}, initial_only=True)


# ---------------------------------------------------------------- components


@dataclass
class FiniteComplex:
    dims: dict[int, int]
    diffs: dict[int, SparseMatrix]
    labels: dict[int, list] = dc_field(default_factory=dict)

    def homology(self, field: Field = QQ) -> dict[int, int]:
        return complex_homology(self.dims, self.diffs, field)

    def torsion(self) -> dict[int, list[int]]:
        return complex_torsion(self.dims, self.diffs)


def component(C: ProjComplex, L: IntervalLabel, w: Sequence[int]) -> FiniteComplex:
    """Hom(P_L, C) in total multidegree w."""
    k = C.k
    basis: dict[int, list[tuple[int, ExpVec]]] = {}
    for d, ts in C.terms.items():
        for j, t in enumerate(ts):
            e = tuple(a + b for a, b in zip(w, t.shift))
            beta = hom_exponent(k, L, t.interval, e)
            if beta is not None:
                basis.setdefault(d, []).append((j, beta))
    return _assemble(basis, lambda d, lab: _component_image(C, L, d, lab))


def _component_image(C, L, d, lab):
    j, beta = lab
    phi = generator(C.k, L, C.terms[d][j].interval, beta)
    out = []
    for (i, j2), h in C.diffs.get(d, {}).items():
        if i != j:
            continue
        res = compose(phi, h)
        for b, c in res.coeff.items():
            out.append(((j2, b), c))
    return out


def _assemble(basis: dict[int, list], image) -> FiniteComplex:
    dims = {d: len(v) for d, v in basis.items()}
    index = {d: {lab: n for n, lab in enumerate(v)} for d, v in basis.items()}
    diffs = {}
    for d, labs in basis.items():
        items = []
        tgt = index.get(d + 1, {})
        for c, lab in enumerate(labs):
            for key, val in image(d, lab):
                if key not in tgt:
                    raise AssertionError("differential leaves the multidegree piece")
                items.append((tgt[key], c, val))
        if d + 1 in basis:
            diffs[d] = SparseMatrix.build(len(basis[d + 1]), len(labs), items)
    return FiniteComplex(dims, diffs, basis)


def component_support(C: ProjComplex, L: IntervalLabel, wmax: int) -> list[ExpVec]:
    """Total multidegrees w (each w_i <= wmax) where some term of Hom(P_L, C) is nonzero."""
    k = C.k
    out = set()
    for ts in C.terms.values():
        for t in ts:
            ind = indicator(k, _set(L) ^ _set(t.interval))
            # e = w + shift, w <= wmax  =>  e <= wmax + shift
            tops = [(wmax + s - e) // 2 for s, e in zip(t.shift, ind)]
            if min(tops) < 0:
                continue
            for beta in iproduct(*(range(x + 1) for x in tops)):
                if hom_exponent(k, L, t.interval, tuple(2 * b + e for b, e in zip(beta, ind))) is None:
                    continue
                out.add(tuple(2 * b + e - s for b, e, s in zip(beta, ind, t.shift)))
    return sorted(out)


def module_components(C: ProjComplex, L: IntervalLabel, wmax: int, field: Field = QQ) -> dict[ExpVec, dict[int, int]]:
    """Nonzero homology of Hom(P_L, C) for every multidegree within the bound."""
    out = {}
    for w in component_support(C, L, wmax):
        h = component(C, L, w).homology(field)
        if h:
            out[w] = h
    return out


def exactness_report(C: ProjComplex, wmax: int, intervals: Iterable[IntervalLabel] | None = None, field: Field = QQ) -> dict:
    """Checks that a presentation is a resolution: all homology sits in degree 0."""
    intervals = list(intervals) if intervals is not None else (
        initial_intervals(C.k) if C.initial_only else all_intervals(C.k)
    )
    bad = []
    checked = 0
    for L in intervals:
        for w, h in module_components(C, L, wmax, field).items():
            checked += 1
            if any(d != 0 for d in h):
                bad.append({"L": [L.lo, L.hi], "w": list(w), "homology": h})
    return {"checked": checked, "failures": bad, "complex_errors": C.check()}


# ---------------------------------------------------------------- Ext


def hom_complex(A: ProjComplex, B: ProjComplex, w: Sequence[int]) -> FiniteComplex:
    """Total complex Hom(A, B) in multidegree w.

    Degree n is the sum over p of Hom(A^p, B^{p+n}); D(phi) = phi.d_B - (-1)^n d_A.phi
    with composition written in the order of travel.
    """
    k = A.k
    basis: dict[int, list[tuple[int, int, int, int, ExpVec]]] = {}
    for p, ats in A.terms.items():
        for q, bts in B.terms.items():
            for i, s in enumerate(ats):
                for j, t in enumerate(bts):
                    e = tuple(x - a + b for x, a, b in zip(w, s.shift, t.shift))
                    beta = hom_exponent(k, s.interval, t.interval, e)
                    if beta is not None:
                        basis.setdefault(q - p, []).append((p, i, q, j, beta))
    for v in basis.values():
        v.sort()

    def image(n, lab):
        p, i, q, j, beta = lab
        phi = generator(k, A.terms[p][i].interval, B.terms[q][j].interval, beta)
        out = []
        for (j0, j2), h in B.diffs.get(q, {}).items():
            if j0 == j:
                for b, c in compose(phi, h).coeff.items():
                    out.append(((p, i, q + 1, j2, b), c))
        sign = -1 if n % 2 == 0 else 1
        for (i0, i2), h in A.diffs.get(p - 1, {}).items():
            if i2 == i:
                for b, c in compose(h, phi).coeff.items():
                    out.append(((p - 1, i0, q, j, b), sign * c))
        return out

    return _assemble(basis, image)


def hom_support(A: ProjComplex, B: ProjComplex, wmax: int) -> list[ExpVec]:
    k = A.k
    out = set()
    for ats in A.terms.values():
        for bts in B.terms.values():
            for s in ats:
                for t in bts:
                    ind = indicator(k, _set(s.interval) ^ _set(t.interval))
                    off = tuple(b - a for a, b in zip(s.shift, t.shift))  # e = w + off
                    tops = [(wmax + o - e) // 2 for o, e in zip(off, ind)]
                    if min(tops) < 0:
                        continue
                    for beta in iproduct(*(range(x + 1) for x in tops)):
                        e = tuple(2 * b + x for b, x in zip(beta, ind))
                        if hom_exponent(k, s.interval, t.interval, e) is None:
                            continue
                        out.add(tuple(x - o for x, o in zip(e, off)))
    return sorted(out)


def ext_table(A: ProjComplex, B: ProjComplex, wmax: int, field: Field = QQ) -> dict[tuple[int, ExpVec], int]:
    """{(ext degree, w): rank} for the cohomology of Hom(A, B) in multidegrees <= wmax."""
    out = {}
    for w in hom_support(A, B, wmax):
        for n, r in hom_complex(A, B, w).homology(field).items():
            out[(n, w)] = r
    return out


def ext_torsion(A: ProjComplex, B: ProjComplex, wmax: int) -> dict[tuple[int, ExpVec], list[int]]:
    out = {}
    for w in hom_support(A, B, wmax):
        for n, t in hom_complex(A, B, w).torsion().items():
            out[(n, w)] = t
    return out


# ---------------------------------------------------------------- Hilbert functions


def monomial_quotient_support(k: int, gens: Iterable[Iterable[int]], wmax: int, shift: Sequence[int] | None = None) -> set[ExpVec]:
    """Multidegrees 2*gamma + shift <= wmax of basis monomials of k[x]/(x_G for G in gens).

    An empty generator set means x_empty = 1, so the quotient is zero.
    """
    gens = [frozenset(g) for g in gens]
    if any(not g for g in gens):
        return set()
    shift = tuple(shift) if shift is not None else (0,) * k
    out = set()
    tops = [(wmax - s) // 2 for s in shift]
    if min(tops) < 0:
        return out
    for gamma in iproduct(*(range(t + 1) for t in tops)):
        if any(all(gamma[i - 1] >= 1 for i in g) for g in gens):
            continue
        out.add(tuple(2 * g + s for g, s in zip(gamma, shift)))
    return out


def _match_quotient(k: int, support: set[ExpVec], gens, wmax: int) -> bool:
    """Is ``support`` the Hilbert-function support of the quotient by ``gens``, up to one shift?"""
    if not support:
        return not monomial_quotient_support(k, gens, wmax + 2 * k)
    shift = tuple(min(w[i] for w in support) for i in range(k))
    return support == monomial_quotient_support(k, gens, wmax, shift)


# ---------------------------------------------------------------- named checks


def ext_pbar_self(i: int, k: int, wmax: int, field: Field = QQ) -> dict:
    P = pbar_complex(i, k)
    tab = ext_table(P, P, wmax, field)
    nonzero = {key: r for key, r in tab.items() if r}
    wrong_deg = [key for key in nonzero if key[0] != 0]
    ranks_ok = all(r == 1 for r in nonzero.values())
    supp = {w for (n, w) in nonzero if n == 0}
    expect = monomial_quotient_support(k, [[i]], wmax)
    return {"ok": not wrong_deg and ranks_ok and supp == expect, "degrees": sorted({n for n, _ in nonzero})}


def ext_pbar_projective(k: int, i: int, wmax: int, field: Field = QQ) -> dict:
    """Ext^*(P-bar_k, P_{[1,i]}) for i < k.

    The Hom complex is R/(x_{[1,i]}) -> R/(x_{[1,i]}) with the map given by the
    correction monomial of [1,k-1] -> [1,k] -> [1,i], which is x_k.  So only
    Ext^1 survives and it is R/(x_{[1,i]}, x_k).  ``stated`` compares against
    R/(x_{[1,i]}, x_{[i+1,k]}); the two agree only for i = k-1.
    """
    tab = ext_table(pbar_complex(k, k), projective(k, iv(1, i)), wmax, field)
    nonzero = {key: r for key, r in tab.items() if r}
    degs = sorted({n for n, _ in nonzero})
    supp = {w for (n, w) in nonzero if n == 1}
    shape = degs in ([1], []) and all(r == 1 for r in nonzero.values())
    return {
        "ok": shape and _match_quotient(k, supp, [range(1, i + 1), [k]], wmax),
        "stated": shape and _match_quotient(k, supp, [range(1, i + 1), range(i + 1, k + 1)], wmax),
        "degrees": degs,
        "size": len(supp),
    }


def ext_m_projective(k: int, j: int, m: int, I: IntervalLabel, wmax: int, field: Field = QQ) -> dict:
    """Ext^*(M{[j-1],[j,m]}, P_I) for I = [j', m'] with j' < j <= m'+1: only Ext^2 = R/(x_{j-1}, x_{[j,m]\\I})."""
    M = m_module_complex(k, iv(j - 1), iv(j, m))
    tab = ext_table(M, projective(k, I), wmax, field)
    nonzero = {key: r for key, r in tab.items() if r}
    degs = sorted({n for n, _ in nonzero})
    supp = {w for (n, w) in nonzero if n == 2}
    rest = set(range(j, m + 1)) - _set(I)
    ok = degs in ([2], []) and all(r == 1 for r in nonzero.values())
    ok = ok and _match_quotient(k, supp, [[j - 1], rest], wmax)
    return {"ok": ok, "degrees": degs, "size": len(supp)}


def pbar_components_ok(i: int, k: int, wmax: int, field: Field = QQ) -> bool:
    P = pbar_complex(i, k)
    for j in range(1, k + 1):
        comps = module_components(P, iv(1, j), wmax, field)
        if any(set(h) != {0} for h in comps.values()):
            return False
        supp = {w for w in comps}
        if j < i:
            if supp:
                return False
        else:
            shift = indicator(k, range(i + 1, j + 1))
            if supp != monomial_quotient_support(k, [[i]], wmax, shift):
                return False
    return True


def check_semiorthogonal(k: int, wmax: int, field: Field = QQ) -> dict:
    """Vanishing statements behind the two semiorthogonal decompositions."""
    failures = []
    checked = 0
    for i in range(1, k + 1):
        for j in range(1, i):
            checked += 1
            tab = ext_table(projective(k, iv(1, j)), pbar_complex(i, k), wmax, field)
            if any(tab.values()):
                failures.append({"check": "Ext(P_[1,j], Pbar_i)", "i": i, "j": j})
    for j in range(2, k + 1):
        for m in range(j, k + 1):
            M = m_module_complex(k, iv(j - 1), iv(j, m))
            for L in all_intervals(k):
                if L.lo >= j:
                    continue
                checked += 1
                tab = ext_table(projective(k, L), M, wmax, field)
                if any(tab.values()):
                    failures.append({"check": "Ext(P_L, M{[j-1],[j,m]})", "j": j, "m": m, "L": [L.lo, L.hi]})
    return {"checked": checked, "failures": failures}


def m_module_components_ok(k: int, j: int, m: int, wmax: int, field: Field = QQ) -> bool:
    """Components of M{[j-1],[j,m]} vanish off [j,k] and equal (P_{[j,m]})_L / x_{j-1} there."""
    M = m_module_complex(k, iv(j - 1), iv(j, m))
    P = projective(k, iv(j, m))
    for L in all_intervals(k):
        comps = module_components(M, L, wmax, field)
        if L.lo < j:
            if comps:
                return False
        else:
            want = {w: h for w, h in module_components(P, L, wmax, field).items() if w[j - 2] == 0}
            if comps != want:
                return False
    return True


def localization_kernel_check(k: int, wmax: int, field: Field = QQ) -> dict:
    failures = []
    checked = 0
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            for m in range(j + 1, k + 1):
                M = m_module_complex(k, iv(i, j), iv(j + 1, m))
                for L in initial_intervals(k):
                    checked += 1
                    comps = module_components(M, L, wmax, field)
                    if comps:
                        failures.append({"module": [[i, j], [j + 1, m]], "L": [L.lo, L.hi]})
    for I in all_intervals(k):
        for J in all_intervals(k):
            try:
                union(I, J)
            except ValueError:
                continue
            checked += 1
            comps = module_components(m_module_complex(k, I, J), iv(1, k), wmax, field)
            if comps:
                failures.append({"module": [[I.lo, I.hi], [J.lo, J.hi]], "L": [1, k]})
    return {"checked": checked, "failures": failures}


def restriction_sequence_ok(k: int, j: int, wmax: int, field: Field = QQ) -> bool:
    """Componentwise dimensions of 0 -> i_*(j)(R/(x_1,x_j)) -> rM{[j],[1,j-1]} -> rM{[j],[2,j-1]} -> 0.

    The surjection is induced by x_1 : P_{[1,j-1]} -> P_{[2,j-1]}, of multidegree 1_{1}.
    At each initial interval [1,m] the kernel dimensions must form the Hilbert
    function of R/(x_1, x_j) (up to a shift) for m < j, and vanish for m >= j.
    """
    if not 2 <= j <= k:
        raise ValueError(f"need 2 <= j <= k, got j={j}")
    big = m_module_complex(k, iv(j), iv(1, j - 1))
    small = m_module_complex(k, iv(j), iv(2, j - 1)) if j > 2 else None
    delta = indicator(k, [1])
    for mm in range(1, k + 1):
        L = iv(1, mm)
        a = {w: h.get(0, 0) for w, h in module_components(big, L, wmax, field).items()}
        b = {}
        if small is not None:
            b = {w: h.get(0, 0) for w, h in module_components(small, L, wmax + 1, field).items()}
        diff = {}
        for w, v in a.items():
            diff[w] = v - b.get(tuple(x + d for x, d in zip(w, delta)), 0)
        if any(v < 0 or v > 1 for v in diff.values()):
            return False
        supp = {w for w, v in diff.items() if v}
        if mm >= j:
            if supp:
                return False
        elif not _match_quotient(k, supp, [[1], [j]], wmax):
            return False
    return True


# ---------------------------------------------------------------- quiver export


def quiver_arrows(k: int, initial_only: bool = False) -> list[tuple[IntervalLabel, IntervalLabel, str]]:
    """Arrows between intervals differing by one endpoint: projections and multiplications."""
    ivs = initial_intervals(k) if initial_only else all_intervals(k)
    out = []
    for I in ivs:
        for J in ivs:
            if I == J:
                continue
            d = _set(I) ^ _set(J)
            if len(d) == 1 and (_set(I) <= _set(J) or _set(J) <= _set(I)):
                (p,) = d
                out.append((I, J, f"{'a' if _set(I) < _set(J) else 'b'}{p}"))
    return out


def quiver_relations(k: int, initial_only: bool = False) -> list[tuple[str, str]]:
    """Length-two paths between distinct vertices that compose to zero."""
    arrows = quiver_arrows(k, initial_only)
    rels = []
    for I, J, l1 in arrows:
        for J2, K, l2 in arrows:
            if J2 != J or K == I:
                continue
            if compose(generator(k, I, J), generator(k, J, K)).is_zero():
                rels.append((f"{l1}{l2}", f"{I}->{J}->{K}"))
    return rels


def quiver_dot(k: int, initial_only: bool = False, names: dict | None = None) -> str:
    names = names or {}
    lines = [f"digraph B{'circ' if initial_only else 'circcirc'}_k{k} {{"]
    ivs = initial_intervals(k) if initial_only else all_intervals(k)
    for I in ivs:
        lab = names.get(I, str(I))
        lines.append(f'  "{I}" [label="{lab}"];')
    for I, J, lab in quiver_arrows(k, initial_only):
        lines.append(f'  "{I}" -> "{J}" [label="{lab}"];')
    for word, path in quiver_relations(k, initial_only):
        lines.append(f"  // relation: {word} = 0 along {path}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- algebra table


def algebra_table(k: int, wmax: int, initial_only: bool = False) -> dict:
    """Hom bases (coefficient exponents) and nonzero products among the P_I, as plain JSON."""
    ivs = initial_intervals(k) if initial_only else all_intervals(k)
    homs = []
    basis = {}
    for I in ivs:
        for J in ivs:
            ind = indicator(k, _set(I) ^ _set(J))
            betas = []
            for beta in iproduct(*(range((wmax - e) // 2 + 1) for e in ind)):
                if hom_exponent(k, I, J, [2 * b + e for b, e in zip(beta, ind)]) is not None:
                    betas.append(beta)
            if betas:
                basis[(I, J)] = (ind, betas)
                homs.append({"src": str(I), "tgt": str(J), "multidegree": list(ind), "betas": [list(b) for b in betas]})
    prods = []
    for (I, J), (m1, b1s) in basis.items():
        for (J2, K), (m2, b2s) in basis.items():
            if J2 != J:
                continue
            for b1 in b1s:
                for b2 in b2s:
                    if max(2 * x + 2 * y + p + q for x, y, p, q in zip(b1, b2, m1, m2)) > wmax:
                        continue
                    r = compose(generator(k, I, J, b1), generator(k, J, K, b2))
                    for c, v in sorted(r.coeff.items()):
                        prods.append([str(I), str(J), list(b1), str(K), list(b2), list(c), v])
    return {"objects": [str(I) for I in ivs], "homs": homs, "products": prods}

"""Command-line front end: algebra exports, verification suites, cover tables.

Exit status: 0 when every check passes, 1 on a mathematical mismatch, 2 on a
usage error.  Set STRANDMIRROR_MEM_MB to cap the address space of the process.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import bsidealg as B
from . import mirrorcheck as MC
from .combinat import all_subsets, build_complex_X, check_grading, h1_of_X, is_close, solve_grading
from .exactlinalg import parse_field
from .strandalg import (
    ClosureError,
    cohomology_table,
    degree_shift,
    f_multidegree,
    oracle_table,
)

MEM_ENV = "STRANDMIRROR_MEM_MB"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int | None = None
    k: int = 2
    wmax: int = 6
    field: str = "q"
    dvars: tuple[int, ...] = ()
    format: str = "json"
    threads: int = 1
    out: str | None = None
    initial: bool = False
    extra: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("k must be >= 1")
        if self.n is None:
            self.n = max(self.k - 1, 1)
        if not 1 <= self.n <= self.k + 1:
            raise UsageError(f"need 1 <= n <= k+1, got n={self.n}, k={self.k}")
        if self.wmax < 0:
            raise UsageError("wmax must be >= 0")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        if self.format not in ("json", "dot", "text"):
            raise UsageError(f"unknown format {self.format}")
        if self.dvars and len(self.dvars) != self.k:
            raise UsageError(f"--dvars needs {self.k} entries")
        try:
            self.field_obj = parse_field(self.field)
        except ValueError as e:
            raise UsageError(str(e)) from None

    @property
    def d_vars(self) -> tuple[int, ...]:
        return self.dvars or (0,) * self.k

    def require_mirror(self):
        if self.n != self.k - 1 or self.k < 2:
            raise UsageError("mirror comparisons need k >= 2 and n = k-1")


# ---------------------------------------------------------------- algebra


def _a_dot(n: int, k: int) -> str:
    objs = all_subsets(n, k)
    lines = [f"digraph A_n{n}_k{k} {{"]
    for S in objs:
        lines.append(f'  "{S}";')
    for S in objs:
        for T in objs:
            if S != T and is_close(S, T):
                m = "".join(map(str, f_multidegree(S, T)))
                lines.append(f'  "{S}" -> "{T}" [label="f {m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_algebra(side: str, cfg: RunConfig) -> tuple[int, object]:
    if side == "a":
        if cfg.format == "dot":
            return 0, _a_dot(cfg.n, cfg.k)
        tab = MC.strand_table(cfg.k, cfg.wmax, n=cfg.n)
        doc = {"side": "a", "n": cfg.n, "k": cfg.k, "wmax": cfg.wmax}
        doc.update(MC.table_json(tab))
        if cfg.dvars:
            g = solve_grading(cfg.n, cfg.k, cfg.d_vars)
            for h in doc["homs"]:
                S, T = _lookup(tab, h["src"]), _lookup(tab, h["tgt"])
                h["degrees"] = [degree_shift(S, T, _w(a, h["f_multidegree"]), g) for a in h["alphas"]]
        return 0, doc
    if side == "b":
        if cfg.format == "dot":
            return 0, B.quiver_dot(cfg.k, initial_only=cfg.initial)
        doc = {"side": "b", "k": cfg.k, "wmax": cfg.wmax, "initial_only": cfg.initial}
        doc.update(B.algebra_table(cfg.k, cfg.wmax, cfg.initial))
        return 0, doc
    raise UsageError(f"unknown side {side}")


def _lookup(tab, name):
    for S in tab["objects"]:
        if str(S) == name:
            return S
    raise KeyError(name)


def _w(alpha, m):
    return tuple(2 * a + x for a, x in zip(alpha, m))


# ---------------------------------------------------------------- verify suites


def _report(name: str, checked: int, mismatches: list, t0: float, **details) -> dict:
    out = {"name": name, "ok": not mismatches, "checked": checked, "mismatches": mismatches[:50],
           "wall_time": round(time.perf_counter() - t0, 3)}
    if details:
        out["details"] = details
    return out


def suite_mirror(cfg: RunConfig) -> list[dict]:
    cfg.require_mirror()
    grading = solve_grading(cfg.n, cfg.k, cfg.d_vars) if cfg.dvars else None
    r = MC.verify_mirror(cfg.k, cfg.wmax, grading, cfg.field_obj)
    parts = r["parts"]
    parts.append(MC.verify_stop_complexes(cfg.k, cfg.wmax, cfg.field_obj).to_json())
    return parts


def suite_formality(cfg: RunConfig) -> list[dict]:
    """Cohomology sits in one degree per multidegree, matches the oracle, and the
    distinguished representatives close under multiplication."""
    t0 = time.perf_counter()
    grading = solve_grading(cfg.n, cfg.k, cfg.d_vars)
    bad = []
    checked = 0
    objs = all_subsets(cfg.n, cfg.k)
    for S in objs:
        for T in objs:
            if not is_close(S, T):
                continue
            got = cohomology_table(S, T, cfg.wmax, cfg.field_obj, grading)
            want = oracle_table(S, T, cfg.wmax)
            for w in sorted(set(got) | set(want)):
                checked += 1
                h = {d: r for d, r in got.get(w, {}).items() if r}
                if sum(h.values()) != want.get(w, 0):
                    bad.append({"S": str(S), "T": str(T), "w": list(w), "kind": "rank", "got": h})
                elif h and set(h) != {degree_shift(S, T, w, grading)}:
                    bad.append({"S": str(S), "T": str(T), "w": list(w), "kind": "degree", "got": h})
    out = [_report("formality-cohomology", checked, bad, t0)]
    t0 = time.perf_counter()
    try:
        tab = MC.strand_table(cfg.k, cfg.wmax, n=cfg.n)
        out.append(_report("formality-closure", len(tab["products"]), [], t0))
    except ClosureError as e:
        out.append(_report("formality-closure", 1, [{"error": str(e)}], t0))
    return out


def suite_exactness(cfg: RunConfig) -> list[dict]:
    t0 = time.perf_counter()
    bad = []
    checked = 0
    k = cfg.k
    for I in B.all_intervals(k):
        for J in B.all_intervals(k):
            try:
                B.union(I, J)
            except ValueError:
                continue
            r = B.exactness_report(B.m_module_complex(k, I, J), cfg.wmax, field=cfg.field_obj)
            checked += r["checked"] + 1
            if r["failures"] or r["complex_errors"]:
                bad.append({"I": str(I), "J": str(J), "failures": r["failures"][:3], "errors": r["complex_errors"]})
    return [_report("m-module-exactness", checked, bad, t0)]


def suite_semiorth(cfg: RunConfig) -> list[dict]:
    k, W, F = cfg.k, cfg.wmax, cfg.field_obj
    t0 = time.perf_counter()
    r = B.check_semiorthogonal(k, W, F)
    out = [_report("semiorthogonal-vanishing", r["checked"], r["failures"], t0)]

    t0 = time.perf_counter()
    bad = []
    for i in range(1, k + 1):
        if not B.ext_pbar_self(i, k, W, F)["ok"]:
            bad.append({"check": "Ext(Pbar_i, Pbar_i)", "i": i})
        if not B.pbar_components_ok(i, k, W, F):
            bad.append({"check": "Pbar_i components", "i": i})
    stated = []
    for i in range(1, k):
        r = B.ext_pbar_projective(k, i, W, F)
        if not r["ok"]:
            bad.append({"check": "Ext(Pbar_k, P_[1,i]) = R/(x_[1,i], x_k)", "i": i, "degrees": r["degrees"]})
        stated.append({"i": i, "matches_x_[i+1,k]_form": r["stated"]})
    for j in range(2, k + 1):
        for m in range(j, k + 1):
            if not B.m_module_components_ok(k, j, m, W, F):
                bad.append({"check": "M{[j-1],[j,m]} components", "j": j, "m": m})
            for I in B.all_intervals(k):
                if I.lo < j <= I.hi + 1:
                    if not B.ext_m_projective(k, j, m, I, W, F)["ok"]:
                        bad.append({"check": "Ext^2(M, P_I)", "j": j, "m": m, "I": str(I)})
    out.append(_report("ext-tables", k * 2 + len(stated), bad, t0, ext1_stated_form=stated))
    return out


def suite_localization(cfg: RunConfig) -> list[dict]:
    k, W, F = cfg.k, cfg.wmax, cfg.field_obj
    t0 = time.perf_counter()
    r = B.localization_kernel_check(k, W, F)
    out = [_report("localization-kernels", r["checked"], r["failures"], t0)]
    t0 = time.perf_counter()
    bad = [{"j": j} for j in range(2, k + 1) if not B.restriction_sequence_ok(k, j, W, F)]
    out.append(_report("restriction-sequence", max(k - 1, 0), bad, t0))
    if cfg.n == k - 1 and k >= 2:
        out.append(MC.verify_stop_complexes(k, W, F).to_json())
    return out


def suite_gradingX(cfg: RunConfig) -> list[dict]:
    t0 = time.perf_counter()
    X = build_complex_X(cfg.n, cfg.k)
    betti, torsion = h1_of_X(X)
    bad = []
    if betti or torsion:
        bad.append({"h1_rank": betti, "torsion": torsion})
    out = [_report("h1-of-X", 1, bad, t0, vertices=len(X.vertices), edges=len(X.edges),
                   triangles=len(X.triangles), h1_rank=betti, torsion=torsion)]
    t0 = time.perf_counter()
    try:
        g = solve_grading(cfg.n, cfg.k, cfg.d_vars)
        viol = check_grading(g)
        out.append(_report("grading-solve", len(X.triangles), [{"triangle": [str(s) for s in t]} for t in viol], t0))
    except ArithmeticError as e:
        out.append(_report("grading-solve", 1, [{"error": str(e)}], t0))
    return out


SUITES = {
    "mirror": suite_mirror,
    "formality": suite_formality,
    "exactness": suite_exactness,
    "semiorth": suite_semiorth,
    "localization": suite_localization,
    "gradingX": suite_gradingX,
}


def _run_suite(args):
    name, cfg = args
    return name, SUITES[name](cfg)


def cmd_verify(suite: str, cfg: RunConfig) -> tuple[int, dict]:
    names = list(SUITES) if suite == "all" else [suite]
    if suite not in SUITES and suite != "all":
        raise UsageError(f"unknown suite {suite}")
    if suite in ("mirror",) or (suite == "all" and cfg.k >= 2):
        if suite == "all" and cfg.n != cfg.k - 1:
            raise UsageError("verify all needs n = k-1")
    if suite == "all" and cfg.k < 2:
        names = [s for s in names if s != "mirror"]
    t0 = time.perf_counter()
    jobs = [(nm, cfg) for nm in names]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            results = dict(ex.map(_run_suite, jobs))
    else:
        results = dict(map(_run_suite, jobs))
    parts = [p for nm in names for p in results[nm]]
    doc = {
        "suite": suite,
        "n": cfg.n,
        "k": cfg.k,
        "wmax": cfg.wmax,
        "field": cfg.field_obj.label(),
        "ok": all(p["ok"] for p in parts),
        "checked": sum(p["checked"] for p in parts),
        "mismatches": [m for p in parts for m in p["mismatches"]][:50],
        "parts": parts,
        "wall_time": round(time.perf_counter() - t0, 3),
    }
    return (0 if doc["ok"] else 1), doc


# ---------------------------------------------------------------- cover


def parse_phi(text: str, group: MC.GammaGroup, k: int) -> list:
    r = len(group.moduli)
    if ";" in text:
        vals = [tuple(int(x) for x in part.split(",")) for part in text.split(";")]
    elif r == 1:
        vals = [(int(x),) for x in text.split(",")]
    else:
        raise UsageError("for a product group give phi as 'a,b;c,d;...' with one tuple per variable")
    if len(vals) != k or any(len(v) != r for v in vals):
        raise UsageError(f"phi needs {k} entries of length {r}")
    return vals


def cmd_cover(cfg: RunConfig, gamma: str, phi: str | None) -> tuple[int, dict]:
    cfg.require_mirror()
    try:
        group = MC.parse_gamma(gamma)
    except ValueError as e:
        raise UsageError(str(e)) from None
    phis = parse_phi(phi, group, cfg.k) if phi else [group.zero()] * cfg.k
    base = MC.strand_table(cfg.k, cfg.wmax)
    cp = MC.crossed_product(cfg.k, group, phis, cfg.wmax, base)
    doc = {"side": "a", "n": cfg.n, "k": cfg.k, "wmax": cfg.wmax}
    doc.update(MC.table_json(cp, group))
    if group.order == 1:
        return 0, doc
    checked, bad = MC.associativity_errors(cp, cfg.extra.get("assoc_wmax", cfg.wmax))
    report = {
        "gamma": list(group.moduli),
        "phi": [list(p) for p in phis],
        "dimension_identity": MC.crossed_dimension_identity(cp, base),
        "degree_errors": len(MC.crossed_degree_errors(cp)),
        "associativity_checked": checked,
        "associativity_failures": bad[:20],
    }
    report["ok"] = report["dimension_identity"] and not report["degree_errors"] and not bad
    doc["report"] = report
    return (0 if report["ok"] else 1), doc


# ---------------------------------------------------------------- output


def _text(doc) -> str:
    if isinstance(doc, str):
        return doc
    if "parts" in doc:
        lines = []
        for p in doc["parts"]:
            state = "PASS" if p["ok"] else "FAIL"
            lines.append(f"{state} {p['name']}: {p['checked']} checks, {len(p['mismatches'])} mismatches")
        lines.append(f"{'PASS' if doc['ok'] else 'FAIL'} {doc['suite']} (n={doc['n']}, k={doc['k']}, wmax={doc['wmax']})")
        return "\n".join(lines) + "\n"
    lines = [f"objects: {len(doc.get('objects', []))}", f"hom blocks: {len(doc.get('homs', []))}",
             f"nonzero products: {len(doc.get('products', []))}"]
    if "report" in doc:
        lines.append("cover checks: " + ("PASS" if doc["report"]["ok"] else "FAIL"))
    return "\n".join(lines) + "\n"


def emit(doc, cfg: RunConfig):
    if cfg.format == "json" and not isinstance(doc, str):
        if "parts" in doc:
            text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
        else:
            text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = _text(doc)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
        if isinstance(doc, dict) and "parts" in doc:
            sys.stdout.write(_text(doc))
    else:
        sys.stdout.write(text)


def _cap_memory():
    mb = os.environ.get(MEM_ENV)
    if not mb:
        return
    try:
        import resource

        lim = int(mb) * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (lim, lim))
    except (ValueError, ImportError, OSError):
        print(f"warning: could not apply {MEM_ENV}={mb}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--wmax", type=int, default=6)
    common.add_argument("--field", default="q", help="q, z or fp:P")
    common.add_argument("--dvars", default="", help="comma separated degrees of x_1..x_k")
    common.add_argument("--format", default="json", choices=["json", "dot", "text"])
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out")

    p = argparse.ArgumentParser(prog="strandmirror", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    a = sub.add_parser("algebra", parents=[common], help="export an algebra table")
    a.add_argument("side", choices=["a", "b"])
    a.add_argument("--initial", action="store_true", help="B-side: initial intervals only")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    c = sub.add_parser("cover", parents=[common], help="Gamma-graded crossed product")
    c.add_argument("--gamma", default="1", help="moduli, e.g. 2 or 2,2")
    c.add_argument("--phi", help="images of x_i, e.g. 1,-1 or 1,0;0,1")
    c.add_argument("--assoc-wmax", type=int, help="bound for the exhaustive associativity check")
    return p


def _parse_dvars(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad --dvars {text!r}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _cap_memory()
    try:
        cfg = RunConfig(
            n=args.n, k=args.k, wmax=args.wmax, field=args.field, dvars=_parse_dvars(args.dvars),
            format=args.format, threads=args.threads, out=args.out, initial=getattr(args, "initial", False),
        )
        if args.cmd == "algebra":
            code, doc = cmd_algebra(args.side, cfg)
        elif args.cmd == "verify":
            code, doc = cmd_verify(args.suite, cfg)
        else:
            if args.assoc_wmax is not None:
                cfg.extra["assoc_wmax"] = args.assoc_wmax
            code, doc = cmd_cover(cfg, args.gamma, args.phi)
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    emit(doc, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())

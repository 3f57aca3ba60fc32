"""Command line: ``bihom check|construct|verify|search``.

Exit status: 0 all checks passed / construction verified; 1 a checked identity
failed; 2 a hypothesis or precondition failed; 3 input error (unreadable or
invalid file, missing component, search space too large).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Callable

from . import checkers as ck
from . import constructions as cons
from . import infinitesimal as inf
from . import quasitriangular as qt
from . import search as se
from .bundle import StructureBundle
from .checkers import CheckReport
from .errors import (
    AybeFailed,
    BihomError,
    CentralityFailed,
    ConclusionFailed,
    DimMismatch,
    FieldMismatch,
    HypothesisFailed,
    InvarianceFailed,
    InvariantViolation,
    MissingComponent,
    NonCommutingMaps,
    NotAMorphism,
    ParseError,
    Singular,
    SpaceTooLarge,
)
from .field import parse_field
from .fileformat import load_bundle, save_bundle
from .multilinear import LinearOperator, Tensor2

EXIT_OK, EXIT_IDENTITY, EXIT_HYPOTHESIS, EXIT_INPUT = 0, 1, 2, 3

_HYPOTHESIS_ERRORS = (HypothesisFailed, Singular, NonCommutingMaps, NotAMorphism, InvarianceFailed,
                      CentralityFailed, AybeFailed)
_INPUT_ERRORS = (ParseError, InvariantViolation, MissingComponent, FieldMismatch, DimMismatch, SpaceTooLarge)


def _m(b: StructureBundle, name: str) -> str | None:
    return name if name in b.maps else None


def _bracket(b: StructureBundle) -> str:
    return "bracket" if "bracket" in b.products else "mul"


def _module(b: StructureBundle) -> ck.Module:
    F = b.field
    a, be = b.map(_m(b, "alpha")).m, b.map(_m(b, "beta")).m
    am = b.map("alpha_M").m if "alpha_M" in b.maps else a
    bm = b.map("beta_M").m if "beta_M" in b.maps else be
    c = b.product("mul").c
    left = b.product("lact").c if "lact" in b.products else c
    right = b.product("ract").c if "ract" in b.products else c
    return ck.Module(F, c, a, be, am, bm, left=left, right=right)


def _maps4(b):
    return {n: _m(b, n) for n in ("alpha", "beta", "psi", "omega")}


CHECKS: dict[str, Callable[[StructureBundle, int | None], CheckReport]] = {
    "assoc": lambda b, w: ck.check_bihom_associative(b, "mul", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "coassoc": lambda b, w: ck.check_bihom_coassociative(b, "Delta", _m(b, "psi"), _m(b, "omega"), workers=w),
    "commutative": lambda b, w: ck.check_bihom_commutative(b, "mul", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "prelie": lambda b, w: ck.check_left_bihom_prelie(b, "mul", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "novikov": lambda b, w: ck.check_bihom_novikov(b, "mul", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "lie-left": lambda b, w: ck.check_bihom_lie(b, "left", _bracket(b), _m(b, "alpha"), _m(b, "beta"), workers=w),
    "lie-right": lambda b, w: ck.check_bihom_lie(b, "right", _bracket(b), _m(b, "alpha"), _m(b, "beta"), workers=w),
    "leibniz-left": lambda b, w: ck.check_bihom_leibniz(b, "left", _bracket(b), _m(b, "alpha"), _m(b, "beta"),
                                                        workers=w),
    "leibniz-right": lambda b, w: ck.check_bihom_leibniz(b, "right", _bracket(b), _m(b, "alpha"), _m(b, "beta"),
                                                         workers=w),
    "dendriform": lambda b, w: ck.check_bihom_dendriform(b, "prec", "succ", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "novikov-poisson": lambda b, w: ck.check_novikov_poisson(b, "mul", "star", _m(b, "alpha"), _m(b, "beta"),
                                                             workers=w),
    "module-left": lambda b, w: ck.check_module(_module(b), "left", workers=w),
    "module-right": lambda b, w: ck.check_module(_module(b), "right", workers=w),
    "bimodule": lambda b, w: ck.check_bimodule(_module(b), workers=w),
    "derivation": lambda b, w: ck.check_derivation(b, "D", _m(b, "tau"), _m(b, "sigma"), workers=w),
    "inf-bialgebra": lambda b, w: inf.validate_inf_bialgebra(b, workers=w),
    "rota-baxter": lambda b, w: ck.check_rota_baxter(b, "R", "mul", _m(b, "alpha"), _m(b, "beta"), workers=w),
    "aybe": lambda b, w: qt.check_aybe(b, "r"),
    "centrality": lambda b, w: qt.check_centrality(b, "r", workers=w),
}


def print_report(report: CheckReport, label: str, out=None, per_identity: bool = False) -> None:
    out = out or sys.stdout
    for v in report.violations:
        print(f"FAIL {v.identity} at {v.witness}: lhs={_fmt(v.lhs)} rhs={_fmt(v.rhs)}", file=out)
    if per_identity:
        failed = set(report.failed_ids())
        for ident in dict.fromkeys(report.checked):
            print(f"{'FAIL' if ident in failed else 'PASS'} {ident}", file=out)
    n = len(dict.fromkeys(report.checked))
    if report.passed:
        print(f"PASS {label}: {n} identities checked, no violations", file=out)
    else:
        print(f"FAIL {label}: {len(report.violations)} violation(s) in {len(report.failed_ids())} of {n} identities",
              file=out)


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return "[" + " ".join(_fmt(x) for x in v) + "]"
    return str(v)


def status_of(report: CheckReport) -> int:
    return EXIT_OK if report.passed else EXIT_IDENTITY


# ---------------------------------------------------------------------------
# construct


def _twist_names(args) -> list[str]:
    return [t for t in (args.twist or "ta,tb").split(",") if t]


def _construct(theorem: str, b: StructureBundle, args) -> cons.ConstructionResult:
    verify = not args.trust
    if theorem.startswith("yau-") and theorem != "yau-power":
        kind = theorem[4:]
        names = _twist_names(args)
        if kind == "inf-bialgebra":
            if len(names) != 4:
                names = ["ta", "tb", "tpsi", "tomega"]
            return cons.yau_twist(b, kind, *names, verify=verify)
        return cons.yau_twist(b, kind, names[0], names[1], verify=verify)
    if theorem == "yau-power":
        return cons.power_twist(b, args.n, args.kind or "novikov-poisson", verify=verify)
    if theorem == "gd-general":
        return cons.gelfand_dorfman(b, verify=verify)
    if theorem == "gd-cor-p-r":
        return cons.gd_cor_p_r(b, args.p, args.r, verify=verify)
    if theorem == "gd-commhom":
        return cons.gd_commhom(b, verify=verify)
    if theorem == "gd-gamma":
        return cons.gd_gamma(b, verify=verify)
    if theorem == "np-from-gd":
        return cons.np_from_gd(b, verify=verify)
    if theorem == "cor-4-6":
        return cons.cor_4_6(b, verify=verify)
    if theorem in ("lie-star-left", "lie-star-right"):
        return cons.lie_star(b, args.f, theorem.rsplit("-", 1)[1], _bracket(b))
    if theorem == "dend-from-rb":
        return cons.dendriform_from_rb(b, "R", "eta", verify=verify)
    if theorem == "prelie-from-dend":
        return cons.prelie_from_dendriform(b, verify=verify)
    if theorem == "inf-prelie":
        return inf.inf_prelie(b, verify=verify)
    if theorem == "coboundary":
        return qt.coboundary_bialgebra(b, "r", verify=verify)
    if theorem == "rb-from-r":
        R = qt.rb_from_r(b, "r", verify=verify)
        return cons.ConstructionResult(b.with_(maps={"R": R}, kind="rota-baxter",
                                               provenance=b.provenance + ("construct rb-from-r",)), "rb-from-r")
    if theorem == "delta-r":
        D = qt.delta_r(b, "r")
        return cons.ConstructionResult(b.with_(comuls={"Delta": D}, provenance=b.provenance + ("construct delta-r",)),
                                       "delta-r")
    raise KeyError(theorem)


CONSTRUCT_IDS = (
    "yau-assoc", "yau-commutative", "yau-prelie", "yau-novikov", "yau-novikov-poisson", "yau-inf-bialgebra",
    "yau-power", "gd-general", "gd-cor-p-r", "gd-commhom", "gd-gamma", "lie-star-left", "lie-star-right",
    "dend-from-rb", "prelie-from-dend", "np-from-gd", "cor-4-6", "inf-prelie", "coboundary", "rb-from-r", "delta-r",
)


# ---------------------------------------------------------------------------
# verify


def _verify(theorem: str, b: StructureBundle, args) -> CheckReport:
    w = args.workers
    if theorem == "inf-validate":
        return inf.validate_inf_bialgebra(b, workers=w)
    if theorem == "inf-delta-deriv":
        return inf.validate_inf_bialgebra(b, workers=w) + inf.delta_is_bimodule_derivation(b, workers=w)
    if theorem == "inf-mu-delta":
        rep = inf.validate_inf_bialgebra(b, workers=w)
        D = inf.mu_delta_operator(b, verify=False)
        bb = b.with_(maps={"_D": D, "_tau": b.map("beta") @ b.map("psi"), "_sigma": b.map("alpha") @ b.map("omega")})
        return rep + ck.check_derivation(bb, "_D", "_tau", "_sigma", workers=w)
    if theorem == "inf-prelie":
        res = inf.inf_prelie(b, verify=False)
        return (res.hypotheses + inf.bihomify_equal_formula(b, workers=w)
                + ck.check_left_bihom_prelie(res.bundle, workers=w))
    if theorem == "delta-r":
        D = qt.delta_r(b, "r")
        a, be = b.map(_m(b, "alpha")), b.map(_m(b, "beta"))
        bb = b.with_(comuls={"Delta": D}, maps={"alpha": a, "beta": be, "psi": be, "omega": a})
        return ck.check_infinitesimal_compat(bb, workers=w) + ck.check_coalgebra_morphism_data(bb, workers=w)
    if theorem == "aybe":
        return qt.check_aybe(b, "r")
    if theorem == "centrality":
        rep = qt.check_centrality(b, "r", workers=w)
        D = qt.delta_r(b, "r")
        bb = b.with_(comuls={"Delta": D}, maps={"psi": b.map(_m(b, "beta")), "omega": b.map(_m(b, "alpha"))})
        coassoc = ck.check_bihom_coassociative(bb, workers=w)
        if coassoc.passed != rep.passed:  # the two verdicts must agree
            raise ConclusionFailed("centrality", coassoc if not coassoc.passed else rep)
        return rep
    if theorem == "coboundary":
        res = qt.coboundary_bialgebra(b, "r", verify=False)
        return res.hypotheses + inf.validate_inf_bialgebra(res.bundle, workers=w)
    if theorem == "qt-char":
        res = qt.coboundary_bialgebra(b, "r", verify=False)
        return qt.check_quasitriangular_characterization(res.bundle, "r")
    if theorem == "rb-from-r":
        R = qt.rb_from_r(b, "r", verify=False)
        return ck.check_rota_baxter(b.with_(maps={"R": R}), "R", "mul", _m(b, "alpha"), _m(b, "beta"), workers=w)
    if theorem == "coincidence":
        return qt.coincidence_check(b, "r")
    if theorem in CONSTRUCT_IDS:
        ns = argparse.Namespace(**{**vars(args), "trust": True})
        res = _construct(theorem, b, ns)
        out = res.bundle
        concl = _conclusion_check(theorem, out, w)
        return res.hypotheses + concl
    raise KeyError(theorem)


def _conclusion_check(theorem: str, out: StructureBundle, w) -> CheckReport:
    kind = out.kind
    if theorem.startswith("lie-star"):
        kind = "novikov"
    table = {
        "assoc": "assoc", "commutative": "commutative", "prelie": "prelie", "novikov": "novikov",
        "novikov-poisson": "novikov-poisson", "dendriform": "dendriform", "inf-bialgebra": "inf-bialgebra",
        "rota-baxter": "rota-baxter",
    }
    if kind not in table:
        return CheckReport()
    return CHECKS[table[kind]](out, w)


VERIFY_IDS = ("inf-validate", "inf-delta-deriv", "inf-mu-delta", "delta-r", "aybe", "centrality", "qt-char",
              "coincidence") + CONSTRUCT_IDS


# ---------------------------------------------------------------------------
# search

SEARCH_ALIASES = {
    "aybe": "aybe_solutions",
    "central": "central_r",
    "derivations": "derivations",
    "gamma-derivations": "gamma_derivations",
    "tau-sigma-derivations": "tau_sigma_derivations",
    "morphisms": "algebra_morphisms",
    "commuting-pairs": "commuting_morphism_pairs",
    "assoc-products": "bihom_assoc_products",
}


def _basis_term(i, j, v, F) -> str:
    coeff = F.format(v)
    return f"{'' if coeff == '1' else coeff + '*'}e{i}(x)e{j}"


def _describe_tensor(t: Tensor2) -> str:
    F = t.field
    terms = [_basis_term(i, j, t.coeffs[i, j], F) for i in range(t.dim) for j in range(t.dim) if t.coeffs[i, j] != 0]
    return " + ".join(terms) if terms else "0"


def _describe_map(m: LinearOperator) -> str:
    F = m.field
    return "[" + "; ".join(" ".join(F.format(v) for v in row) for row in m.m) + "]"


def _describe_product(b: StructureBundle) -> str:
    F, c = b.field, b.product("mul").c
    terms = [f"e{i}e{j}:{F.format(c[i, j, k])}e{k}" for i in range(b.dim) for j in range(b.dim) for k in range(b.dim)
             if c[i, j, k] != 0]
    return " ".join(terms) if terms else "0"


def _run_search(args) -> int:
    target = SEARCH_ALIASES.get(args.target, args.target)
    F = parse_field(args.field)
    spec = se.SearchSpec(F, args.dim, target, seed=args.seed, max_candidates=args.max_candidates,
                         max_results=args.max_results, randomized=args.random, samples=args.samples)
    base = load_bundle(args.product) if args.product else None
    if base is not None and (base.field != F or base.dim != args.dim):
        raise DimMismatch(f"--product bundle is {base.field}, dim {base.dim}; search asked for {F}, dim {args.dim}")
    kw = dict(max_candidates=spec.max_candidates, max_results=spec.max_results, workers=args.workers)
    results: list[tuple[StructureBundle, str]] = []

    def need_base():
        if base is None:
            raise MissingComponent(f"target {target} needs --product")
        return base

    if target in ("aybe_solutions", "central_r"):
        b = need_base()
        for rm in se.enumerate_r(b, "aybe" if target == "aybe_solutions" else "central", **kw):
            out = b.with_(tensors={"r": rm.r}, kind="r-matrix")
            results.append((out, f"r = {_describe_tensor(rm.r)}"))
    elif target in ("derivations", "gamma_derivations", "tau_sigma_derivations"):
        b = need_base()
        tau = sigma = None
        if target == "gamma_derivations":
            tau = sigma = "gamma"
        elif target == "tau_sigma_derivations":
            tau, sigma = "tau", "sigma"
        for D in se.derivation_space(b, tau, sigma):
            results.append((b.with_(maps={"D": D}, kind="derivation"), f"D = {_describe_map(D)}"))
    elif target == "algebra_morphisms":
        b = need_base()
        for M in se.enumerate_morphisms(b, **kw):
            results.append((b.with_(maps={"ta": M}), f"M = {_describe_map(M)}"))
    elif target == "commuting_morphism_pairs":
        b = need_base()
        cw = [n for n in ("alpha", "beta") if n in b.maps]
        for A, B in se.enumerate_commuting_pairs(b, commutes_with=cw, **kw):
            results.append((b.with_(maps={"ta": A, "tb": B}), f"ta = {_describe_map(A)}, tb = {_describe_map(B)}"))
    elif target == "bihom_assoc_products":
        a = base.map("alpha") if base is not None and "alpha" in base.maps else None
        bt = base.map("beta") if base is not None and "beta" in base.maps else None
        for bun in se.scan_products(F, args.dim, "assoc", alpha=a, beta=bt, randomized=args.random, seed=args.seed,
                                    samples=args.samples, **kw):
            results.append((bun.with_(kind="assoc"), f"mul = {_describe_product(bun)}"))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = [f"# search {target} field={F.name} dim={args.dim} seed={args.seed} results={len(results)}"]
    for i, (bun, desc) in enumerate(results):
        name = f"result_{i:04d}.bundle"
        bun = bun.with_(provenance=bun.provenance + (f"search {target} result {i}",))
        save_bundle(bun, outdir / name)
        manifest.append(f"{name}\t{desc}")
    text = "\n".join(manifest) + "\n"
    (outdir / "manifest.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bihom", description="BiHom-structure checker, constructor and searcher")
    p.add_argument("--workers", type=int, default=None, help="worker threads (default: $BIHOM_WORKERS or 1)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized modes")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check the axioms of a structure")
    c.add_argument("kind", choices=sorted(CHECKS))
    c.add_argument("path")

    k = sub.add_parser("construct", help="apply a construction and write the result")
    k.add_argument("theorem", choices=CONSTRUCT_IDS)
    k.add_argument("path")
    k.add_argument("-o", "--out", required=True)
    k.add_argument("--trust", action="store_true", help="skip re-verifying the conclusion")
    _construct_options(k)

    v = sub.add_parser("verify", help="run a hypothesis -> construction -> conclusion pipeline")
    v.add_argument("theorem", choices=VERIFY_IDS)
    v.add_argument("path")
    _construct_options(v)

    s = sub.add_parser("search", help="enumerate ingredients over a small field")
    s.add_argument("target", choices=sorted(set(SEARCH_ALIASES) | set(se.TARGETS)))
    s.add_argument("--field", required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--product", help="bundle supplying the product and structure maps")
    s.add_argument("--out", default="search_out")
    s.add_argument("--max-candidates", type=int, default=se.DEFAULT_CEILING)
    s.add_argument("--max-results", type=int, default=None)
    s.add_argument("--random", action="store_true", help="randomized sampling instead of exhaustive enumeration")
    s.add_argument("--samples", type=int, default=1000)
    return p


def _construct_options(p):
    p.add_argument("--twist", help="comma-separated twisting map names (default ta,tb)")
    p.add_argument("--kind", help="structure kind for yau-power")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--f", default="f", help="map name for lie-star")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors are input errors, not hypothesis failures
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.workers is not None:
        os.environ[ck.WORKERS_ENV] = str(args.workers)
    try:
        if args.command == "check":
            b = load_bundle(args.path)
            rep = CHECKS[args.kind](b, args.workers)
            print_report(rep, args.kind)
            return status_of(rep)
        if args.command == "construct":
            b = load_bundle(args.path)
            res = _construct(args.theorem, b, args)
            save_bundle(res.bundle, args.out)
            print(f"PASS {args.theorem}: wrote {args.out}" + (" (unverified)" if args.trust else ""))
            return EXIT_OK
        if args.command == "verify":
            b = load_bundle(args.path)
            rep = _verify(args.theorem, b, args)
            print_report(rep, args.theorem, per_identity=True)
            return status_of(rep)
        if args.command == "search":
            return _run_search(args)
    except ConclusionFailed as exc:
        print_report(exc.report, exc.theorem, out=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except _HYPOTHESIS_ERRORS as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            for v in report.violations[:20]:
                print(f"FAIL {v.identity} at {v.witness}", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (*_INPUT_ERRORS, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, SpaceTooLarge):
            print("hint: raise --max-candidates or sample with --random --samples N", file=sys.stderr)
        return EXIT_INPUT
    except BihomError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT  # pragma: no cover


__all__ = ["main", "build_parser", "CHECKS", "CONSTRUCT_IDS", "VERIFY_IDS", "status_of", "print_report"]

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

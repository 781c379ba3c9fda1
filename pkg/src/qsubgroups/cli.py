"""Command-line front end.

Exit codes: 0 success or EQUIVALENT, 1 NOT_EQUIVALENT, 2 validation or
parse error, 3 a cap or budget was exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .census import invariant_consistency, run_census
from .cohom import h1, h1_torsion_reduction
from .cyclo import CLOSURE_CAP, CycNum, Sl2Elt
from .datum import SubgroupDatum, classify, invariants
from .equiv import FAMILY_BUDGET, NOT_EQUIVALENT, decide_datum_equivalence, infinite_family
from .errors import CapExceeded, ValidationError
from .files import dump_datum, read_datum, read_module
from .cartan import build_root_system

FORMAT_VERSION = 1

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# Machine output


def render_machine(payload: dict) -> str:
    return json.dumps({"format_version": FORMAT_VERSION, **payload}, sort_keys=True, indent=2,
                      ensure_ascii=False)


def parse_machine(text: str) -> dict:
    data = json.loads(text)
    if data.get("format_version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported report format_version {data.get('format_version')!r}")
    return data


def _table(rows, headers):
    cols = [headers] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cols[1:]]
    return "\n".join(lines)


def _kv(pairs):
    w = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(w)}  {v}" for k, v in pairs)


# ---------------------------------------------------------------------------
# Commands; each returns (exit_code, payload, text)


def cmd_classify(path, closure_cap=CLOSURE_CAP):
    d = read_datum(path, closure_cap)
    rep = classify(d).as_dict()
    gt = rep["gamma_tilde"]
    text = _kv([
        ("datum", d.name or path),
        ("type", d.root_system.code),
        ("ell", d.ell),
        ("dim_H", rep["dim_H"]),
        ("dim_A", rep["dim_A"]),
        ("semisimple", rep["semisimple"]),
        ("pointed_excluded", rep["pointed_excluded"]),
        ("dual_pointed_excluded", rep["dual_pointed_excluded"]),
        ("genuinely_new", rep["genuinely_new"]),
        ("|Gamma~|", gt["order"] if gt["order"] is not None else "infinite"),
        ("ell coprime det(DC)", rep["ell_coprime_det"]),
    ])
    return EXIT_OK, {"command": "classify", "path": str(path), "report": rep}, text


def cmd_invariants(path):
    d = read_datum(path)
    d.validate()
    gt, l0 = invariants(d)
    text = _kv([
        ("Gamma~ order", gt.order if gt.order is not None else "infinite"),
        ("Gamma~ invariant factors", gt.invariant_factors if gt.abelian else "nonabelian"),
        ("N^perp factors", gt.n_perp_factors),
        ("l0 dim", l0.dim_l0),
        ("l0 derived dim", l0.derived_dim),
        ("l0 Levi type", " x ".join(l0.levi_type) or "abelian"),
        ("l0 radical dim", l0.radical_dim),
    ])
    payload = {"command": "invariants", "path": str(path),
               "gamma_tilde": gt.as_dict(), "l0": l0.as_dict()}
    return EXIT_OK, payload, text


def cmd_equiv(p1, p2):
    d1, d2 = read_datum(p1), read_datum(p2)
    res = decide_datum_equivalence(d1, d2)
    if res.verdict == "NOT_APPLICABLE":
        raise ValidationError([f"equivalence test not applicable: {res.detail}"])
    lines = [res.verdict]
    if res.witness is not None:
        w = res.witness.as_dict()
        lines.append(f"tau = {w['tau']}")
        lines.append(f"slice element = {json.dumps(w['slice_element'])}")
        lines.append(f"v = {w['v']}")
        lines.append(res.detail)
    if res.certificate is not None:
        c = res.certificate
        lines.append(f"reason: {c.reason}")
        lines.append(f"searched: |tau|={c.tau_count} |slice|={c.slice_count} |v|={c.v_count} "
                     f"combinations={c.combinations}")
        lines.append(f"digest: {c.digest}")
        lines.append(c.note)
    code = EXIT_NOT_EQUIVALENT if res.verdict == NOT_EQUIVALENT else EXIT_OK
    return code, {"command": "equiv", "paths": [str(p1), str(p2)], "result": res.as_dict()}, "\n".join(lines)


def cmd_h1(path, cap):
    kind, obj = read_module(path)
    if kind == "torus":
        gamma, rank, action, on_gens = obj
        res = h1_torsion_reduction(gamma, rank, action, on_generators=on_gens)
        payload = {"command": "h1", "path": str(path), "mode": "torus", "level": res.level,
                   "level_h1_factors": list(res.level_h1.group.invariant_factors),
                   "kernel_order": res.kernel_order,
                   "h1_factors": list(res.torus_group.invariant_factors), "h1_order": res.torus_order}
        text = _kv([("mode", "torsion torus"), ("level", res.level),
                    ("H1 at level", res.level_h1.group), ("H1 (torus)", res.torus_group),
                    ("order", res.torus_order)])
        return EXIT_OK, payload, text
    res = h1(obj, cap=cap)
    payload = {"command": "h1", "path": str(path), "mode": "finite", "method": res.method,
               "z1_order": res.z1_order, "b1_order": res.b1_order,
               "h1_factors": list(res.group.invariant_factors), "h1_order": res.order}
    text = _kv([("method", res.method), ("|Z1|", res.z1_order), ("|B1|", res.b1_order),
                ("H1", res.group), ("order", res.order)])
    return EXIT_OK, payload, text


def cmd_family(lie_type, ell, gamma_order, count, seed, budget, out_dir=None):
    if lie_type != "A1":
        raise ValidationError(["family is available for type A1 (G = SL2) only"])
    if gamma_order < 2:
        raise ValidationError(["--gamma-order must be at least 2"])
    sigma0 = Sl2Elt.diag(CycNum.zeta(gamma_order))
    fam = infinite_family([sigma0], count, ell=ell, seed=seed, budget=budget)
    rs = build_root_system("A1")
    files = []
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        for i, s in enumerate(fam.members):
            d = SubgroupDatum(rs, ell, {1}, {1}, (), "matrix", sigma_matrices=tuple(s.generator_images),
                              name=f"family member {i + 1}")
            p = os.path.join(out_dir, f"member_{i + 1:02d}.toml")
            with open(p, "w", encoding="utf-8") as fh:
                fh.write(dump_datum(d))
            files.append(p)
    rows = []
    for i, (g, rep) in enumerate(zip(fam.conjugators, fam.classifications)):
        b, c = g.b.as_rational(), g.c.as_rational()
        rows.append([i + 1, f"b={b} c={c}", rep.dim_A, rep.genuinely_new])
    text = _table(rows, ["#", "conjugator", "dim_A", "genuinely_new"])
    text += f"\n{len(fam.certificates)} pairwise NOT_EQUIVALENT certificates; examined {fam.examined} conjugators"
    payload = {"command": "family", "type": lie_type, "ell": ell, "gamma_order": gamma_order,
               "seed": seed, "files": files, **fam.as_dict()}
    if not fam.complete:
        payload["error"] = f"cap family_budget={budget} exhausted with {len(fam.members)} of {count} members"
        return EXIT_CAP, payload, text + "\n" + payload["error"]
    return EXIT_OK, payload, text


def cmd_census(lie_type, ell, gamma_max, workers=1, check_invariants=False):
    rows = run_census(lie_type, ell, gamma_max, workers=workers)
    table = []
    for r in rows:
        s, rep = r.entry, r.report
        table.append([r.index + 1, f"+{list(s.iplus)} -{list(s.iminus)}",
                      "1" if all(not any(g) for g in s.N_generators) else str(list(s.N_generators)),
                      s.gamma_factors if s.gamma_kind == "abelian" else "matrix", s.variant,
                      rep["dim_A"], rep["gamma_tilde"]["order"], rep["l0"]["dim_l0"],
                      "ok" if r.consistent else "MISMATCH", rep["genuinely_new"]])
    text = _table(table, ["#", "parabolic", "N", "Gamma", "sigma", "dim_A", "|Gamma~|", "dim l0",
                          "consistency", "new"])
    payload = {"command": "census", "type": lie_type, "ell": ell, "gamma_max": gamma_max,
               "row_count": len(rows),
               "rows": [{"index": r.index, "iplus": list(r.entry.iplus), "iminus": list(r.entry.iminus),
                         "N_generators": [list(g) for g in r.entry.N_generators],
                         "gamma_kind": r.entry.gamma_kind, "gamma_factors": list(r.entry.gamma_factors),
                         "variant": r.entry.variant, "consistent": r.consistent, "report": r.report}
                        for r in rows]}
    code = EXIT_OK
    if check_invariants:
        chk = invariant_consistency(rows, workers=workers)
        payload["invariant_check"] = {"pairs": chk.pairs_checked, "equivalent": chk.equivalent_pairs,
                                      "violations": chk.violations}
        text += (f"\ninvariant check: {chk.pairs_checked} pairs, {chk.equivalent_pairs} equivalent, "
                 f"{len(chk.violations)} violations")
    text += f"\n{len(rows)} rows"
    if not all(r.consistent for r in rows):
        code = EXIT_INVALID
    return code, payload, text


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser():
    p = argparse.ArgumentParser(prog="qsubgroups",
                                description="Subgroup data, Hopf quotient invariants and embedding equivalence.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--cap-closure", type=int, default=CLOSURE_CAP, help="matrix group closure bound")
    common.add_argument("--cap-h1", type=int, default=10**7, help="cocycle enumeration bound")
    common.add_argument("--cap-budget", type=int, default=FAMILY_BUDGET, help="family conjugator budget")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="dimensions and classification flags of a datum")
    s.add_argument("datum")
    s = sub.add_parser("invariants", parents=[common], help="Gamma-tilde and l0 invariants of a datum")
    s.add_argument("datum")
    s = sub.add_parser("equiv", parents=[common], help="decide equivalence of two full data")
    s.add_argument("datum1")
    s.add_argument("datum2")
    s = sub.add_parser("h1", parents=[common], help="first cohomology of a module file")
    s.add_argument("module")
    s = sub.add_parser("family", parents=[common], help="pairwise non-equivalent embeddings")
    s.add_argument("--type", default="A1")
    s.add_argument("--ell", type=int, default=5)
    s.add_argument("--gamma-order", type=int, default=3)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None, help="directory for member datum files")
    s = sub.add_parser("census", parents=[common], help="enumerate data within bounds")
    s.add_argument("--type", default="A1")
    s.add_argument("--ell", type=int, default=3)
    s.add_argument("--gamma-max", type=int, default=4)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--check-invariants", action="store_true",
                   help="also decide every pair of full data and compare invariants")
    return p


def dispatch(args):
    c = args.command
    if c == "classify":
        return cmd_classify(args.datum, args.cap_closure)
    if c == "invariants":
        return cmd_invariants(args.datum)
    if c == "equiv":
        return cmd_equiv(args.datum1, args.datum2)
    if c == "h1":
        return cmd_h1(args.module, args.cap_h1)
    if c == "family":
        return cmd_family(args.type, args.ell, args.gamma_order, args.count, args.seed, args.cap_budget, args.out)
    if c == "census":
        build_root_system(args.type)
        if args.gamma_max < 1:
            raise ValidationError(["--gamma-max must be positive"])
        return cmd_census(args.type, args.ell, args.gamma_max, args.workers, args.check_invariants)
    raise ValidationError([f"unknown command {c}"])  # pragma: no cover


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")
    try:
        code, payload, text = dispatch(args)
    except ValidationError as e:
        return _fail(fmt, EXIT_INVALID, "validation", e.issues)
    except CapExceeded as e:
        return _fail(fmt, EXIT_CAP, "cap", [str(e)], cap=e.cap_name)
    except OSError as e:
        return _fail(fmt, EXIT_INVALID, "io", [str(e)])
    if fmt == "machine":
        print(render_machine({"exit_code": code, **payload}))
    else:
        print(text)
    return code


def _fail(fmt, code, kind, issues, **extra):
    if fmt == "machine":
        print(render_machine({"exit_code": code, "error": kind, "issues": issues, **extra}))
    else:
        for msg in issues:
            print(f"error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

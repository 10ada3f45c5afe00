"""Command-line front end: point evaluation, catalog listing, and full
verification runs with machine-readable reports.

Exit codes: 0 success (verify: all non-quarantined checks passed),
1 verification failures, 2 parameter/domain/config errors. Reports are
deterministic for a fixed config: sampling is seeded, records are sorted
by (kind, formula id, point index, variant), floats serialize at 17
significant digits.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

from . import decompositions as dec
from . import identities as op
from . import quadrature as quad
from .errors import DomainError, LauricellaError, ParamError
from .report import fmt_float, summarize, write_csv, write_json
from .series import EvalOptions, Family, LauricellaParams, eval_lauricella

_INTEGRAL_IDS = ("5.1", "5.2", "5.3", "5.4")

# slot layout per family: "s" scalar, "r" one value per variable
_SHAPES = {
    "A": ("s", "r", "r"),
    "B": ("r", "r", "s"),
    "C": ("s", "s", "r"),
    "D": ("s", "r", "s"),
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    points_per_formula: int = 20
    margin: float = 0.7
    tolerance: float = 1e-8
    degree_cap: int = 8
    outer_cap: int = 24
    quad_nodes: int = 48
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not 0.0 < self.margin < 1.0:
            raise ParamError(f"margin {self.margin} outside (0, 1)")
        if not self.tolerance > 0.0:
            raise ParamError(f"tolerance {self.tolerance} must be positive")
        for name in ("points_per_formula", "degree_cap", "outer_cap",
                     "quad_nodes"):
            if getattr(self, name) < 1:
                raise ParamError(f"{name} must be >= 1")
        if self.format not in ("json", "csv"):
            raise ParamError(f"format {self.format!r} not one of json, csv")


def _floats(text, flag):
    try:
        vals = tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ParamError(f"could not parse {flag} value {text!r} as "
                         "comma-separated numbers") from None
    if not vals:
        raise ParamError(f"{flag} must not be empty")
    return vals


def _build_params(args):
    try:
        fam = Family[args.family.upper()]
    except KeyError:
        raise ParamError(f"unknown family {args.family!r}; "
                         "expected one of A, B, C, D") from None
    slots = {"alpha": _floats(args.alpha, "--alpha"),
             "beta": _floats(args.beta, "--beta"),
             "gamma": _floats(args.gamma, "--gamma")}
    shape = dict(zip(("alpha", "beta", "gamma"), _SHAPES[fam.name]))
    r_slots = {k for k, kind in shape.items() if kind == "r"}
    lengths = {len(slots[k]) for k in r_slots}
    if len(lengths) > 1:
        raise ParamError(
            f"family {fam.name} needs matching lengths for "
            f"{', '.join('--' + k for k in sorted(r_slots))}")
    r = lengths.pop()
    if args.r is not None and args.r != r:
        raise ParamError(f"--r {args.r} contradicts vector length {r}")
    for k, kind in shape.items():
        if kind == "s" and len(slots[k]) != 1:
            raise ParamError(f"family {fam.name} expects a single --{k} "
                             f"value, got {len(slots[k])}")
    return LauricellaParams(fam, r, slots["alpha"], slots["beta"],
                            slots["gamma"])


def cmd_eval(args) -> int:
    params = _build_params(args)
    point = _floats(args.point, "--point")
    if len(point) != params.arity:
        raise ParamError(f"--point has {len(point)} coordinates but the "
                         f"parameter vectors give r = {params.arity}")
    opts = EvalOptions(degree_cap=args.degree_cap, rel_tol=args.rel_tol)
    res = eval_lauricella(params, point, opts)
    print(f"value: {fmt_float(res.value)}")
    print(f"terms summed: {res.terms_summed}")
    print(f"tail estimate: {fmt_float(res.tail_estimate)}")
    print(f"shells used: {res.shells_used}")
    print(f"converged: {'yes' if res.converged_flag else 'no'}")
    return 0


# ---------------------------------------------------------------------------

def _select_ids(args):
    dec_all = [d.id for d in dec.list_formulas()]
    op_all = [d.id for d in op.list_operator_identities()]
    want_dec, want_op, want_int = [], [], []
    if args.ids:
        dec_set, op_set = set(dec_all), set(op_all)
        for fid in args.ids:
            if fid in dec_set:
                want_dec.append(fid)
            elif fid in op_set:
                want_op.append(fid)
            elif fid in _INTEGRAL_IDS:
                want_int.append(fid)
            else:
                raise ParamError(f"unknown formula id {fid!r}")
    everything = args.all or not (args.ids or args.operators or args.integrals)
    if args.operators or everything:
        want_op = op_all
    if args.integrals or everything:
        want_int = list(_INTEGRAL_IDS)
    if everything:
        want_dec = dec_all
    return want_dec, want_op, want_int


def _run_verify(config: RunConfig, dec_ids, op_ids, int_ids):
    recs = []
    for fid in dec_ids:
        desc = dec.formula(fid)
        cases = dec.sample_points(desc, config.points_per_formula,
                                  config.margin, config.seed)
        for i, (binding, point) in enumerate(cases):
            recs.append(dec.verify(desc, binding, point,
                                   tol=config.tolerance,
                                   n_outer=config.outer_cap, point_index=i))
            if desc.quarantined:
                # the corrected reading is a real claim; it must pass
                recs.append(dec.verify(desc, binding, point,
                                       tol=config.tolerance,
                                       n_outer=config.outer_cap,
                                       variant="corrected", point_index=i))
    for fid in op_ids:
        desc = op.operator_identity(fid)
        binds = op.sample_bindings(desc, config.points_per_formula,
                                   config.seed)
        if desc.delegated:
            pts = op.sample_delegated_points(config.points_per_formula,
                                             config.margin, config.seed)
            for i, (b, p) in enumerate(zip(binds, pts)):
                recs.append(op.verify_operational_identity(
                    desc, b, cap=config.degree_cap, tol=config.tolerance,
                    point=p, point_index=i))
        else:
            for i, b in enumerate(binds):
                recs.append(op.verify_operational_identity(
                    desc, b, cap=config.degree_cap, tol=config.tolerance,
                    point_index=i))
    # quadrature is the expensive path; a few points suffice to pin both
    # kernel readings down
    n_int = min(config.points_per_formula, 3)
    for fid in int_ids:
        for i, (params, eps, point) in enumerate(
                quad.sample_integral_cases(fid, n_int, config.seed)):
            recs.extend(quad.both_variant_reports(
                fid, params, point, tol=config.tolerance, eps=eps,
                n=config.quad_nodes, point_index=i))
    return recs


def _report_path(args, fmt):
    if args.output:
        return args.output
    out_dir = os.environ.get("LAURICELLA_REPORT_DIR", ".")
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, f"verify_report.{fmt}")


def cmd_verify(args) -> int:
    path = _report_path(args, args.format)
    config = RunConfig(seed=args.seed, points_per_formula=args.points,
                       margin=args.margin, tolerance=args.tol,
                       degree_cap=args.degree_cap, outer_cap=args.outer_cap,
                       quad_nodes=args.quad_nodes, output_path=path,
                       format=args.format)
    dec_ids, op_ids, int_ids = _select_ids(args)
    recs = _run_verify(config, dec_ids, op_ids, int_ids)
    writer = write_json if config.format == "json" else write_csv
    cfg = asdict(config)
    del cfg["output_path"]      # keep report bytes path-independent
    writer(recs, cfg, path)
    s = summarize(recs)
    print(f"attempted: {len(dec_ids)} decomposition formulas + "
          f"{len(op_ids)} operator identities + "
          f"{len(int_ids)} integral reps")
    print(f"checks: {s['checks']} | passed: {s['passed']} | "
          f"failed: {s['failed']} | "
          f"quarantined failures: {s['quarantined_failures']}")
    print("suspected misprints: "
          + (", ".join(s["suspected_misprints"]) or "none"))
    print(f"report: {path}")
    return 1 if s["failed"] else 0


# ---------------------------------------------------------------------------

_CATALOG_ROW_KEYS = {"id": str, "family": str, "status": str}
_OPERATOR_ROW_KEYS = {"id": str, "family": str, "delegated": bool}


def _operator_records():
    rows = []
    for d in op.list_operator_identities():
        rows.append({
            "id": d.id,
            "family": d.family.name,
            "arity": d.arity,
            "lhs_kind": d.lhs_kind,
            "chain": [list(step) for step in d.chain],
            "inner_kind": d.inner_kind,
            "inner_slots": None if d.inner_slots is None
                           else [list(g) for g in d.inner_slots],
            "free_slots": list(d.free_slots),
            "delegated": d.delegated,
        })
    return rows


def _check_rows(rows, required):
    for row in rows:
        for key, typ in required.items():
            if not isinstance(row.get(key), typ):
                raise RuntimeError(
                    f"catalog row {row.get('id')!r} fails schema: "
                    f"{key} should be {typ.__name__}")


def _chain_label(chain):
    parts = []
    for kind, vs, upper, lower in chain:
        tag = "all" if vs == "all" else ",".join(str(j) for j in vs)
        parts.append(f"{kind}[{tag}]({upper};{lower})")
    return " ".join(parts)


def cmd_catalog(args) -> int:
    if args.operators:
        rows = _operator_records()
        _check_rows(rows, _OPERATOR_ROW_KEYS)
        if args.format == "json":
            print(json.dumps({"kind": "operator-identities",
                              "count": len(rows), "rows": rows},
                             indent=2, sort_keys=True))
        else:
            for row in rows:
                kind = "numeric" if row["delegated"] else "coefficient"
                arity = row["arity"] if row["arity"] is not None else "r"
                print(f"{row['id']:<5} family {row['family']}  r={arity:<2} "
                      f"{kind:<11} {_chain_label(row['chain'])}")
        return 0
    rows = dec.catalog_records()
    _check_rows(rows, _CATALOG_ROW_KEYS)
    if args.format == "json":
        print(json.dumps({"kind": "decomposition-formulas",
                          "count": len(rows), "rows": rows},
                         indent=2, sort_keys=True))
    else:
        for row in rows:
            arity = row["arity"] if row["arity"] is not None else "r"
            print(f"{row['id']:<5} family {row['family']}  r={arity:<2} "
                  f"{row['rhs_kind']:<25} {row['status']}")
    return 0


# ---------------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(
        prog="lauricella",
        description="Evaluate the four multivariable hypergeometric "
                    "families and verify their identity catalog.")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one function at one point")
    pe.add_argument("--family", required=True, help="A, B, C, or D")
    pe.add_argument("--alpha", required=True, help="comma-separated value(s)")
    pe.add_argument("--beta", required=True, help="comma-separated value(s)")
    pe.add_argument("--gamma", required=True, help="comma-separated value(s)")
    pe.add_argument("--point", required=True, help="comma-separated x_1..x_r")
    pe.add_argument("--r", type=int, default=None,
                    help="variable count (checked against vector lengths)")
    pe.add_argument("--degree-cap", type=int, default=120)
    pe.add_argument("--rel-tol", type=float, default=1e-14)
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="run identity verification suites")
    pv.add_argument("ids", nargs="*", help="formula ids; empty means all")
    pv.add_argument("--all", action="store_true",
                    help="decompositions + operators + integrals")
    pv.add_argument("--operators", action="store_true",
                    help="include the operator-identity suite")
    pv.add_argument("--integrals", action="store_true",
                    help="include the integral-representation suite")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--points", type=int, default=20,
                    help="points (or bindings) per formula")
    pv.add_argument("--margin", type=float, default=0.7)
    pv.add_argument("--tol", type=float, default=1e-8)
    pv.add_argument("--degree-cap", type=int, default=8,
                    help="truncation cap for coefficient-level checks")
    pv.add_argument("--outer-cap", type=int, default=24,
                    help="outer summation cap for decomposition checks")
    pv.add_argument("--quad-nodes", type=int, default=48)
    pv.add_argument("--output", default=None, help="report file path "
                    "(default: $LAURICELLA_REPORT_DIR/verify_report.<fmt>)")
    pv.add_argument("--format", choices=("json", "csv"), default="json")
    pv.set_defaults(func=cmd_verify)

    pc = sub.add_parser("catalog", help="list the formula catalogs")
    pc.add_argument("--operators", action="store_true",
                    help="operator identities instead of decompositions")
    pc.add_argument("--format", choices=("text", "json"), default="text")
    pc.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ParamError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except LauricellaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

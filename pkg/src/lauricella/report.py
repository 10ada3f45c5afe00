"""Verification records and machine-readable report files.

Every check anywhere in the package (decomposition formulas, operator
identities, integral representations) produces one flat VerifyReport
record. Floats are serialized as 17-significant-digit strings in both
JSON and CSV so reports round-trip losslessly and byte-identical runs
diff clean; nothing time- or host-dependent is written.
"""

import csv
import json
from dataclasses import dataclass, field

__all__ = ["VerifyReport", "REPORT_SCHEMA", "fmt_float", "write_json",
           "write_csv", "summarize", "sort_records"]


def fmt_float(x) -> str:
    return "%.17g" % float(x)


@dataclass
class VerifyReport:
    """One verification record.

    For pointwise numeric checks lhs/rhs are the two evaluated values at
    `point`. For coefficient-level operator checks point is None,
    abs_err is the worst coefficient difference, lhs/rhs the coefficients
    at the worst index, and outer_terms the number of coefficients
    compared.
    """

    formula_id: str
    kind: str                       # "decomposition" | "operator" | "integral"
    binding: dict
    point: tuple | None
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    lhs_tail: float = 0.0
    rhs_tail: float = 0.0
    outer_terms: int = 0
    passed: bool = False
    point_index: int = 0
    variant: str = "as-printed"     # or "corrected" for quarantined rereads
    quarantined: bool = False
    note: str = ""

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "formula_id": self.formula_id,
            "variant": self.variant,
            "point_index": self.point_index,
            "binding": {k: fmt_float(v) for k, v in sorted(self.binding.items())},
            "point": None if self.point is None
                     else [fmt_float(v) for v in self.point],
            "lhs": fmt_float(self.lhs),
            "rhs": fmt_float(self.rhs),
            "abs_err": fmt_float(self.abs_err),
            "rel_err": fmt_float(self.rel_err),
            "lhs_tail": fmt_float(self.lhs_tail),
            "rhs_tail": fmt_float(self.rhs_tail),
            "outer_terms": self.outer_terms,
            "passed": self.passed,
            "quarantined": self.quarantined,
            "note": self.note,
        }


REPORT_SCHEMA = {
    "type": "object",
    "required": ["config", "summary", "records"],
    "properties": {
        "config": {"type": "object"},
        "summary": {
            "type": "object",
            "required": ["checks", "passed", "failed", "quarantined_failures",
                         "suspected_misprints"],
            "properties": {
                "checks": {"type": "integer"},
                "passed": {"type": "integer"},
                "failed": {"type": "integer"},
                "quarantined_failures": {"type": "integer"},
                "suspected_misprints": {
                    "type": "array", "items": {"type": "string"}},
            },
        },
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "formula_id", "variant", "point_index",
                             "binding", "point", "lhs", "rhs", "abs_err",
                             "rel_err", "lhs_tail", "rhs_tail", "outer_terms",
                             "passed", "quarantined", "note"],
                "properties": {
                    "kind": {"enum": ["decomposition", "operator", "integral"]},
                    "formula_id": {"type": "string"},
                    "variant": {"type": "string"},
                    "point_index": {"type": "integer"},
                    "binding": {"type": "object",
                                "additionalProperties": {"type": "string"}},
                    "point": {"type": ["array", "null"],
                              "items": {"type": "string"}},
                    "lhs": {"type": "string"},
                    "rhs": {"type": "string"},
                    "abs_err": {"type": "string"},
                    "rel_err": {"type": "string"},
                    "lhs_tail": {"type": "string"},
                    "rhs_tail": {"type": "string"},
                    "outer_terms": {"type": "integer"},
                    "passed": {"type": "boolean"},
                    "quarantined": {"type": "boolean"},
                    "note": {"type": "string"},
                },
            },
        },
    },
}

_KIND_ORDER = {"decomposition": 0, "operator": 1, "integral": 2}


def _formula_sort_key(fid: str):
    parts = fid.split(".")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        return (99, fid)


def sort_records(reports):
    """Deterministic order regardless of execution order."""
    return sorted(reports, key=lambda r: (
        _KIND_ORDER.get(r.kind, 9), _formula_sort_key(r.formula_id),
        r.point_index, r.variant))


def summarize(reports) -> dict:
    reports = list(reports)
    failed = [r for r in reports if not r.passed and not r.quarantined]
    qfail = [r for r in reports if not r.passed and r.quarantined]
    misprints = sorted({r.formula_id for r in reports if r.quarantined},
                       key=_formula_sort_key)
    return {
        "checks": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "failed": len(failed),
        "quarantined_failures": len(qfail),
        "suspected_misprints": misprints,
    }


def write_json(reports, config: dict, path):
    reports = sort_records(reports)
    doc = {
        "config": config,
        "summary": summarize(reports),
        "records": [r.to_record() for r in reports],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc


_CSV_COLUMNS = ["kind", "formula_id", "variant", "point_index", "binding",
                "point", "lhs", "rhs", "abs_err", "rel_err", "lhs_tail",
                "rhs_tail", "outer_terms", "passed", "quarantined", "note"]


def write_csv(reports, config: dict, path):
    reports = sort_records(reports)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_CSV_COLUMNS)
        for r in reports:
            rec = r.to_record()
            rec["binding"] = ";".join(
                f"{k}={v}" for k, v in rec["binding"].items())
            rec["point"] = "" if rec["point"] is None else \
                ";".join(rec["point"])
            w.writerow([rec[c] for c in _CSV_COLUMNS])

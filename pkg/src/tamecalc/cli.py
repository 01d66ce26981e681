"""Command-line surface: gen, check, connect, verify.

Exit codes: 0 success, 1 mathematical failure, 2 unreadable or malformed
input.  Reports go to stdout, human-readable by default, machine-readable
with --json; the connect artifact written to disk contains no timing, so
reruns on the same input are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .builders import PRESETS
from .calculus import build_symmetry, validate_calculus
from .connection import (
    Connection,
    Geometry,
    check_compat_cov,
    check_torsionless_cov,
    leibniz_witness,
    levi_civita_direct,
    levi_civita_koszul,
    torsion,
)
from .errors import ContractViolationError, EngineError, SpecFileError
from .metric import validate_metric
from .specfile import (
    SpecData,
    connection_from_json,
    connection_to_json,
    dumps_canonical,
    input_digest,
    load_json,
    load_metric_override,
    load_frame_override,
    load_spec,
    save_spec,
)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


class ReportBuilder:
    def __init__(self, command: str, path: str | None, seed: int | None):
        self.command = command
        self.path = path
        self.seed = seed
        self.checks: list[dict] = []
        self.summary: dict = {}
        self.t0 = time.monotonic()

    def add(self, name: str, ok: bool, witness=None) -> bool:
        self.checks.append({
            "name": name,
            "ok": bool(ok),
            "witness": None if witness is None else str(witness),
        })
        return ok

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def finish(self, exit_code: int) -> dict:
        report = {
            "tool": "tamecalc",
            "version": __version__,
            "command": self.command,
            "input": self.path,
            "input_digest": input_digest(self.path) if self.path else None,
            "seed": self.seed,
            "checks": self.checks,
            "summary": self.summary,
            "ok": self.ok,
            "exit_code": exit_code,
            "timing_ms": round((time.monotonic() - self.t0) * 1000.0, 3),
        }
        return report


def emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for c in report["checks"]:
        mark = "ok  " if c["ok"] else "FAIL"
        line = f"  [{mark}] {c['name']}"
        if not c["ok"] and c.get("witness"):
            line += f": {c['witness']}"
        print(line)
    for key, value in report["summary"].items():
        print(f"{key}: {str(value).lower() if isinstance(value, bool) else value}")


# ---------------------------------------------------------------------------
# Shared pipeline pieces
# ---------------------------------------------------------------------------

def run_structure_checks(spec: SpecData, rb: ReportBuilder, metric_path: str | None):
    """Algebra, calculus, tameness and metric validation; returns what passed."""
    calc = spec.calculus
    try:
        calc.algebra.validate()
        rb.add("algebra_axioms", True)
    except ContractViolationError as exc:
        rb.add("algebra_axioms", False, exc)
        rb.summary.update(calculus_valid=False, tame=False, metric_valid=False)
        return None, None

    calc_report = validate_calculus(calc)
    for item in calc_report:
        rb.add(item.name, item.ok, item.witness)
    rb.summary["calculus_valid"] = calc_report.ok

    outcome = build_symmetry(calc)
    if outcome.ok:
        rb.add("tame_certificate", True)
        for flag, value in sorted(outcome.certificate.flags.items()):
            rb.add(f"tameness_{flag}", value)
    else:
        rb.add("tame_certificate", False,
               f"{outcome.failure.condition}: {outcome.failure.detail}")
    rb.summary["tame"] = outcome.ok
    if not outcome.ok:
        rb.summary["metric_valid"] = False
        return None, None
    cert = outcome.certificate

    g_in = spec.metric_plain
    if metric_path is not None:
        g_in = load_metric_override(metric_path, calc.one_forms.dim, calc.algebra.dim)
    m_out = validate_metric(calc, cert, g_in)
    if m_out.ok:
        rb.add("metric_valid", True)
    else:
        rb.add("metric_valid", False, f"{m_out.failure.reason}: {m_out.failure.detail}")
    rb.summary["metric_valid"] = m_out.ok
    return (cert, m_out.metric) if m_out.ok else (cert, None)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    maker = PRESETS[args.preset]
    preset = maker(args.n)
    spec = SpecData(name=preset.name, calculus=preset.calculus,
                    metric_plain=preset.metric_plain)
    out = args.out or f"{preset.name}.json"
    save_spec(spec, out)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_check(args) -> int:
    rb = ReportBuilder("check", args.spec, args.seed)
    spec = load_spec(args.spec)
    cert, metric = run_structure_checks(spec, rb, args.metric)
    code = EXIT_OK if (rb.ok and metric is not None) else EXIT_MATH
    emit(rb.finish(code), args.json)
    return code


def cmd_connect(args) -> int:
    rb = ReportBuilder("connect", args.spec, args.seed)
    spec = load_spec(args.spec)
    cert, metric = run_structure_checks(spec, rb, args.metric)
    if cert is None or metric is None or not rb.ok:
        emit(rb.finish(EXIT_MATH), args.json)
        return EXIT_MATH

    frame = spec.frame
    if args.frame is not None:
        frame = load_frame_override(args.frame, spec.calculus.one_forms.dim)
    geo = Geometry(spec.calculus, cert, metric, frame=frame)
    try:
        koszul = levi_civita_koszul(geo)
        direct = levi_civita_direct(geo)
    except EngineError as exc:
        rb.add(f"solver_{exc.code}", False, exc)
        emit(rb.finish(EXIT_MATH), args.json)
        return EXIT_MATH

    conn = koszul.connection
    checks = {
        "leibniz": leibniz_witness(spec.calculus, conn) is None,
        "route_equality": conn.nabla == direct.connection.nabla,
        "torsion_zero": torsion(spec.calculus, conn).is_zero(),
        "compatibility": check_compat_cov(geo, conn).ok,
        "table_in_fields": koszul.table_in_fields,
        "uniqueness_kernel_zero": direct.kernel_dim == 0,
    }
    for name, ok in sorted(checks.items()):
        rb.add(name, ok)
    rb.summary["levi_civita"] = all(checks.values())

    out = args.out or str(Path(args.spec).with_suffix("")) + ".connection.json"
    artifact = connection_to_json(conn.nabla, koszul.table, checks, input_digest(args.spec))
    Path(out).write_text(dumps_canonical(artifact), encoding="utf-8")
    rb.summary["artifact"] = out
    code = EXIT_OK if all(checks.values()) else EXIT_MATH
    emit(rb.finish(code), args.json)
    return code


def cmd_verify(args) -> int:
    rb = ReportBuilder("verify", args.spec, args.seed)
    spec = load_spec(args.spec)
    cert, metric = run_structure_checks(spec, rb, args.metric)
    if cert is None or metric is None or not rb.ok:
        emit(rb.finish(EXIT_MATH), args.json)
        return EXIT_MATH

    calc = spec.calculus
    obj = load_json(args.connection)
    nabla, _table = connection_from_json(obj, calc.tensor_square.dim, calc.one_forms.dim)
    conn = Connection(nabla)

    witness = leibniz_witness(calc, conn)
    rb.add("leibniz", witness is None, witness)
    if witness is not None:
        rb.summary["valid_connection"] = False
        emit(rb.finish(EXIT_MATH), args.json)
        return EXIT_MATH
    rb.summary["valid_connection"] = True

    geo = Geometry(calc, cert, metric)
    t_form = torsion(calc, conn).is_zero()
    t_cov = check_torsionless_cov(geo, conn)
    rb.add("torsion_zero_form", t_form)
    rb.add("torsion_zero_covariant", t_cov.ok,
           None if t_cov.ok else f"failing field pairs {list(t_cov.witnesses)[:3]}")
    c_cov = check_compat_cov(geo, conn)
    rb.add("compatibility_covariant", c_cov.ok,
           None if c_cov.ok else f"failing field triples {list(c_cov.witnesses)[:3]}")
    rb.summary["torsionless"] = t_form
    rb.summary["compatible"] = c_cov.ok
    code = EXIT_OK if rb.ok else EXIT_MATH
    emit(rb.finish(code), args.json)
    return code


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tamecalc",
        description="Exact tameness checks and Levi-Civita connections for "
                    "finite-dimensional differential calculi over Q(i).")
    ap.add_argument("--version", action="version", version=f"tamecalc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a preset spec file")
    g.add_argument("preset", choices=sorted(PRESETS))
    g.add_argument("--n", type=int, default=2, help="preset size parameter")
    g.add_argument("--out", help="output path (default <preset>-<n>.json)")
    g.set_defaults(fn=cmd_gen)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--metric", help="metric override file")
        p.add_argument("--seed", type=int, default=None, help="recorded in the report")

    c = sub.add_parser("check", help="validate calculus axioms, tameness and the metric")
    c.add_argument("spec")
    common(c)
    c.set_defaults(fn=cmd_check)

    k = sub.add_parser("connect", help="compute the Levi-Civita connection both ways")
    k.add_argument("spec")
    common(k)
    k.add_argument("--frame", help="frame override file for the reference connection")
    k.add_argument("--out", help="artifact path (default <spec>.connection.json)")
    k.set_defaults(fn=cmd_connect)

    v = sub.add_parser("verify", help="check a connection artifact against a spec")
    v.add_argument("spec")
    v.add_argument("connection")
    common(v)
    v.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SpecFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: construct, analyze, verify, preset."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .builder import OdeResult, construct_ode
from .errors import SchwarzError, ValidationError, VerificationError
from .invariants import PRESETS, preset
from .numeric import DEFAULT_PATH, DEFAULT_TOLERANCE, NumericConfig, verify
from .problem import ProblemSpec, load_problem
from .render import EquationRendering, ode_from_json, render
from .singular import DEGREE_SCALES, EULER_CONVENTIONS, CurveReport, analyze

log = logging.getLogger("schwarzode")


class Output:
    """JSON goes to --json (a path, or "-" for stdout); text to the other stream."""

    def __init__(self, json_target: str | None):
        self.json_target = json_target
        self.text_stream = sys.stderr if json_target == "-" else sys.stdout

    def text(self, s: str):
        print(s, file=self.text_stream)

    def json(self, data: dict):
        if self.json_target is None:
            return
        payload = json.dumps(data, indent=2)
        if self.json_target == "-":
            print(payload, file=sys.stdout)
        else:
            Path(self.json_target).write_text(payload + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_construct(spec: ProblemSpec) -> tuple[OdeResult, EquationRendering]:
    ode = construct_ode(spec.basis, spec.pullbacks, spec.params, spec.group)
    meta = {"m": spec.m, "genus": spec.genus, "group_order": spec.order, "title": spec.title}
    return ode, render(ode, meta)


def cmd_analyze(
    ode: OdeResult,
    m: int = 1,
    group_order: int | None = None,
    genus: int | None = None,
    euler_convention: str = "validated",
    degree_scale: str = "group-order",
) -> CurveReport:
    if group_order is None:
        raise ValidationError("analysis needs the group order (group_order or --group-order)")
    return analyze(ode, m, group_order, genus, euler_convention, degree_scale)


def cmd_verify(spec: ProblemSpec, ode: OdeResult, tolerance: float | None = None, seed: int | None = None):
    if spec.params and set(spec.param_values) != set(spec.params):
        raise ValidationError("verification needs numeric param_values for every declared parameter")
    config = NumericConfig(
        path=spec.path or DEFAULT_PATH,
        tolerance=tolerance if tolerance is not None else (spec.tolerance or DEFAULT_TOLERANCE),
        seed=seed if seed is not None else (spec.seed or 0),
        params=dict(spec.param_values),
    )
    return verify(ode, spec.basis, spec.pullbacks, config)


def cmd_preset(name: str) -> dict:
    group, basis = preset(name)
    gens = []
    for k, F in enumerate(basis.generators):
        gens.append({"name": basis.names[k], "degree": basis.degrees[k], "terms": len(F.terms),
                     "primary": k in basis.primary})
    return {
        "name": name,
        "dimension": group.dimension,
        "order": group.order,
        "conductor": group.conductor,
        "matrices": [[[repr(x) for x in row] for row in g] for g in group.generators],
        "degrees": list(basis.degrees),
        "generators": gens,
        "syzygies": [{"terms": len(s.terms), "expression": s.to_str()} for s in basis.syzygies],
    }


# ---------------------------------------------------------------------------
# text reports


def analysis_text(report: CurveReport) -> str:
    lines = ["singular points:"]
    for p in report.points:
        d = p.data
        ex = ", ".join(str(x) for x in d.reconstruct())
        labels = ", ".join(p.classification.labels) or "-"
        count = f" (x{p.point.multiplicity})" if p.point.multiplicity > 1 else ""
        lines.append(f"  {p.point.label()}{count}: exponents {{{ex}}}, r = {d.r}, {labels}")
    lines.append(f"Euler characteristic ({report.euler_convention}): {report.chi}")
    if report.genus is not None:
        lines.append(f"genus: {report.genus}")
    if report.degree is not None:
        lines.append(f"degree ({report.degree_scale} scale): {report.degree}")
    lines.append(f"Fuchs relation: {report.fuchs[0]} = {report.fuchs[1]}")
    lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines)


def verification_text(rep) -> str:
    status = "PASS" if rep.passed else "FAIL"
    per = ", ".join(f"{x:.3g}" for x in rep.per_pullback)
    path = " -> ".join(f"{complex(p):.4g}" for p in rep.path)
    return (
        f"{status}: residual {rep.residual:.3e} (tolerance {rep.tolerance:g})\n"
        f"  per pullback: {per}\n  path: {path}\n  Newton seed: {rep.seed}"
    )


def preset_text(info: dict) -> str:
    lines = [
        f"{info['name']}: order {info['order']}, dimension {info['dimension']}, "
        f"coefficients in Q(zeta_{info['conductor']})",
        f"degrees: {tuple(info['degrees'])}",
    ]
    for g in info["generators"]:
        mark = " (primary)" if g["primary"] else ""
        lines.append(f"  {g['name']}: degree {g['degree']}, {g['terms']} terms{mark}")
    for k, s in enumerate(info["syzygies"]):
        lines.append(f"syzygy {k}: {s['terms']} terms")
        lines.append(f"  {s['expression']} = 0")
    for k, m in enumerate(info["matrices"]):
        lines.append(f"generator matrix {k + 1}:")
        lines.extend("  [" + ", ".join(row) + "]" for row in m)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument handling


def _load_equation(path: str) -> tuple[OdeResult, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    data = json.loads(text) if text.strip().startswith("{") else None
    if data is None:
        raise ValidationError(f"{path} is not an equation JSON file")
    return ode_from_json(data), dict(data.get("metadata") or {})


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schwarzode", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--cache-dir", help="directory for the on-disk cache of universal rewrites")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH", help='write JSON to PATH ("-" for stdout)')

    p = sub.add_parser("construct", help="build the differential equation for a problem file")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("analyze", help="singularities and curve invariants")
    p.add_argument("file", help="problem file or equation JSON from construct")
    p.add_argument("--euler-convention", choices=EULER_CONVENTIONS, default="validated")
    p.add_argument("--degree-scale", choices=DEGREE_SCALES, default="group-order")
    p.add_argument("--m", type=int, help="degree of the quotient map (overrides the file)")
    p.add_argument("--group-order", type=int)
    p.add_argument("--genus", type=int)
    common(p)

    p = sub.add_parser("verify", help="numeric end-to-end check")
    p.add_argument("file")
    p.add_argument("--tolerance", type=float)
    p.add_argument("--seed", type=int)
    common(p)

    p = sub.add_parser("preset", help="list a preset group and its invariants")
    p.add_argument("name", choices=sorted(PRESETS))
    common(p)
    return ap


def run(args) -> int:
    out = Output(args.json)
    if args.command == "construct":
        spec = load_problem(args.file)
        _, rendering = cmd_construct(spec)
        out.text(rendering.text)
        out.json(rendering.data)
    elif args.command == "analyze":
        if args.file.endswith(".json"):
            ode, meta = _load_equation(args.file)
        else:
            spec = load_problem(args.file)
            ode, rendering = cmd_construct(spec)
            meta = rendering.data["metadata"]
        m = args.m if args.m is not None else meta.get("m") or 1
        order = args.group_order if args.group_order is not None else meta.get("group_order")
        genus = args.genus if args.genus is not None else meta.get("genus")
        report = cmd_analyze(ode, m, order, genus, args.euler_convention, args.degree_scale)
        out.text(analysis_text(report))
        out.json(report.to_dict())
    elif args.command == "verify":
        spec = load_problem(args.file)
        ode, _ = cmd_construct(spec)
        rep = cmd_verify(spec, ode, args.tolerance, args.seed)
        out.text(verification_text(rep))
        out.json(rep.to_dict())
        if not rep.passed:
            raise VerificationError(f"residual {rep.residual:.3e} exceeds tolerance {rep.tolerance:g}")
    elif args.command == "preset":
        info = cmd_preset(args.name)
        out.text(preset_text(info))
        out.json(info)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.cache_dir:
        os.environ["SCHWARZODE_CACHE"] = args.cache_dir
    try:
        return run(args)
    except SchwarzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

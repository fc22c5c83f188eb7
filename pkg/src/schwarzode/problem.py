"""Problem files: flat TOML with quoted expression strings.

A minimal file names a preset and gives the pullbacks by generator degree::

    group = "klein168"
    f4 = "0"
    f6 = "1/z^4"
    f14 = "-12/z^9"
    m = 1
    genus = 3
    group_order = 168

Inline data uses the same flat layout: ``matrices`` (lists of rows of
expressions in ``zeta_m``), ``conductor``, ``order``, ``invariants``
(expressions in X1..Xn), ``degrees``, ``primary`` (1-based), ``names`` and
``syzygies`` (expressions in the generator names).  Optional verification
keys: ``path`` (list of [re, im]), ``param_values``, ``tolerance``, ``seed``.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .algebra.cyclotomic import CycNum
from .algebra.ramified import RamifiedFunction
from .errors import ParseError, ValidationError
from .expr import (
    function_evaluator,
    function_to_expr,
    polynomial_evaluator,
    scalar_evaluator,
    symbol_evaluator,
)
from .invariants import (
    PRESETS,
    GroupSpec,
    InvariantBasis,
    check_invariance,
    normalize_to_sl,
    preset,
)

KNOWN_KEYS = {
    "group", "invariants", "matrices", "conductor", "order", "normalize", "degrees",
    "primary", "names", "syzygies", "params", "m", "genus", "group_order",
    "path", "param_values", "tolerance", "seed", "title",
}


@dataclass
class ProblemSpec:
    basis: InvariantBasis
    pullbacks: list  # RamifiedFunction or None (implicit), one per generator
    group: GroupSpec | None = None
    preset_name: str | None = None
    params: tuple = ()
    m: int = 1
    genus: int | None = None
    group_order: int | None = None
    path: tuple | None = None
    param_values: dict = field(default_factory=dict)
    tolerance: float | None = None
    seed: int | None = None
    title: str = ""

    def pullback_key(self, k: int) -> str:
        return pullback_key(self.basis, k)

    @property
    def order(self) -> int | None:
        if self.group_order is not None:
            return self.group_order
        return self.group.order if self.group is not None else None

    def __eq__(self, other):
        if not isinstance(other, ProblemSpec):
            return NotImplemented
        same_pb = len(self.pullbacks) == len(other.pullbacks) and all(
            (a is None and b is None) or (a is not None and b is not None and a == b)
            for a, b in zip(self.pullbacks, other.pullbacks)
        )
        return (
            same_pb
            and self.basis == other.basis
            and self.preset_name == other.preset_name
            and tuple(self.params) == tuple(other.params)
            and (self.m, self.genus, self.order) == (other.m, other.genus, other.order)
            and self.path == other.path
            and self.param_values == other.param_values
            and (self.tolerance, self.seed) == (other.tolerance, other.seed)
        )


def pullback_key(basis: InvariantBasis, k: int) -> str:
    if len(set(basis.degrees)) == len(basis.degrees):
        return f"f{basis.degrees[k]}"
    return f"f_{k + 1}"


def _decode_error_position(exc) -> tuple[int | None, int | None]:
    line = getattr(exc, "lineno", None)
    col = getattr(exc, "colno", None)
    if line is None:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        if m:
            line, col = int(m.group(1)), int(m.group(2))
    return line, col


def _locate(text: str, key: str) -> tuple[int | None, int]:
    """Line of ``key = ...`` and the column just inside its first quote."""
    pat = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            q = min((p for p in (line.find('"'), line.find("'")) if p >= 0), default=-1)
            return i, q + 1
    return None, 0


class _Reader:
    def __init__(self, text: str, data: dict):
        self.text = text
        self.data = data

    def expr(self, key: str, evaluator, value=None):
        value = self.data[key] if value is None else value
        line, base = _locate(self.text, key)
        try:
            return evaluator(value, line)
        except ParseError as exc:
            # rebase the column onto the file line
            if exc.line is not None and exc.column is not None and base:
                msg = str(exc).rsplit(" (line", 1)[0]
                raise ParseError(msg, exc.line, base + exc.column) from None
            raise

    def get(self, key, kind, default=None):
        if key not in self.data:
            return default
        v = self.data[key]
        if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
            raise ValidationError(f"{key} must be an integer")
        if kind is float and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise ValidationError(f"{key} must be a number")
        if kind is str and not isinstance(v, str):
            raise ValidationError(f"{key} must be a string")
        if kind is list and not isinstance(v, list):
            raise ValidationError(f"{key} must be a list")
        if kind is dict and not isinstance(v, dict):
            raise ValidationError(f"{key} must be a table")
        return v


def _inline_group(r: _Reader) -> GroupSpec:
    conductor = r.get("conductor", int, 1)
    order = r.get("order", int)
    mats = r.get("matrices", list)
    if order is None:
        raise ValidationError("inline group needs 'order'")
    ev = scalar_evaluator(conductor)
    gens = []
    for g in mats:
        if not isinstance(g, list) or not all(isinstance(row, list) for row in g):
            raise ValidationError("matrices must be lists of rows")
        gens.append([[r.expr("matrices", ev, str(x)) for x in row] for row in g])
    if r.get("normalize", bool, False):
        gens = [normalize_to_sl(g)[0] for g in gens]
    return GroupSpec(len(gens[0]) if gens else 0, gens, order, True, conductor, "inline")


def _inline_basis(r: _Reader, group: GroupSpec | None) -> InvariantBasis:
    texts = r.get("invariants", list)
    if not texts:
        raise ValidationError("'invariants' must list at least one expression")
    n = group.dimension if group else _count_vars(texts)
    conductor = group.conductor if group else r.get("conductor", int, 1)
    ev = polynomial_evaluator(n, conductor)
    gens = [r.expr("invariants", ev, t) for t in texts]
    degrees = r.get("degrees", list)
    computed = [F.total_degree() for F in gens]
    if degrees is None:
        degrees = computed
    if list(degrees) != computed:
        raise ValidationError(f"declared degrees {list(degrees)} differ from computed {computed}")
    primary = r.get("primary", list, list(range(1, n + 1)))
    names = tuple(r.get("names", list, [f"Phi{i + 1}" for i in range(len(gens))]))
    if len(names) != len(gens):
        raise ValidationError("one name per invariant is required")
    sev = symbol_evaluator(names)
    syz = [r.expr("syzygies", sev, t) for t in r.get("syzygies", list, [])]
    basis = InvariantBasis(gens, tuple(degrees), tuple(i - 1 for i in primary), syz, names)
    if group is not None:
        for k, F in enumerate(gens):
            for g in group.generators:
                lam = check_invariance(F, g, group.conductor)
                if lam is None or not lam == 1:
                    raise ValidationError(f"invariant {names[k]} is not fixed by a group generator")
    return basis


def _count_vars(texts) -> int:
    found = set()
    for t in texts:
        found.update(int(x) for x in re.findall(r"\bX(\d+)\b", t))
    return max(found) if found else 1


def parse_problem(text: str) -> ProblemSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = _decode_error_position(exc)
        raise ParseError(f"malformed problem file: {str(exc).split(' (at')[0]}", line, col) from None
    r = _Reader(text, data)

    group_name = r.get("group", str)
    group = None
    preset_name = None
    inv = data.get("invariants")
    if group_name is not None and group_name != "inline":
        if group_name not in PRESETS:
            raise ValidationError(f"unknown group preset {group_name!r}")
        preset_name = group_name
        group, basis = preset(group_name)
        if inv is not None and inv != group_name:
            raise ValidationError("preset groups take their preset invariants")
    else:
        if "matrices" in data:
            group = _inline_group(r)
        if isinstance(inv, str):
            if inv not in PRESETS:
                raise ValidationError(f"unknown invariant preset {inv!r}")
            basis = preset(inv)[1]
            preset_name = inv
        else:
            basis = _inline_basis(r, group)

    params = tuple(r.get("params", list, []))
    fev = function_evaluator(params)
    pkeys = [pullback_key(basis, k) for k in range(basis.ngens)]
    pullbacks = []
    for key in pkeys:
        pullbacks.append(r.expr(key, fev) if key in data else None)
    unknown = set(data) - KNOWN_KEYS - set(pkeys)
    if unknown:
        line, _ = _locate(text, sorted(unknown)[0])
        raise ParseError(f"unknown key(s): {', '.join(sorted(unknown))}", line, 1)
    for i in basis.primary:
        if pullbacks[i] is None:
            raise ValidationError(f"missing pullback {pkeys[i]} for a primary generator")
    for k, f in enumerate(pullbacks):
        if f is None and basis.implicit_relation(k) is None:
            raise ValidationError(f"missing pullback {pkeys[k]}; no relation determines it")
        if f is not None:
            extra = set(f.bases) - {"z"} - set(params)
            if extra:
                raise ValidationError(f"pullback {pkeys[k]} uses undeclared names {sorted(extra)}")

    path = r.get("path", list)
    if path is not None:
        try:
            path = tuple(complex(*p) if isinstance(p, list) else complex(p) for p in path)
        except TypeError:
            raise ValidationError("path entries must be numbers or [re, im] pairs") from None
    pv = r.get("param_values", dict, {})
    param_values = {}
    for k, v in pv.items():
        if k not in params:
            raise ValidationError(f"param_values names undeclared parameter {k!r}")
        param_values[k] = complex(*v) if isinstance(v, list) else complex(v)
    tol = r.get("tolerance", float)
    return ProblemSpec(
        basis=basis,
        pullbacks=pullbacks,
        group=group,
        preset_name=preset_name,
        params=params,
        m=r.get("m", int, 1),
        genus=r.get("genus", int),
        group_order=r.get("group_order", int),
        path=path,
        param_values=param_values,
        tolerance=None if tol is None else float(tol),
        seed=r.get("seed", int),
        title=r.get("title", str, ""),
    )


def load_problem(path) -> ProblemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8 text") from None
    return parse_problem(text)


# ---------------------------------------------------------------------------
# rendering back to text


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def cyc_to_expr(c) -> str:
    if not isinstance(c, CycNum):
        return str(Fraction(c))
    parts = []
    for k, a in enumerate(c.coeffs):
        if a == 0:
            continue
        a = Fraction(a)
        mono = "" if k == 0 else f"zeta_{c.m}" + (f"^{k}" if k > 1 else "")
        if not mono:
            parts.append(f"({a})")
        elif a == 1:
            parts.append(mono)
        else:
            parts.append(f"({a})*{mono}")
    return " + ".join(parts) if parts else "0"


def _poly_to_expr(F) -> str:
    parts = []
    for e, c in F.sorted_terms():
        mono = "*".join(f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        cs = f"({cyc_to_expr(c)})"
        parts.append(f"{cs}*{mono}" if mono else cs)
    return " + ".join(parts) if parts else "0"


def render_problem(spec: ProblemSpec) -> str:
    lines = []
    if spec.title:
        lines.append(f"title = {_q(spec.title)}")
    basis = spec.basis
    if spec.preset_name is not None and spec.group is not None and spec.group.name == spec.preset_name:
        lines.append(f"group = {_q(spec.preset_name)}")
    else:
        lines.append('group = "inline"')
        if spec.group is not None:
            g = spec.group
            lines.append(f"conductor = {g.conductor}")
            lines.append(f"order = {g.order}")
            mats = ", ".join(
                "[" + ", ".join("[" + ", ".join(_q(cyc_to_expr(x)) for x in row) + "]" for row in m) + "]"
                for m in g.generators
            )
            lines.append(f"matrices = [{mats}]")
        if spec.preset_name is not None:
            lines.append(f"invariants = {_q(spec.preset_name)}")
        else:
            lines.append("invariants = [" + ", ".join(_q(_poly_to_expr(F)) for F in basis.generators) + "]")
            lines.append(f"degrees = {list(basis.degrees)}")
            lines.append(f"primary = {[i + 1 for i in basis.primary]}")
            lines.append("names = [" + ", ".join(_q(n) for n in basis.names) + "]")
            lines.append("syzygies = [" + ", ".join(_q(s.to_str()) for s in basis.syzygies) + "]")
    if spec.params:
        lines.append("params = [" + ", ".join(_q(p) for p in spec.params) + "]")
    for k, f in enumerate(spec.pullbacks):
        if f is not None:
            lines.append(f"{spec.pullback_key(k)} = {_q(function_to_expr(f))}")
    lines.append(f"m = {spec.m}")
    if spec.genus is not None:
        lines.append(f"genus = {spec.genus}")
    if spec.group_order is not None:
        lines.append(f"group_order = {spec.group_order}")
    if spec.path is not None:
        lines.append("path = [" + ", ".join(f"[{p.real!r}, {p.imag!r}]" for p in spec.path) + "]")
    if spec.param_values:
        items = ", ".join(f"{k} = [{v.real!r}, {v.imag!r}]" for k, v in spec.param_values.items())
        lines.append(f"param_values = {{ {items} }}")
    if spec.tolerance is not None:
        lines.append(f"tolerance = {spec.tolerance!r}")
    if spec.seed is not None:
        lines.append(f"seed = {spec.seed}")
    return "\n".join(lines) + "\n"


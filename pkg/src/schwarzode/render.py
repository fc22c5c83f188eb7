"""Plain-text, LaTeX and JSON forms of an equation.

Coefficients in one variable are shown as content * primitive numerator over
a factored monic denominator, the layout of the classical tables.  JSON keeps
exact rationals as [numerator, denominator] string pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import flint

from .algebra.ramified import RamifiedFunction, flint_ctx, from_fmpq, root_name, to_fmpq
from .builder import OdeResult
from .errors import ParseError

JSON_FORMAT = "schwarzode-equation/1"


@dataclass
class EquationRendering:
    text: str
    latex: str
    data: dict

    def json(self, indent: int | None = 2) -> str:
        return json.dumps(self.data, indent=indent)


# ---------------------------------------------------------------------------
# univariate layout


def _univariate(f: RamifiedFunction):
    """(content, primitive numerator, [(factor, mult)], variable) or None."""
    if len(f.bases) != 1:
        return None
    var = root_name(f.bases[0]) if f.ram[0] != (1, 1) else f.bases[0]

    def to_poly(p):
        coeffs = {}
        for e, c in p.to_dict().items():
            coeffs[int(e[0])] = c
        deg = max(coeffs) if coeffs else 0
        return flint.fmpq_poly([coeffs.get(k, 0) for k in range(deg + 1)])

    num, den = to_poly(f.num), to_poly(f.den)
    dc, dfacs = den.factor()
    nc, nfacs = num.factor()
    content = nc / dc
    prim = flint.fmpq_poly(1)
    for g, k in nfacs:
        prim *= g**k
    facs = sorted(((g, int(k)) for g, k in dfacs), key=lambda t: (t[0].degree(), str(t[0])))
    return from_fmpq(content), prim, facs, var


def _poly_text(p, var: str, latex: bool = False) -> str:
    coeffs = [from_fmpq(c) for c in p.coeffs()]
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{{{k}}}" if latex else f"{var}^{k}"
        mag = abs(c)
        if latex and mag.denominator != 1:
            cs = rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        else:
            cs = str(mag)
        body = mono if (mono and mag == 1) else (cs + ("" if not mono else ("" if latex else "*") + mono))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for s, b in terms[1:]:
        out += f" {s} {b}"
    return out


def _factor_text(g, k: int, var: str, latex: bool) -> str:
    inner = _poly_text(g, var, latex)
    base = inner if g.degree() == 1 and g.coeffs()[0] == 0 else f"({inner})"
    if k == 1:
        return base
    return f"{base}^{{{k}}}" if latex else f"{base}^{k}"


def coefficient_text(f: RamifiedFunction, latex: bool = False) -> str:
    if f.is_zero():
        return "0"
    u = _univariate(f)
    if u is None:
        if latex:
            return rf"\frac{{{f.poly_str(f.num)}}}{{{f.poly_str(f.den)}}}"
        return str(f)
    content, prim, facs, var = u
    num = _poly_text(prim, var, latex)
    den = ("" if latex else "*").join(_factor_text(g, k, var, latex) for g, k in facs)
    if latex:
        c = ""
        if content != 1:
            sign = "-" if content < 0 else ""
            mag = abs(content)
            c = sign + (rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}" if mag.denominator != 1 else str(mag))
        numer = num
        if prim == 1 and c:
            numer, c = c, ""
        if not den:
            return c + numer
        return rf"{c}\frac{{{numer}}}{{{den}}}"
    c = ""
    if content != 1:
        c = f"({content})"
    if prim == 1 and c:
        numer, c = c, ""
    elif prim.degree() == 0:
        numer = num
    else:
        numer = f"({num})"
    if c:
        numer = c + "*" + numer
    if not den:
        return numer
    return f"{numer}/({den})" if len(facs) > 1 or facs[0][1] > 1 or facs[0][0].degree() > 1 else f"{numer}/{den}"


def ramification_text(ode: OdeResult) -> str:
    notes = []
    for b, (r, s) in ode.ramification.items():
        if r != 1 or s != 1:
            notes.append(f"{b if s == 1 else '-' + b} = {root_name(b)}^{r}")
    return ", ".join(notes)


def render_text(ode: OdeResult) -> str:
    n = ode.order
    lines = [f"y^({n}) + c{n - 1} y^({n - 1}) + ... + c0 y = 0, where"]
    for i in range(n - 1, -1, -1):
        lines.append(f"  c{i} = {coefficient_text(ode.coeffs[i])}")
    note = ramification_text(ode)
    if note:
        lines.append(f"  ({note})")
    return "\n".join(lines)


def render_latex(ode: OdeResult) -> str:
    n = ode.order
    var = "z"

    def deriv(k):
        if k == 0:
            return "y"
        return rf"\frac{{d^{{{k}}}y}}{{d{var}^{{{k}}}}}" if k > 1 else rf"\frac{{dy}}{{d{var}}}"

    parts = [deriv(n)]
    for i in range(n - 1, -1, -1):
        c = ode.coeffs[i]
        if c.is_zero():
            continue
        parts.append(rf"\left({coefficient_text(c, latex=True)}\right){deriv(i)}")
    body = " + ".join(parts) + " = 0"
    note = ramification_text(ode)
    if note:
        body += rf", \quad {note}"
    return body


# ---------------------------------------------------------------------------
# JSON


def _rat(q) -> list[str]:
    q = Fraction(q)
    return [str(q.numerator), str(q.denominator)]


def _terms(p, nv: int) -> list:
    items = sorted(((tuple(int(x) for x in e), from_fmpq(c)) for e, c in p.to_dict().items()), reverse=True)
    return [{"exponents": list(e[:nv]), "coefficient": _rat(c)} for e, c in items]


def function_to_json(f: RamifiedFunction) -> dict:
    nv = len(f.bases)
    return {
        "bases": list(f.bases),
        "ramification": [[r, s] for r, s in f.ram],
        "numerator": _terms(f.num, nv),
        "denominator": _terms(f.den, nv),
    }


def function_from_json(d: dict) -> RamifiedFunction:
    try:
        bases = tuple(d["bases"])
        ram = tuple((int(r), int(s)) for r, s in d["ramification"])
        ctx = flint_ctx(tuple(root_name(b) for b in bases))
        nv = max(len(bases), 1)

        def poly(terms):
            out = {}
            for t in terms:
                e = tuple(int(x) for x in t["exponents"]) or (0,) * nv
                if len(e) != nv:
                    raise ValueError("exponent length mismatch")
                num, den = t["coefficient"]
                out[e] = to_fmpq(Fraction(int(num), int(den)))
            return ctx.from_dict(out)

        return RamifiedFunction(bases, ram, poly(d["numerator"]), poly(d["denominator"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed coefficient in equation JSON: {exc}") from None


def ode_to_json(ode: OdeResult, metadata: dict | None = None) -> dict:
    return {
        "format": JSON_FORMAT,
        "order": ode.order,
        "coefficients": [function_to_json(c) for c in ode.coeffs],
        "text": render_text(ode),
        "latex": render_latex(ode),
        "provenance": ode.provenance,
        "metadata": metadata or {},
    }


def ode_from_json(data) -> OdeResult:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed equation JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or data.get("format") != JSON_FORMAT:
        raise ParseError(f"not an equation file (expected format {JSON_FORMAT!r})")
    coeffs = [function_from_json(c) for c in data.get("coefficients", [])]
    order = data.get("order")
    if order != len(coeffs):
        raise ParseError("equation order does not match the number of coefficients")
    return OdeResult(order, coeffs, dict(data.get("provenance") or {}))


def render(ode: OdeResult, metadata: dict | None = None) -> EquationRendering:
    return EquationRendering(render_text(ode), render_latex(ode), ode_to_json(ode, metadata))

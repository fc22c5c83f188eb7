"""Expression language for problem files.

Grammar: rational literals, +, -, *, /, ^ (or **) with integer or rational
exponents, parentheses and declared variable names.  Expressions go through
Python's ``ast`` after ``^`` is rewritten; only whitelisted nodes evaluate.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Mapping

from .algebra.cyclotomic import CycNum
from .algebra.mpoly import MPoly
from .algebra.ramified import RamifiedFunction
from .errors import ParseError


def _prepare(text: str) -> str:
    return text.replace("^", "**")


def _col(node, text: str) -> int:
    # columns refer to the original text; "^" -> "**" shifts positions
    off = getattr(node, "col_offset", 0)
    prepared = 0
    for i, ch in enumerate(text):
        if prepared >= off:
            return i + 1
        prepared += 2 if ch == "^" else 1
    return len(text) + 1


def _rational_exponent(value, node, text, line):
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, RamifiedFunction) and value.is_constant():
        return value.to_fraction()
    if isinstance(value, MPoly) and value.total_degree() <= 0:
        value = value.coefficient((0,) * value.nvars)
        if not isinstance(value, CycNum):
            return Fraction(value)
    if isinstance(value, CycNum) and value.is_rational():
        return value.to_rational()
    raise ParseError("exponent must be a rational constant", line, _col(node, text))


def _exact_root(q: Fraction, k: int) -> Fraction | None:
    def iroot(n):
        r = round(n ** (1.0 / k)) if n else 0
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**k == n:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def fractional_power(f: RamifiedFunction, p: Fraction) -> RamifiedFunction:
    """f^p for a monomial f = c * t^k in one root variable t (base = s t^r)."""
    if p.denominator == 1:
        return f ** int(p)
    if f.is_zero():
        if p > 0:
            return f
        raise ZeroDivisionError("zero to a negative power")
    if f.is_constant():
        c = f.to_fraction()
        if c < 0:
            raise ValueError("fractional power of a negative constant")
        root = _exact_root(c, p.denominator)
        if root is None:
            raise ValueError(f"{c}^(1/{p.denominator}) is not rational")
        return RamifiedFunction.constant(root ** p.numerator)
    num, den = f.num.to_dict(), f.den.to_dict()
    if len(f.bases) != 1 or len(num) != 1 or len(den) != 1:
        raise ValueError("fractional powers are supported for monomials in one variable only")
    (en, cn), (ed, cd) = next(iter(num.items())), next(iter(den.items()))
    from .algebra.ramified import from_fmpq

    c = from_fmpq(cn) / from_fmpq(cd)
    k = int(en[0]) - int(ed[0])
    base = f.bases[0]
    r, s = f.ram[0]
    if c < 0:
        if k % 2 == 0:
            raise ValueError("fractional power of a negative coefficient")
        # c t^k = |c| (-t)^k and base = s (-1)^r (-t)^r
        c = -c
        s = s * (-1) ** r
    croot = _exact_root(c, p.denominator)
    if croot is None:
        raise ValueError(f"{c}^(1/{p.denominator}) is not rational")
    q = p.denominator
    tau = RamifiedFunction.root(base, r * q, s)
    return croot**p.numerator * tau ** (k * p.numerator)


class Evaluator:
    """Evaluates an expression over a ring given by a variable environment."""

    def __init__(
        self,
        env: Mapping[str, object],
        constant: Callable[[Fraction], object],
        power: Callable[[object, Fraction], object] | None = None,
    ):
        self.env = dict(env)
        self.constant = constant
        self.power = power

    def __call__(self, text: str, line: int | None = None):
        if not isinstance(text, str):
            raise ParseError(f"expected an expression string, got {type(text).__name__}", line, 1)
        try:
            tree = ast.parse(_prepare(text.strip()), mode="eval")
        except SyntaxError as exc:
            col = exc.offset or 1
            raise ParseError(f"syntax error in expression {text!r}", line, col) from None
        self.text, self.line = text.strip(), line
        return self._eval(tree.body)

    def _fail(self, node, msg):
        raise ParseError(msg, self.line, _col(node, self.text))

    def _eval(self, node):
        if isinstance(node, ast.Constant):
            v = node.value
            if isinstance(v, bool) or not isinstance(v, int):
                self._fail(node, f"unsupported literal {v!r}; use integers and '/'")
            return self.constant(Fraction(v))
        if isinstance(node, ast.Name):
            if node.id not in self.env:
                self._fail(node, f"unknown name {node.id!r}")
            return self.env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = self._eval(node.left)
                e = _rational_exponent(self._eval(node.right), node.right, self.text, self.line)
                try:
                    if e.denominator == 1:
                        k = int(e)
                        if k < 0 and isinstance(base, MPoly):
                            self._fail(node, "negative powers are not polynomial")
                        return base**k
                    if self.power is None:
                        self._fail(node, "fractional exponents are not allowed here")
                    return self.power(base, e)
                except ZeroDivisionError:
                    self._fail(node, "division by zero")
                except ValueError as exc:
                    self._fail(node, str(exc))
            left, right = self._eval(node.left), self._eval(node.right)
            try:
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
                if isinstance(node.op, ast.Div):
                    if _is_zero(right):
                        self._fail(node, "division by zero")
                    if isinstance(left, MPoly) and isinstance(right, MPoly):
                        if right.total_degree() > 0:
                            self._fail(node, "division by a non-constant polynomial")
                        right = right.coefficient((0,) * right.nvars)
                    return left / right
            except ZeroDivisionError:
                self._fail(node, "division by zero")
        self._fail(node, f"unsupported syntax {type(node).__name__}")


def _is_zero(v) -> bool:
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


def function_evaluator(params=()) -> Evaluator:
    """Expressions in z and parameters, evaluated to RamifiedFunction."""
    env = {"z": RamifiedFunction.variable("z")}
    for p in params:
        if p == "z" or not p.isidentifier():
            raise ParseError(f"invalid parameter name {p!r}")
        env[p] = RamifiedFunction.variable(p)
    return Evaluator(env, RamifiedFunction.constant, fractional_power)


def parse_function(text: str, params=(), line: int | None = None) -> RamifiedFunction:
    return function_evaluator(params)(text, line)


def polynomial_evaluator(n: int, conductor: int | None = None) -> Evaluator:
    """Expressions in X1..Xn (and zeta_m) evaluated to MPoly."""
    env = {f"X{i + 1}": MPoly.variable(n, i) for i in range(n)}
    const = lambda q: MPoly.constant(n, q)  # noqa: E731
    if conductor:
        env[f"zeta_{conductor}"] = MPoly.constant(n, CycNum.zeta(conductor))
        env["zeta"] = env[f"zeta_{conductor}"]
    return Evaluator(env, const)


def scalar_evaluator(conductor: int) -> Evaluator:
    z = CycNum.zeta(conductor)
    env = {f"zeta_{conductor}": z, "zeta": z}
    return Evaluator(env, lambda q: CycNum(conductor, [q]))


def symbol_evaluator(names) -> Evaluator:
    """Expressions in generator symbols, evaluated to GeneratorSymbolPoly."""
    from .invariants import GeneratorSymbolPoly

    N = len(names)

    def var(i):
        e = [0] * N
        e[i] = 1
        return GeneratorSymbolPoly(N, {tuple(e): Fraction(1)}, names)

    env = {name: var(i) for i, name in enumerate(names)}
    return Evaluator(env, lambda q: GeneratorSymbolPoly(N, {(0,) * N: q}, names))


def function_to_expr(f: RamifiedFunction) -> str:
    """An expression string that parses back to f."""
    from .algebra.ramified import from_fmpq

    def root_text(base, r, s):
        inner = base if s == 1 else f"(-{base})"
        return inner if r == 1 else f"{inner}^(1/{r})"

    def poly(p):
        terms = []
        for e, c in sorted(p.to_dict().items(), key=lambda t: tuple(t[0]), reverse=True):
            c = from_fmpq(c)
            factors = []
            for (base, (r, s)), k in zip(zip(f.bases, f.ram), e):
                k = int(k)
                if k:
                    t = root_text(base, r, s)
                    plain = r == 1 and s == 1
                    factors.append(t if k == 1 else f"{t}^{k}" if plain else f"({t})^{k}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sgn, body in terms[1:]:
            out += f" {sgn} {body}"
        return out, len(terms)

    if f.is_zero():
        return "0"
    num, nn = poly(f.num)
    if f.den.is_one():
        return num
    den, nd = poly(f.den)
    return f"({num})/({den})"

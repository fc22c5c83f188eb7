"""Acceptance criteria 1-9.

Each test records one PASS/FAIL line (printed, and repeated in the terminal
summary).  Tolerances and runtime budgets are pinned below.  Criteria that
cannot hold as stated stay red; the reason is in the recorded detail line.
"""

from __future__ import annotations

import re
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy as sp

from schwarzode.algebra import RamifiedFunction, det
from schwarzode.builder import OdeResult, construct_ode, jacobian
from schwarzode.expr import parse_function as P
from schwarzode.invariants import KLEIN_SYZYGY_PRINTED, GeneratorSymbolPoly, check_invariance, klein_invariants
from schwarzode.numeric import NumericConfig, perturb, verify
from schwarzode.problem import load_problem
from schwarzode.singular import calibrate_degree_scale, analyze

from conftest import PROBLEMS, PROPERTY_CASES, ROOT, record

TAU = 1e-6  # numeric residual threshold (criterion 8)
CORRUPTION = Fraction(101, 100)  # 1% coefficient corruption
BUDGET = {1: 60, 2: 60, 3: 300, 4: 1800, 5: 120, 6: 60, 8: 120}  # seconds

zero = RamifiedFunction.constant(0)

HURWITZ_INPUTS = ("0", "1/z^4", "-12/z^9")
HURWITZ_PRINTED = (  # c2, c1, c0
    "(7*z - 4)/(z*(z - 1))",
    "(1/252)*(2592*z^2 - 2963*z + 560)/(z^2*(z - 1)^2)",
    "(1/24696)*(57024*z - 40805)/(z^2*(z - 1)^2)",
)
CLASS3_INPUTS = ("1/z", "0", "16/z^3")
CLASS3_PRINTED = (
    "(3/2)*(3*z - 2)/(z*(z - 1))",
    "(3/112)*(116*z - 35)/(z^2*(z - 1))",
    "(195/2744)/(z^2*(z - 1))",
)
CLASS4_INPUTS = {
    "4.1": ("8*z^(3/7)", "3*z^(8/7)", "-4*(z^3 - 1008*z^2 + 9216*z - 16384)"),
    "4.2": ("-32*z^(3/7)", "z^(1/7)*(5*z - 128)", "4*(z^3 - 14624*z^2 + 591872*z - 16384)"),
}
CLASS4_C1 = {"4.1": "173*z + 16", "4.2": "173*z + 72"}


def class4_printed(key):
    return (
        "(1/14)*(41*z - 20)/(z*(z - 1))",
        f"(1/196)*({CLASS4_C1[key]})/(z^2*(z - 1))",
        "(9/2744)/(z^2*(z - 1))",
    )


def timed_construct(basis, texts):
    t = time.perf_counter()
    ode = construct_ode(basis, [P(s) for s in texts] + [None])
    return ode, time.perf_counter() - t


def top_down(ode):
    return list(ode.coeffs[::-1])


def show(f) -> str:
    from schwarzode.render import coefficient_text

    return coefficient_text(f)


# -- 1 ---------------------------------------------------------------------------


def test_criterion_1_hurwitz(klein):
    _, basis = klein
    ode, secs = timed_construct(basis, HURWITZ_INPUTS)
    got = top_down(ode)
    want = [P(s) for s in HURWITZ_PRINTED]
    equal = got == want
    detail = (
        f"exact match {equal} in {secs:.1f}s; constructed c2 = {show(got[0])}, "
        f"c1 = {show(got[1])}, c0 = {show(got[2])}"
    )
    if not equal:
        # the printed display is the output for f6 and f14 rescaled by (z-1)^(-3) and (z-1)^(-7)
        alt, _ = timed_construct(basis, ("0", "1/(z^4*(z - 1)^3)", "-12/(z^9*(z - 1)^7)"))
        detail += f"; printed display reproduced from rescaled inputs: {top_down(alt) == want}"
    record(1, equal and secs < BUDGET[1], detail)
    assert secs < BUDGET[1]
    assert equal, detail


# -- 2, 3 ------------------------------------------------------------------------------


def test_criterion_2_class3(klein):
    _, basis = klein
    ode, secs = timed_construct(basis, CLASS3_INPUTS)
    equal = top_down(ode) == [P(s) for s in CLASS3_PRINTED]
    record(2, equal and secs < BUDGET[2], f"exact match {equal} in {secs:.1f}s")
    assert equal and secs < BUDGET[2]


def test_criterion_3_class4(klein):
    _, basis = klein
    results = {}
    for key, inputs in CLASS4_INPUTS.items():
        ode, secs = timed_construct(basis, inputs)
        results[key] = (top_down(ode), secs)
    a, b = results["4.1"][0], results["4.2"][0]
    exact = all(results[k][0] == [P(s) for s in class4_printed(k)] for k in results)
    only_c1 = a[0] == b[0] and a[2] == b[2] and a[1] != b[1]
    slow = max(s for _, s in results.values())
    ok = exact and only_c1 and slow < BUDGET[3]
    record(3, ok, f"exact match {exact}, runs differ only in c1 {only_c1}, slowest {slow:.1f}s")
    assert ok


# -- 4 ---------------------------------------------------------------------------------

mu, zs = sp.symbols("mu z")
Z4 = -(81 * mu**2 - 432 * mu - 80) / (3 * mu)
DELTA4 = 729 * mu**2 - 7120 * mu - 2000
P_PRINTED = -DELTA4 * (27 * mu + 4) ** 2 * (mu - 4) ** 2 / (27 * mu**3)


def kato_display(Pz, c1_constant=1729):
    """The printed coefficients (c2, c1, c0) for a given P; c2 uses P'/P."""
    c2 = sp.Rational(3, 2) * sp.diff(Pz, zs) / Pz - 1 / (zs - Z4)
    c1 = (
        sp.Rational(43, 28) * zs
        + (c1_constant * mu**2 - 3628 * mu - 640) / (21 * mu)
        - (2187 * mu**2 - 15004 * mu - 3200) * (27 * mu + 4) * (mu - 4) / (63 * mu**2 * (zs - Z4))
    ) / Pz
    c0 = (-sp.Rational(15, 14**3) - 5 * (27 * mu + 4) * (mu - 4) / (196 * mu * (zs - Z4))) / Pz
    return c2, c1, c0


def to_sympy(f: RamifiedFunction):
    return sp.sympify(str(f).replace("^", "**"), locals={"mu": mu, "z": zs})


def same(a, b) -> bool:
    return sp.simplify(sp.together(a - b)) == 0


def kato_construct(basis, f4, f6, f14):
    pulls = [P(s, ("mu",)) for s in (f4, f6, f14)] + [None]
    return construct_ode(basis, pulls, ("mu",))


def test_criterion_4_kato_as_printed(klein):
    _, basis = klein
    t = time.perf_counter()
    ode = kato_construct(basis, "(-mu)^(-1/9)", "(-mu)^(1/3)", "(-mu)^(-1/9)*(z + 88/3)")
    secs = time.perf_counter() - t
    rational_in_mu = all(b != "mu" or r == (1, 1) for b, r in ode.ramification.items())
    match = False
    if rational_in_mu:
        got = [to_sympy(c) for c in top_down(ode)]
        match = all(same(g, w) for g, w in zip(got, kato_display(P_PRINTED)))
    detail = (
        f"as printed: exact match {match} in {secs:.1f}s"
        f" (coefficients rational in mu: {rational_in_mu}; printed P(mu,z) is free of z)"
    )
    record(4, match and secs < BUDGET[4], detail)
    assert match, detail


def test_kato_corrected_reproduction(klein):
    """f14 with (-mu)^(+1/9); P the monic cubic of the constructed denominators."""
    spec = load_problem(PROBLEMS / "extra" / "kato_pencil.toml")
    ode = construct_ode(spec.basis, spec.pullbacks, spec.params, spec.group)
    c2, c1, c0 = (to_sympy(c) for c in top_down(ode))
    den = sp.Poly(sp.denom(sp.together(c0)), zs)
    cubic, rem = sp.div(sp.Poly(den.as_expr() / den.LC(), zs), sp.Poly(zs - Z4, zs))
    assert rem.is_zero and cubic.degree() == 3
    Pz = cubic.as_expr()
    # the printed P(mu, z) formula is P evaluated at z = z4
    assert sp.simplify(Pz.subs(zs, Z4) - P_PRINTED) == 0
    w2, w1, w0 = kato_display(Pz, c1_constant=729)
    assert same(c2, w2) and same(c1, w1) and same(c0, w0)
    assert not same(c1, kato_display(Pz)[1])  # 1729 as printed does not match


# -- 5 ---------------------------------------------------------------------------------


def test_criterion_5_identities(klein):
    _, basis = klein
    t = time.perf_counter()
    inv = klein_invariants()
    hess_ok = inv["hessian"] == 54 * inv["F6"]
    f14_ok = inv["F14"].total_degree() == 14 and inv["F14"].is_homogeneous()
    jac_ok = det(jacobian([inv["F4"], inv["F6"], inv["F14"]])) == 14 * inv["F21"]
    printed = GeneratorSymbolPoly(4, dict(KLEIN_SYZYGY_PRINTED), basis.names)
    t_printed = printed.expand(basis).is_zero()
    t_stored = basis.syzygies[0].expand(basis).is_zero()
    secs = time.perf_counter() - t
    ok = hess_ok and f14_ok and jac_ok and t_printed and secs < BUDGET[5]
    detail = (
        f"Hessian = 54 F6 {hess_ok}, F14 degree 14 {f14_ok}, Jacobian = 14 F21 {jac_ok}, "
        f"printed T vanishes {t_printed}, T with odd Phi6 powers negated vanishes {t_stored}, {secs:.1f}s"
    )
    record(5, ok, detail)
    assert hess_ok and f14_ok and jac_ok and t_stored
    assert t_printed, detail


# -- 6 ---------------------------------------------------------------------------------


def test_criterion_6_invariance(klein):
    group, basis = klein
    t = time.perf_counter()
    lams = [check_invariance(F, g, 7) for F in basis.generators for g in group.generators]
    dets = [det(g) for g in group.generators]
    secs = time.perf_counter() - t
    ok = all(lam == 1 for lam in lams) and all(d == 1 for d in dets) and secs < BUDGET[6]
    record(6, ok, f"{sum(lam == 1 for lam in lams)}/12 pairs with lambda = 1, det = 1 for all generators, {secs:.1f}s")
    assert ok


# -- 7 ---------------------------------------------------------------------------------


def test_criterion_7_geometry():
    printed = OdeResult(3, [P(s) for s in HURWITZ_PRINTED[::-1]])
    rep = analyze(printed, m=1, group_order=168, genus=3)
    points = rep.singular_set()
    rs = sorted(p.data.r for p in rep.points)
    scales = calibrate_degree_scale(rep.exponent_sum, 1, 3, 168, target=4)
    ok = points == ["0", "1", "oo"] and rs == [2, 3, 7] and rep.chi == -4 and rep.genus == 3
    ok = ok and scales == ["group-order"] and rep.degree_scale == "group-order" and rep.degree == 4
    detail = (
        f"singular set {points}, r = {[p.data.r for p in rep.points]}, chi = {rep.chi} (validated), "
        f"calibrated degree scale {scales} gives degree {rep.degree}"
    )
    record(7, ok, detail)
    assert ok


# -- 8 ---------------------------------------------------------------------------------

NUMERIC_RUNS = {
    "hurwitz": HURWITZ_INPUTS,
    "class3": CLASS3_INPUTS,
    "class4.1": CLASS4_INPUTS["4.1"],
    "class4.2": CLASS4_INPUTS["4.2"],
}


def test_criterion_8_numeric(klein):
    _, basis = klein
    cfg = NumericConfig(tolerance=TAU)  # default path 0.5+0.5i -> 1.5+1i -> -0.5+1.5i
    parts, ok = [], True
    for name, texts in NUMERIC_RUNS.items():
        pulls = [P(s) for s in texts] + [None]
        ode = construct_ode(basis, pulls)
        t = time.perf_counter()
        base = verify(ode, basis, pulls, cfg).residual
        bad = [verify(perturb(ode, i, CORRUPTION), basis, pulls, cfg).residual for i in range(3)]
        secs = time.perf_counter() - t
        run_ok = base < TAU and min(bad) > TAU and secs < BUDGET[8]
        ok = ok and run_ok
        parts.append(f"{name} {base:.1e} (corrupted min {min(bad):.1e}, {secs:.1f}s)")
    # the printed Hurwitz display against the printed inputs, for the record
    pulls = [P(s) for s in HURWITZ_INPUTS] + [None]
    printed = OdeResult(3, [P(s) for s in HURWITZ_PRINTED[::-1]])
    disp = verify(printed, basis, pulls, cfg).residual
    parts.append(f"printed Hurwitz display vs printed inputs {disp:.1e}")
    record(8, ok, "; ".join(parts))
    assert ok


# -- 9 ---------------------------------------------------------------------------------

PROPERTY_TESTS = [
    "tests/test_mpoly.py::test_ring_axioms",
    "tests/test_mpoly.py::test_leibniz",
    "tests/test_cyclotomic.py::test_field_axioms",
    "tests/test_ramified.py::test_field_axioms",
    "tests/test_ramified.py::test_leibniz",
    "tests/test_linalg.py::test_nullspace_annihilation",
    "tests/test_invariants.py::test_rewrite_round_trip_symmetric",
    "tests/test_builder.py::test_n1_family",
]


def test_criterion_9_property_suites():
    assert PROPERTY_CASES >= 1000
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "--hypothesis-show-statistics",
         *PROPERTY_TESTS],
        cwd=ROOT, capture_output=True, text=True,
    )
    counts = {}
    for block in re.split(r"\n(?=tests/\S+::\S+:\n)", proc.stdout):
        m = re.match(r"(tests/\S+::\S+):", block.strip())
        if m:
            counts[m.group(1)] = sum(int(x) for x in re.findall(r"(\d+) passing examples", block))
    short = {k.split("::")[1] + "@" + k.split("/")[1].split(".")[0]: v for k, v in counts.items()}
    ok = proc.returncode == 0 and all(counts.get(t, 0) >= 1000 for t in PROPERTY_TESTS)
    record(9, ok, f"exit {proc.returncode}, cases {short}")
    assert ok, proc.stdout[-2000:]

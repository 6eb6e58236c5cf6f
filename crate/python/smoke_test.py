"""Smoke test for the idquad_py extension module.

Build and run:
    cargo build --release -p idquad-python
    cp target/release/libidquad_py.so python/idquad_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import idquad_py as iq


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    rule = iq.Rule("linear", "gauss", 2)
    assert len(rule) == 2 and rule.n == 2
    assert close(sum(rule.weights), 0.5)
    assert all(0.0 < x < 1.0 for x in rule.nodes)

    lob = iq.build_rule("constant", "lobatto", 3)
    assert len(lob) == 5
    assert lob.nodes[0] == 0.0 and lob.nodes[-1] == 1.0
    assert close(sum(lob.weights), 1.0)

    # callable integrand with exact derivative at 1
    got = iq.Rule("linear", "gauss", 6).integrate(math.exp, deriv_at_1=math.e)
    assert close(got, math.e - 1.0, 1e-6), got
    # finite-difference derivative
    got = iq.Rule("linear", "radau", 4).integrate(math.cos)
    assert close(got, math.sin(1.0), 1e-6), got

    got = iq.integrate("exp(x)", n=6, dexpr="exp(x)", a=0.0, b=2.0)
    assert close(got, math.exp(2.0) - 1.0, 1e-9), got
    got = iq.integrate("x^2", weight="constant", kind="gauss", n=3, a=1.0, b=3.0)
    assert close(got, 26.0 / 3.0, 1e-12), got

    names = [f[0] for f in iq.list_functions()]
    assert names == ["f1", "f2", "f3", "f4"], names
    approx, exact, pct = iq.integrate_builtin(names[0], n=5)
    assert math.isfinite(approx) and math.isfinite(pct)

    table = iq.error_table(names[0], 2, 5)
    assert [row["n"] for row in table] == [2, 3, 4, 5]
    assert len(table[0]) == 7

    avgs = iq.range_averages(names[0], [(2, 4), (5, 7)])
    assert avgs[0]["range"] == (2, 4)

    report = iq.stability("linear", "gauss", 200, 50)
    assert report["all_ok"], report["summary"]

    k = iq.kappa(3)
    assert isinstance(k, Fraction) and k == Fraction(-10)

    alpha, beta = iq.recursion_coeffs("constant", 3)
    assert close(alpha[0], 0.5) and len(beta) == len(alpha) - 1

    for bad in (lambda: iq.Rule("linear", "gauss", 0), lambda: iq.integrate("1/x", n=2, a=-1.0, b=0.0)):
        try:
            bad()
        except iq.QuadratureError:
            pass
        else:
            raise AssertionError("expected QuadratureError")
    try:
        iq.Rule("cubic", "gauss", 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("smoke test ok")


if __name__ == "__main__":
    main()

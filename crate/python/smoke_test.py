"""Smoke test for the cayley_ramanujan extension module.

Build and install first, for example:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/*.whl
"""

import math

import cayley_ramanujan as cr


def close(a, b, tol=1e-8):
    return abs(a - b) <= tol


def main():
    g = cr.Group.dihedral(11)
    assert g.order == 22 and g.ratio == 5, g
    assert cr.Group.parse("fpq:7,3").order == 21

    s = cr.Subset.parse(g, "normal:X=;Y=y")
    spec = dict(s.spectrum())
    assert close(max(spec), 11) and close(min(spec), -11)
    assert cr.Subset.parse(g, "mask:" + s.mask).elements() == s.elements()

    w = cr.Subset.interval(cr.Group.dihedral(29), 7, 7)
    v = w.verdict()
    assert v["status"] == "ramanujan" and close(v["mu"], 12.72115616434675, 1e-9), v
    formula = sorted((x for x, m in w.spectrum() for _ in range(m)), reverse=True)
    oracle = w.oracle_spectrum()
    assert max(abs(a - b) for a, b in zip(formula, oracle)) < 1e-8

    b = cr.Group.dihedral(101).bounds()
    assert b["l0"] == b["l_hat"] == 25
    f = cr.Group.fpq(31, 5).bounds(exhaustive=True)
    assert f["l_hat"] == 21 and f["sweep"]["trivial_bound_violations"] == 0

    c = cr.classify_prime(29)
    assert c["verdict"] == "exceptional" and (c["r"], c["c"], c["k"]) == (1, -1, 3)
    assert cr.classify_prime(41)["tilde_l"] == cr.classify_prime(41)["l_hat"] + 1

    assert cr.family_primes(3, 1, 800) == [37, 109, 541, 757]
    assert 4 in cr.residue_avoidance(29)["witnesses"]
    assert abs(cr.hl_constant(1, 1, 100_000)["partial"] - 1.84998) < 0.05
    assert len(cr.sieve_primes(1_000_000)) == 78498
    assert cr.legendre(2, 7) == 1
    assert cr.tilde_l(5)["tilde_l"] == 8

    try:
        cr.Group.dihedral(12)
    except ValueError:
        pass
    else:
        raise AssertionError("composite p accepted")
    try:
        cr.tilde_l(17)
    except OverflowError:
        pass
    else:
        raise AssertionError("guard not raised")

    print("smoke test passed:", cr.__version__, f"mu1(29) = {v['mu']:.6f}", f"rb = {2 * math.sqrt(43):.6f}")


if __name__ == "__main__":
    main()

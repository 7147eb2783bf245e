import itertools

import numpy as np
import pytest

from ampsample.surface.gadgets import (
    GAMMA_A,
    GAMMA_B,
    GAMMA_C,
    GAMMA_D,
    THETA_A,
    THETA_B,
    crossing_weight,
    cycle_table,
    gamma,
    theta,
    verify_gadgets,
    weighted_cycle_sum,
)


def brute_cycle_sum(gd, z):
    # independent enumeration over all edge subsets
    g = gd.graph
    total = 0j
    for x in range(1 << g.n):
        if not g.is_cycle(x):
            continue
        if tuple((x >> j) & 1 for j in gd.dangling) != tuple(int(c) for c in z):
            continue
        total += np.prod([g.weight(j) for j in range(g.n) if x >> j & 1])
    return total


def test_theta_identities():
    a, b = THETA_A, THETA_B
    assert abs(weighted_cycle_sum(theta(), "000")) <= 1e-12
    assert weighted_cycle_sum(theta(), "000") == pytest.approx(1 + a**3)
    for z in ("011", "101", "110"):
        v = weighted_cycle_sum(theta(), z)
        assert v == pytest.approx(b**2 * (a + a**2))
        assert abs(abs(v) - 1) <= 1e-12


def test_gamma_polynomials():
    a, b, c, d = GAMMA_A, GAMMA_B, GAMMA_C, GAMMA_D
    t = cycle_table(gamma())
    assert t["0000"] == pytest.approx(1 + 2 * a * b**2 * c + a**2 * b**4)
    assert t["1010"] == pytest.approx(d**2 * (b**2 * c + 2 * a * b**2 + a**2 * b**2 * c))
    assert t["1111"] == pytest.approx(d**4 * (a**2 + b**4 + 2 * a * b**2 * c))
    assert abs(t["1100"]) <= 1e-9 and abs(t["0110"]) <= 1e-9
    moduli = [abs(t[z]) ** 2 for z in ("0000", "1010", "1111")]
    assert max(moduli) - min(moduli) <= 1e-9
    assert gamma().tau == pytest.approx(3.732, abs=1e-3)
    assert gamma().tau == pytest.approx(2 + np.sqrt(3))


def test_gamma_realizes_crossing():
    gm = gamma()
    for z in itertools.product("01", repeat=4):
        z = "".join(z)
        w = gm.tau * abs(weighted_cycle_sum(gm, z)) ** 2
        want = crossing_weight(z) if z.count("1") % 2 == 0 else 0.0
        assert w == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("make", [theta, gamma])
def test_cycle_sum_matches_brute_force(make):
    gd = make()
    for z in itertools.product("01", repeat=gd.k):
        assert weighted_cycle_sum(gd, "".join(z)) == pytest.approx(brute_cycle_sum(gd, z), abs=1e-12)


def test_verify_report_and_negative_control():
    rep = verify_gadgets()
    assert rep.ok and not rep.failures
    bad = verify_gadgets(theta_gadget=theta(a=THETA_A * 1.01))
    assert not bad.ok
    assert any("000" in c.name for c in bad.failures)
    worse = verify_gadgets(gamma_gadget=gamma(c=0.7))
    assert not worse.ok


def test_wrong_dangling_length():
    with pytest.raises(Exception):
        weighted_cycle_sum(theta(), "01")

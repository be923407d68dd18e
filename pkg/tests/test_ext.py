"""Ext tables by two routes, resolutions, and the structural checks."""

import random

import pytest

from conftest import random_valid_module, small_free
from topsquares import ext as ex
from topsquares import unstable as un
from topsquares.unstable import INF, sphere


def table_dict(t: ex.ExtTable) -> dict:
    return {(s, a): n for s, a, n in t.rows()}


def test_sphere_ext_golden_degree_two_truncation_two():
    t = ex.ext_sphere(2, 2, s_max=2, a_max=8)
    assert table_dict(t) == {(0, 2): 1, (1, 3): 1, (1, 4): 1, (2, 7): 1}


def test_sphere_ext_truncation_zero_is_one_dimensional():
    for m in range(0, 6):
        t = ex.ext_sphere(m, 0, a_max=m + 4)
        assert table_dict(t) == {(0, m): 1}


def test_resolution_golden_staircase():
    # one generator per stage, degrees 1, 2, 3, 4
    res = ex.minimal_resolution(sphere(1, 3, max_deg=8), s_max=3)
    assert {key: n for key, n in res.generator_counts().items() if n} == {
        (0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1
    }


def test_resolution_of_free_module_stops_at_stage_zero():
    res = ex.minimal_resolution(small_free(2, 2, 16), s_max=3)
    counts = {key: n for key, n in res.generator_counts().items() if n}
    assert counts == {(0, 2): 1}


def test_free_module_lambda_cohomology_concentrated_at_bottom():
    for n in range(1, 5):
        for k in range(1, 4):
            t = ex.ext_via_lambda(small_free(n, k, 20), s_max=k + 1, a_max=20)
            assert table_dict(t) == {(0, n): 1}, (n, k)


def test_routes_agree_on_spheres_small():
    for n in range(1, 5):
        for k in range(1, 3):
            mod = sphere(n, k, max_deg=16)
            t1 = ex.ext_via_lambda(mod, s_max=k, a_max=16)
            t2 = ex.ext_via_resolution(mod, s_max=k, a_max=16)
            assert t1.agrees_with(t2), (n, k)


def test_routes_agree_on_random_modules():
    rng = random.Random(99)
    for _ in range(6):
        mod = random_valid_module(rng, k_max=2, max_deg=12)
        if mod.k is INF:
            continue
        k = int(mod.k)
        t1 = ex.ext_via_lambda(mod, s_max=k, a_max=mod.max_deg)
        t2 = ex.ext_via_resolution(mod, s_max=k, a_max=mod.max_deg)
        assert t1.agrees_with(t2), mod.name


def test_table_window_disagreement_detected():
    a = ex.ExtTable(entries={(0, 2): 1}, s_max=2, a_max=8, via="lambda")
    b = ex.ExtTable(entries={(0, 2): 2}, s_max=2, a_max=8, via="resolution")
    assert not a.agrees_with(b)
    assert a.agrees_with(ex.ExtTable(entries={(0, 2): 1}, s_max=2, a_max=8, via="x"))


def test_resolution_rejects_invalid_module():
    from topsquares.f2linalg import BitMatrix

    mod = un.FiniteUModule(
        k=2, max_deg=10, dims={2: 1, 4: 1, 7: 1},
        labels={2: ["x"], 4: ["y"], 7: ["z"]},
    )
    mod.action[(0, 2)] = BitMatrix.from_dense([[1]])
    mod.action[(1, 4)] = BitMatrix.from_dense([[1]])
    with pytest.raises(ValueError):
        ex.minimal_resolution(mod, s_max=2)


def test_stabilization_on_small_spheres():
    for m in range(1, 4):
        for n in range(1, 4):
            window = max(m, n) + 1
            mod = sphere(m, INF, max_deg=window)
            report = ex.stabilization_check(mod, n, range(0, 4), s_max=3)
            assert report == [], (m, n, report)


def test_stabilization_requires_all_squares():
    with pytest.raises(ValueError):
        ex.stabilization_check(sphere(2, 2, 4), 2, range(0, 3), s_max=2)


def test_ehp_cochain_exactness_small():
    for m in range(0, 5):
        for k in range(0, 3):
            assert ex.ehp_cochain_check(m, k), (m, k)


def test_ehp_euler_module_level():
    assert ex.ehp_euler_check(sphere(3, 2, max_deg=12), 3) == []
    assert ex.ehp_euler_check(sphere(3, 2, max_deg=12), 5) == []
    assert ex.ehp_euler_check(small_free(2, 2, 16), 4) == []


def test_hdim_reports_nothing_on_valid_modules():
    rng = random.Random(7)
    for _ in range(4):
        mod = random_valid_module(rng, k_max=2, max_deg=12)
        if mod.k is INF:
            continue
        assert ex.hdim_check(mod) == []


def test_loop_adjoint_shift_on_sphere_tables():
    # Ext into the looped target matches Ext of the looped source, a staple
    # consequence of the suspension adjunction on spheres:
    # the (s, a) table of S_k(n) determines the (s, a+1) table of S_{k+1}(n+1)
    t1 = ex.ext_sphere(2, 2, s_max=2, a_max=10)
    t2 = ex.ext_sphere(3, 3, s_max=2, a_max=11)
    shifted = {(s, a + 1): n for (s, a), n in table_dict(t1).items()}
    sub = {key: n for key, n in table_dict(t2).items() if key in shifted}
    assert shifted == sub

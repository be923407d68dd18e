"""Module category: free modules, functors, validation."""

import random

import pytest

from conftest import random_valid_module, small_free
from topsquares import unstable as un
from topsquares.unstable import INF, FreeDescriptor, free_module, sphere, validate


def test_free_module_dims_one_generator_degree_two_k_two():
    # basis words on i2: nondecreasing lower indices < 2
    mod = small_free(2, 2, 12)
    assert {d: mod.dim(d) for d in mod.degrees()} == {
        2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 8: 1, 9: 1, 10: 1, 12: 1
    }
    assert validate(mod) == []


def test_free_module_word_count_growth():
    # indices < min(n, k) and degrees strictly increase word by word
    for n in range(1, 5):
        for k in range(0, 4):
            mod = small_free(n, k, 20)
            assert mod.dim(n) == 1
            assert validate(mod) == []


def test_sphere_and_suspension():
    s = sphere(3, 2, max_deg=10)
    assert s.total_dim() == 1 and s.dim(3) == 1
    up = un.suspend(s)
    assert up.dim(4) == 1 and up.k == 3
    down = un.desuspend(up)
    assert down.dims == s.dims and down.k == s.k


def test_desuspend_requires_trivial_zero_action():
    mod = small_free(1, 1, 6)
    with pytest.raises(ValueError):
        un.desuspend(sphere(0, 2, max_deg=4))
    assert un.desuspend(un.suspend(mod)).dims == mod.dims


def test_loop_of_sphere():
    # both loop functors of a sphere are spheres, one truncation down
    for n in range(1, 6):
        for k in range(1, 4):
            om, om1 = un.loop(sphere(n, k, max_deg=4 * n + 4))
            assert {d: om.dim(d) for d in om.degrees()} == {n - 1: 1}
            assert {d: om1.dim(d) for d in om1.degrees()} == {2 * n - 1: 1}
            assert om.k == k - 1 and om1.k == k - 1


def test_loop_of_free_module():
    # the cokernel route drops a free module to one fewer square and one
    # lower degree; the kernel route vanishes
    f = small_free(2, 2, 16)
    om, om1 = un.loop(f)
    g = small_free(1, 1, 8)
    assert {d: om.dim(d) for d in om.degrees()} == {d: g.dim(d) for d in g.degrees()}
    assert om1.total_dim() == 0
    assert validate(om) == []


def test_tensor_dims_are_products():
    a = small_free(1, 2, 8)
    b = sphere(2, 2, max_deg=8)
    t = un.tensor(a, b)
    for d in range(0, 9):
        expect = sum(a.dim(p) * b.dim(d - p) for p in range(0, d + 1))
        assert t.dim(d) == expect
    assert validate(t) == []


def test_tensor_of_spheres_is_sphere():
    t = un.tensor(sphere(2, 3, 10), sphere(3, 3, 10))
    assert {d: t.dim(d) for d in t.degrees()} == {5: 1}


def test_forget_drops_top_squares():
    mod = small_free(3, 3, 14)
    down = un.forget(mod, 1)
    assert down.k == 1
    assert all(j < 1 for (j, d) in down.action)
    assert validate(down) == []


def test_frobenius_doubles_degrees():
    mod = small_free(2, 2, 8)
    dbl = un.frobenius(mod)
    assert {d: dbl.dim(d) for d in dbl.degrees()} == {
        2 * d: mod.dim(d) for d in mod.degrees()
    }
    assert dbl.k == 4


def test_lambda_map_commutes():
    # construction asserts commutation internally
    f = un.lambda_map(small_free(2, 2, 16))
    assert f.source.k == f.target.k


def test_direct_sum_dims():
    a = sphere(1, 2, 6)
    b = small_free(2, 2, 6)
    s = un.direct_sum(a, b)
    for d in range(7):
        assert s.dim(d) == a.dim(d) + b.dim(d)
    assert validate(s) == []


def test_indecomposables_of_free_module():
    mod = small_free(3, 2, 12)
    ind = un.indecomposables(mod)
    assert {d: n for d, n in ind.items() if n} == {3: 1}


def test_validate_catches_broken_relation():
    # Sq_1 Sq_0 = 0 on a degree-2 class; wire it nonzero and validate must object
    from topsquares.f2linalg import BitMatrix

    mod = un.FiniteUModule(
        k=2, max_deg=10,
        dims={2: 1, 4: 1, 7: 1},
        labels={2: ["x"], 4: ["y"], 7: ["z"]},
    )
    mod.action[(0, 2)] = BitMatrix.from_dense([[1]])
    mod.action[(1, 4)] = BitMatrix.from_dense([[1]])
    issues = validate(mod)
    assert issues and any("Sq_1 Sq_0" in x for x in issues)


def test_validate_catches_bad_shape():
    from topsquares.f2linalg import BitMatrix

    mod = sphere(2, 2, max_deg=8)
    mod.action[(1, 2)] = BitMatrix.from_dense([[1]])  # target degree 3 is empty
    assert validate(mod)


def test_random_modules_validate():
    rng = random.Random(20260823)
    for _ in range(25):
        mod = random_valid_module(rng)
        assert validate(mod) == []


def test_full_square_module():
    mod = free_module(FreeDescriptor(n=2, k=INF, max_deg=12))
    assert validate(mod) == []
    assert mod.dim(2) == 1 and mod.dim(3) == 1

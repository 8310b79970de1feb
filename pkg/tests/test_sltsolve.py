import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gccert.gcdiagram import gamma, in_box
from gccert.sltsolve import (
    GenericityFailure,
    Seed,
    SeedSearchExhausted,
    _eval_equation,
    _generate,
    build_slt,
    coordinate_change_to_y,
    coordinate_change_to_z,
    diagonal_recurrence,
    find_generic_seed,
    is_pre_generic,
    k_form,
    propagate_diagonal,
    solution_from_json,
    solution_to_json,
    solve_slt,
    symmetric_inner_base,
    symmetric_inner_solution,
    verify_slt,
)

from conftest import rationals

F = Fraction

PAIRS = [(n, m) for n in range(4, 10) for m in range(2, n // 2 + 1)]


def random_seed(rng, n, m):
    idx = Seed.from_values(n, m, [1] * (n - m)).indices
    vals = [F(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for _ in idx]
    return Seed.from_values(n, m, vals)


@given(st.integers(2, 8), rationals(nonzero=True))
def test_symmetric_inner_solution_solves_inside_equations(m, c):
    y = symmetric_inner_solution(m, c)
    assert y[(m, m)] == c
    for eq in build_slt(2 * m + 1, m).by_kind("inside"):
        assert _eval_equation(eq, y, {}, {}) == 0
    for i in range(1, m + 1):
        assert y[(i, i)] in (c, -c)
        for j in range(1, m + 1):
            assert y[(i, j)] * y[(j, i)] == c * c


def test_symmetric_base_small_case():
    assert symmetric_inner_base(3) == {(1, 1): 1, (1, 2): 2, (1, 3): 8, (2, 1): F(1, 2),
                                       (2, 2): 1, (3, 1): F(1, 8)}


def test_inside_equations_only_touch_the_box():
    sys = build_slt(7, 3)
    for eq in sys.by_kind("inside"):
        for _, num, den, _ in eq.terms:
            assert all(v is None or in_box(v, 3) for v in (num, den))
    assert len(sys.by_kind("link")) == 3


@given(st.sampled_from(PAIRS), st.data())
def test_coordinate_change_round_trip(nm, data):
    n, m = nm
    z = {ij: data.draw(rationals(nonzero=True)) for ij in gamma(n)}
    ch = {i: data.draw(rationals(nonzero=True)) for i in range(1, n)}
    cv = {j: data.draw(rationals(nonzero=True)) for j in range(1, n)}
    y = coordinate_change_to_y(z, ch, cv, n)
    assert coordinate_change_to_z(y, ch, cv, n) == z


def test_recurrence_and_direct_agree_on_random_seeds():
    rng = random.Random(20240611)
    generic = 0
    for trial in range(600):
        n, m = rng.choice(PAIRS)
        seed = random_seed(rng, n, m)
        z1, f1 = _generate(n, m, seed.d, "direct")
        z2, f2 = _generate(n, m, seed.d, "recurrence")
        assert f1 == f2
        assert z1 == z2
        generic += f1 is None
    assert generic >= 100


def test_recurrence_steps_only_use_earlier_cells():
    seed = find_generic_seed(7, 2)
    z, f = _generate(7, 2, seed.d)
    assert f is None
    steps = diagonal_recurrence(z, 7, 2, (3, 3), "up")
    assert [cell for cell, *_ in steps] == [(2, 4), (1, 5)]
    for cell, eq, c1, c2 in steps:
        assert c2 == z[eq] ** 2


def test_propagate_rejects_unknown_mode():
    with pytest.raises(ValueError):
        propagate_diagonal({}, 5, 2, 4, via="magic")


def test_k_form_reports_poles():
    z = {(1, 3): F(0), (2, 2): F(1)}
    with pytest.raises(ZeroDivisionError):
        k_form(1, 3, z, 5, 2)


def test_example_seed_rejected_at_cell_1_5():
    seed = Seed.from_values(7, 2, [-1, 1, 1, 1, 1])
    with pytest.raises(GenericityFailure) as info:
        solve_slt(7, 2, seed)
    f = info.value.failure
    assert (f.equation, f.cell, f.kind) == ((1, 4), (1, 5), "zero")


def test_frozen_sign_minus_one_fails_at_last_diagonal():
    # d_{k-1,k-1} = -1 for odd n forces a vanishing bulk product
    seed = Seed.from_values(7, 2, [-1, 1, 1, -1, 1])
    z, f = _generate(7, 2, seed.d)
    assert f is not None and f.diagonal == 8
    assert all(is_pre_generic(7, 2, z, ij, seed.d[ij]) for ij in [(1, 3), (2, 3), (3, 3), (3, 4)]
               if ij[0] + ij[1] <= 7)


def test_perturbed_example_is_generic():
    sol = solve_slt(7, 2, Seed.from_values(7, 2, [-1, 1, 1, F(-9, 10), 1]))
    assert verify_slt(sol).ok


def test_pre_generic_rejects_zero_and_poles():
    assert not is_pre_generic(5, 2, {(2, 2): F(1)}, (1, 3), 0)
    assert is_pre_generic(5, 2, {(2, 2): F(1)}, (2, 2), 5)


@pytest.mark.parametrize("n,m", PAIRS)
def test_search_and_solve(n, m):
    seed = find_generic_seed(n, m)
    sol = solve_slt(n, m, seed)
    rep = verify_slt(sol)
    assert rep.ok, rep.residuals
    assert all(v != 0 for v in sol.y_all().values())
    assert solve_slt(n, m, seed, via="recurrence").y_c == sol.y_c


def test_search_example_five_two():
    assert find_generic_seed(5, 2).d[(2, 2)] == F(-9, 10)


def test_search_budget_is_enforced():
    with pytest.raises(SeedSearchExhausted) as info:
        find_generic_seed(9, 2, budget=3)
    assert info.value.tried <= 3


def test_solution_is_not_constant_across_seeds():
    a = solve_slt(7, 2, find_generic_seed(7, 2))
    b = solve_slt(7, 2, Seed.from_values(7, 2, [-1, 1, 1, F(-9, 10), 1]))
    assert a.y_c != b.y_c


def test_perturbing_one_value_breaks_an_equation():
    sol = solve_slt(6, 2, find_generic_seed(6, 2))
    y = sol.y_all()
    cell = (4, 1)
    y[cell] = y[cell] * 2
    sys = build_slt(6, 2)
    assert any(_eval_equation(eq, y, sol.c_hor_c, sol.c_ver_c) != 0 for eq in sys.equations)


def test_seed_validation():
    with pytest.raises(ValueError):
        Seed.from_values(7, 2, [1, 1, 1])
    with pytest.raises(ValueError):
        Seed.from_values(7, 2, [1, 1, 0, 1, 1])
    with pytest.raises(ValueError):
        Seed(7, 2, {(2, 2): 1, (1, 3): 1, (2, 3): 1, (3, 3): 1, (4, 4): 1})


def test_solution_json_round_trip():
    sol = solve_slt(6, 3, find_generic_seed(6, 3))
    back = solution_from_json(solution_to_json(sol))
    assert back.y_c == sol.y_c and back.c_hor_c == sol.c_hor_c
    assert verify_slt(back).ok

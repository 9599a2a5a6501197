import numpy as np
import pytest

from sylvlike.errors import DimensionMismatch
from sylvlike.generate import (PROBLEM_KINDS, random_involution,
                               random_operator, random_problem, random_qep)
from sylvlike.solvability import check_preserving, check_reversing, kron_nonsingular
from sylvlike.structured_ops import KINDS, apply


def test_problem_is_deterministic():
    a = random_problem(4, "condition_b", "perm_reversing", seed=9)
    b = random_problem(4, "condition_b", "perm_reversing", seed=9)
    assert a.f == b.f
    for k in "ABC":
        assert np.array_equal(getattr(a, k), getattr(b, k))
    c = random_problem(4, "condition_b", "perm_reversing", seed=10)
    assert not np.array_equal(a.A, c.A)


def test_involution(rng):
    for m in range(1, 8):
        p = np.array(random_involution(rng, m)) - 1
        assert sorted(p) == list(range(m))
        assert np.array_equal(p[p], np.arange(m))


@pytest.mark.parametrize("kind", KINDS)
def test_random_operator_sizes(kind):
    f = random_operator(kind, 5, seed=1)
    assert f.kind == kind
    if kind.startswith("perm"):
        assert f.size == 5
        assert random_operator(kind, 5, seed=1, involution=True).involutive


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("problem_kind", ["condition_a", "condition_b"])
def test_condition_kinds_satisfy_condition(kind, problem_kind):
    for seed in range(20):
        p = random_problem(1 + seed % 6, problem_kind, kind, seed=seed)
        check = check_reversing if p.f.reversing else check_preserving
        r = check(p.A, p.B, p.f)
        assert r.holds and r.kron_nonsingular


@pytest.mark.parametrize("kind", KINDS)
def test_singular_kind_is_singular(kind):
    for seed in range(10):
        p = random_problem(1 + seed % 6, "singular", kind, seed=seed)
        assert not kron_nonsingular(p.A, p.B, f=p.f)[0]


def test_bad_arguments():
    with pytest.raises(DimensionMismatch):
        random_problem(33)
    with pytest.raises(DimensionMismatch):
        random_problem(0)
    with pytest.raises(ValueError):
        random_problem(2, "weird")
    assert set(PROBLEM_KINDS) == {"generic", "condition_a", "condition_b", "singular"}


def test_random_qep_is_palindromic():
    for kind in ("transpose", "conjugate_transpose", "perm_reversing"):
        q = random_qep(3, kind, seed=2)
        assert np.allclose(apply(q.f, q.A2), q.A0)
        assert np.allclose(apply(q.f, q.A1), q.A1)

import math
from fractions import Fraction

import pytest

from ..critical import (
    HessianReport,
    critical_tuple,
    fingerprint,
    hessian_index,
    orbit_directions,
    slice_basis,
    torus_census,
)
from ..errors import IrregularWeights
from ..representation import conjugate, jacobian, morse_function, random_tuple, residual_norm
from ..su2 import QUAT_J, haar_sample
from ..utils import task_rng
from ..weights import WeightConfig

F = Fraction
PARABOLIC = [
    WeightConfig.parabolic(1, [F(1, 2)]),
    WeightConfig.parabolic(1, [F(9, 10), F(1, 10)]),
    WeightConfig.parabolic(2, [F(1, 2)]),
]


@pytest.mark.parametrize("cfg", PARABOLIC)
def test_critical_tuples_lie_on_the_fiber(cfg):
    for J in range(2 ** cfg.n):
        for lift in (0, 1):
            p = critical_tuple(cfg, J, lift)
            assert residual_norm(p) < 1e-12


def test_critical_tuple_example():
    cfg = WeightConfig.parabolic(1, [F(1, 2)])
    p = critical_tuple(cfg, [1])
    assert morse_function(p) == pytest.approx(math.sqrt(2) / 2)
    assert p.B[-1].allclose(QUAT_J)
    assert p.C[0].x == pytest.approx(1.0)


def test_classic_critical_tuple():
    p = critical_tuple(WeightConfig.classic(2), angles=[(0.3, 1.2)])
    assert residual_norm(p) < 1e-12
    assert morse_function(p) == pytest.approx(0.0, abs=1e-15)


def test_fingerprint_is_conjugation_invariant():
    cfg = PARABOLIC[1]
    for J in range(4):
        p = critical_tuple(cfg, J)
        h = haar_sample(task_rng(9, J))
        assert fingerprint(conjugate(p, h)) == fingerprint(p)


def test_complementary_subsets_are_conjugate():
    cfg = PARABOLIC[1]
    for J in range(4):
        complement = 3 ^ J
        assert fingerprint(critical_tuple(cfg, J)) == fingerprint(critical_tuple(cfg, complement))
    assert fingerprint(critical_tuple(cfg, 0, 0)) != fingerprint(critical_tuple(cfg, 0, 1))


def test_slice_has_the_moduli_dimension():
    cfg = PARABOLIC[2]
    p = critical_tuple(cfg, 0)
    basis = slice_basis(p)
    assert basis.shape == (p.flat_dim, 8)
    # the slice is tangent to the fiber and orthogonal to the orbit
    assert abs(jacobian(p) @ basis).max() < 1e-10
    assert abs(orbit_directions(p).T @ basis).max() < 1e-10


def test_classic_hessian():
    report = hessian_index(critical_tuple(WeightConfig.classic(2)))
    assert isinstance(report, HessianReport)
    assert report.slice_dim == 6
    assert report.index == 2
    assert report.nullity == 2
    assert report.positive == 2
    assert report.gradient_norm < 1e-8
    assert report.to_dict()["index"] == 2


@pytest.mark.parametrize(
    "cfg,indices", list(zip(PARABOLIC, [[0, 2], [0, 2, 2, 4], [2, 4]]))
)
def test_census(cfg, indices):
    census = torus_census(cfg)
    assert len(census) == 2 ** cfg.n
    assert census.indices == indices
    assert census.formula_indices == indices
    assert census.nullities == [2 * cfg.g - 2] * len(census)
    frame = census.to_frame()
    assert list(frame["index"]) == [c["report"].index for c in census.classes]
    assert census.to_dict()["indices"] == indices


def test_census_levels():
    census = torus_census(PARABOLIC[0])
    assert census.levels == pytest.approx([-math.sqrt(2) / 2, math.sqrt(2) / 2])


def test_census_in_worker_processes():
    census = torus_census(PARABOLIC[0], threads=2)
    assert census.indices == [0, 2]


def test_errors():
    with pytest.raises(ValueError):
        critical_tuple(WeightConfig.parabolic(0, [F(1, 3)] * 3))
    with pytest.raises(ValueError):
        critical_tuple(PARABOLIC[0], lift=2)
    with pytest.raises(IrregularWeights):
        critical_tuple(WeightConfig.parabolic(1, [F(1, 2), F(1, 2)]))
    with pytest.raises(ValueError):
        torus_census(WeightConfig.classic(2))
    with pytest.raises(ValueError):
        torus_census(PARABOLIC[0], threads=0)
    with pytest.raises(ValueError):
        hessian_index(random_tuple(PARABOLIC[0], task_rng(0)))

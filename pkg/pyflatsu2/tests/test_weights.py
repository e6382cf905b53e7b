from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from ..errors import (
    IrregularWeights,
    NoInteriorWeight,
    NotNormalized,
    SubsetOverflow,
    WeightParseError,
)
from ..weights import (
    Mode,
    WeightConfig,
    as_mask,
    floor_kappa,
    format_subset,
    is_regular,
    kappa,
    normalize,
    parse_weight,
    parse_weights,
    require_regular,
    subset_members,
)

F = Fraction
interior = st.fractions(min_value=F(1, 60), max_value=F(59, 60), max_denominator=60).filter(
    lambda t: 0 < t < 1
)


def test_parse_weight():
    assert parse_weight("1/2") == F(1, 2)
    assert parse_weight(" 9 / 10 ") == F(9, 10)
    assert parse_weight("1") == 1
    assert parse_weight(F(1, 3)) == F(1, 3)
    assert parse_weights("1/2,1/3") == (F(1, 2), F(1, 3))
    assert parse_weights("") == ()


@pytest.mark.parametrize("text", ["0.5", "3/2", "1/0", "-1/2", "a", 0.5])
def test_parse_weight_rejects(text):
    with pytest.raises(WeightParseError):
        parse_weight(text)


def test_subsets():
    assert subset_members(0b101) == (1, 3)
    assert as_mask([1, 3], 3) == 0b101
    assert as_mask(0b11, 2) == 3
    assert format_subset(0b110) == "{2,3}"
    with pytest.raises(ValueError):
        as_mask([4], 3)


def test_config_modes():
    assert WeightConfig.classic(2).is_classic
    assert WeightConfig.parabolic(1, ["1/2"]).t == (F(1, 2),)
    assert not WeightConfig.raw(1, ["1"]).is_normalized
    with pytest.raises(ValueError):
        WeightConfig.parabolic(1, ["1"])
    with pytest.raises(ValueError):
        WeightConfig(-1)
    assert WeightConfig.parabolic(2, ["1/2"]).with_genus(1) == WeightConfig.parabolic(1, ["1/2"])


def test_kappa():
    cfg = WeightConfig.parabolic(1, [F(9, 10), F(1, 10)])
    assert kappa(cfg, 0).value == F(-1, 2)
    assert kappa(cfg, [1]).value == F(2, 5)
    assert kappa(cfg, [2]).value == F(-2, 5)
    assert kappa(cfg, [1, 2]).value == F(1, 2)
    assert kappa(cfg, [1]).members == (1,)
    assert floor_kappa(kappa(cfg, 0)) == -1
    assert floor_kappa(F(2, 5)) == 0


@given(st.lists(interior, min_size=1, max_size=5), st.integers(min_value=0, max_value=31))
def test_kappa_complement_is_negation(weights, mask):
    cfg = WeightConfig.parabolic(1, weights)
    mask &= 2 ** cfg.n - 1
    complement = (2 ** cfg.n - 1) ^ mask
    assert kappa(cfg, complement).value == -kappa(cfg, mask).value


def test_regularity():
    assert is_regular(WeightConfig.classic(1)).regular
    result = is_regular(WeightConfig.parabolic(1, [F(1, 2), F(1, 2)]))
    assert not result
    assert result.witness == (1,)
    # no punctures: kappa of the empty set is 0
    assert is_regular(WeightConfig.parabolic(1, [])).witness == ()
    assert is_regular(WeightConfig.parabolic(0, [F(1, 3)] * 3)).regular


def test_lex_least_witness():
    # {3} and {1, 2} both give kappa = 0; (1, 2) sorts first
    assert is_regular(WeightConfig.parabolic(1, [F(1, 4), F(1, 4), F(1, 2)])).witness == (1, 2)
    # {1} and {2, 3}
    assert is_regular(WeightConfig.parabolic(1, [F(1, 2), F(1, 4), F(1, 4)])).witness == (1,)
    # |J| in {0, 2, 4}: the empty set wins
    assert is_regular(WeightConfig.parabolic(1, [F(1, 2)] * 4)).witness == ()


def test_regularity_in_chunks():
    # more punctures than one enumeration chunk; 2|J| - 21 is odd so never 0 mod 2000
    cfg = WeightConfig.parabolic(1, [F(1, 1000)] * 21)
    assert is_regular(cfg).regular


def test_regularity_errors():
    with pytest.raises(NotNormalized):
        is_regular(WeightConfig.raw(1, ["1/2"]))
    with pytest.raises(SubsetOverflow):
        is_regular(WeightConfig.parabolic(1, [F(1, 3)] * 31))
    with pytest.raises(IrregularWeights) as e:
        require_regular(WeightConfig.parabolic(1, [F(1, 2), F(1, 2)]))
    assert e.value.witness == (1,)
    assert "{1}" in str(e.value)


def test_normalize():
    cfg, transcript = normalize(WeightConfig.raw(1, [F(1, 3), F(1)]))
    assert cfg == WeightConfig.parabolic(1, [F(2, 3)])
    assert transcript
    cfg, _ = normalize(WeightConfig.raw(1, [F(1, 3), F(1), F(1)]))
    assert cfg == WeightConfig.parabolic(1, [F(1, 3)])
    cfg, _ = normalize(WeightConfig.raw(2, [F(0), F(1)]))
    assert cfg == WeightConfig.classic(2)
    cfg, _ = normalize(WeightConfig.raw(2, [F(1)]))
    assert cfg.mode is Mode.CLASSIC
    cfg, _ = normalize(WeightConfig.raw(1, [F(0), F(1, 3)]))
    assert cfg == WeightConfig.parabolic(1, [F(1, 3)])
    with pytest.raises(NoInteriorWeight):
        normalize(WeightConfig.raw(1, [F(1)] * 3))


def test_normalize_leaves_normalized_configs():
    cfg = WeightConfig.parabolic(1, [F(1, 2)])
    assert normalize(cfg)[0] is cfg


@given(st.lists(interior, min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_regularity_ignores_puncture_order(weights, random):
    shuffled = list(weights)
    random.shuffle(shuffled)
    a = is_regular(WeightConfig.parabolic(1, weights))
    b = is_regular(WeightConfig.parabolic(1, shuffled))
    assert a.regular == b.regular


raw_weights = st.lists(st.sampled_from([F(0), F(1)]) | interior, max_size=6)


@given(st.integers(min_value=0, max_value=3), raw_weights)
def test_normalize_is_idempotent(g, weights):
    try:
        once, _ = normalize(WeightConfig.raw(g, weights))
    except NoInteriorWeight:
        assume(False)
    twice, transcript = normalize(once)
    assert twice == once
    assert transcript == [f"already {once.mode.value}; unchanged"]

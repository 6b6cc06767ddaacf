import pytest

from idpath.errors import DomainError
from idpath.levy import ExponentialCPRep, GammaRep, StableRep, TemperedStableRep
from idpath.levy.factory import get_representation


@pytest.mark.parametrize(
    "spec, cls",
    [
        ({"type": "gamma", "a": 1.0, "beta": 2.0}, GammaRep),
        ({"type": "stable", "alpha": 1.5, "atoms": [{"xi": [1.0], "w": 1.0}]}, StableRep),
        (
            {
                "type": "tempered_stable",
                "alpha": 0.8,
                "atoms": [{"xi": [1.0, 0.0], "w": 1.0, "theta": 2.0}],
            },
            TemperedStableRep,
        ),
        ({"type": "exp_cp"}, ExponentialCPRep),
    ],
)
def test_factory_builds_and_round_trips(spec, cls):
    rep = get_representation(spec)
    assert isinstance(rep, cls)
    assert rep.to_spec() == spec
    assert get_representation(rep.to_spec()).to_spec() == spec


def test_factory_unknown_type():
    with pytest.raises(ValueError, match="Unknown representation"):
        get_representation({"type": "cauchy"})


def test_factory_missing_field():
    with pytest.raises(DomainError, match="beta"):
        get_representation({"type": "gamma", "a": 1.0})


@pytest.mark.parametrize(
    "spec",
    [
        {"type": "gamma", "a": -1.0, "beta": 1.0},
        {"type": "stable", "alpha": 2.0, "atoms": [{"xi": [1.0], "w": 1.0}]},
        {"type": "stable", "alpha": 1.0, "atoms": [{"xi": [1.0], "w": 0.0}]},
        {"type": "stable", "alpha": 1.0, "atoms": []},
        {"type": "tempered_stable", "alpha": 1.0, "atoms": [{"xi": [1.0], "w": 1.0, "theta": 0.0}]},
    ],
)
def test_factory_rejects_bad_parameters(spec):
    with pytest.raises(DomainError):
        get_representation(spec)


def test_stable_symmetry_detection():
    sym = get_representation(
        {"type": "stable", "alpha": 1.0, "atoms": [{"xi": [1.0], "w": 1.0}, {"xi": [-1.0], "w": 1.0}]}
    )
    skew = get_representation(
        {"type": "stable", "alpha": 1.0, "atoms": [{"xi": [1.0], "w": 1.0}, {"xi": [-1.0], "w": 2.0}]}
    )
    assert sym.is_symmetric
    assert not skew.is_symmetric

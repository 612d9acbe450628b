import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gen import admissible_params, fractions
from harnesslab.params import (
    PRESETS,
    FamilyTag,
    ParamSet,
    classical_rho,
    classify,
    preset,
    time_invert,
    validate,
)


def test_trivial_parameters_admissible():
    assert validate(ParamSet.exact()).admissible


def test_brownian_boundary_admissible():
    rep = validate(ParamSet.exact(q=1))
    assert rep.admissible
    assert rep["q_upper_bound"].holds is True


def test_q_minus_one_st_one_violations():
    rep = validate(ParamSet.exact(q=-1, sigma=1, tau=1))
    assert not rep.admissible
    assert set(rep.violated()) == {"sigma_tau_below_one", "not_q_minus_one_st_one"}


@pytest.mark.parametrize("field", ["sigma", "tau"])
def test_negative_sigma_tau_rejected(field):
    p = ParamSet.exact().with_(**{field: F(-1, 3)})
    assert f"{field}_nonnegative" in validate(p).violated()


def test_q_above_upper_bound():
    # 1 + 2 sqrt(1/4) = 2
    assert validate(ParamSet.exact(q=2, sigma=F(1, 2), tau=F(1, 2))).admissible
    assert "q_upper_bound" in validate(ParamSet.exact(q=F(201, 100), sigma=F(1, 2), tau=F(1, 2))).violated()
    assert "q_upper_bound" in validate(ParamSet.floats(q=2.01, sigma=0.5, tau=0.5)).violated()


def test_process_hypotheses_reported_as_assumed():
    d = validate(ParamSet.exact()).to_dict()
    assumed = {c["name"] for c in d["constraints"] if c["holds"] == "assumed"}
    assert assumed == {"F_nonzero", "linear_independence"}


def test_time_invert_example():
    p = ParamSet.floats(q=0.3, eta=1, theta=2, sigma=0.1, tau=0.3)
    assert time_invert(p) == ParamSet.floats(q=0.3, eta=2, theta=1, sigma=0.3, tau=0.1)


@given(admissible_params())
def test_time_invert_involution(p):
    assert time_invert(time_invert(p)) == p


@given(admissible_params())
def test_time_invert_preserves_admissibility(p):
    assert validate(time_invert(p)).admissible == validate(p).admissible


@given(admissible_params())
def test_classify_under_time_inversion(p):
    tags, inv = classify(p), classify(time_invert(p))
    for tag in (FamilyTag.FREE, FamilyTag.CLASSICAL, FamilyTag.BIPOISSON):
        assert (tag in tags) == (tag in inv)
    assert (FamilyTag.SIGMA_ZERO in tags) == (FamilyTag.TAU_ZERO in inv)
    assert (FamilyTag.TAU_ZERO in tags) == (FamilyTag.SIGMA_ZERO in inv)


def test_classify_bipoisson_slice():
    assert classify(ParamSet.exact(q=F(1, 2), eta=1, theta=2)) == {
        FamilyTag.BIPOISSON, FamilyTag.SIGMA_ZERO, FamilyTag.TAU_ZERO}
    # q = 0 adds Free, q = 1 adds Classical
    assert FamilyTag.FREE in classify(ParamSet.exact(q=0, eta=1))
    assert FamilyTag.CLASSICAL in classify(ParamSet.exact(q=1, eta=1))


def test_classify_qmeixner():
    assert FamilyTag.QMEIXNER in classify(ParamSet.exact(q=F(1, 2), theta=1, tau=F(1, 5)))


def test_classify_free_only():
    p = ParamSet.exact(q=F(-1, 4), eta=1, theta=1, sigma=F(1, 2), tau=F(1, 2))
    assert classify(p) == {FamilyTag.FREE}


def test_classify_general_when_nothing_holds():
    assert classify(preset("general")) == {FamilyTag.GENERAL}


def test_classify_float_tolerance():
    p = ParamSet.floats(q=1 - 2 * 0.5 + 1e-14, eta=0.1, theta=0.2, sigma=0.5, tau=0.5)
    assert FamilyTag.CLASSICAL in classify(p)
    assert FamilyTag.CLASSICAL not in classify(p.with_(q=p.q + 1e-9))


@given(fractions(F(1, 12), F(11, 12)), fractions(F(1, 6), 2))
def test_classical_rho_rational(rho, sigma):
    p = ParamSet.exact(q=1 - 2 * rho, eta=0, theta=0, sigma=sigma, tau=rho * rho / sigma)
    assert FamilyTag.CLASSICAL in classify(p)
    assert classical_rho(p) == rho


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_admissible_and_json_round_trip(name):
    p = preset(name)
    assert validate(p).admissible
    assert ParamSet.from_dict(json.loads(p.to_json())) == p


def test_rationals_serialize_as_strings():
    d = ParamSet.exact(q=F(1, 2)).to_dict()
    assert d["q"] == "1/2" and all(isinstance(v, str) for v in d.values())


@given(st.floats(-1, 1), st.floats(0, 1))
def test_float_mode_validate_never_raises(q, s):
    validate(ParamSet.floats(q=q, sigma=s, tau=s))

import math

import pytest

from quadcorr.constants import sigma_inf
from quadcorr.constants.series import sigma_hat, sigma_tilde
from quadcorr.errors import DomainError
from quadcorr.forms import QuadForm
from quadcorr.predict import predict, predict_nonsplit, predict_r2, predict_rq, predict_split
from quadcorr.quadcount import empirical_nonsplit, empirical_rr

F2 = QuadForm.sum_of_squares(2)
F3 = QuadForm.sum_of_squares(3)


def test_split_assembly():
    p = predict_split(1000, 1, 30)
    want = 1.5 * sigma_inf(1000, 1) * sigma_hat(1, 30).value * 1000**1.5 * 1001**0.5 / 576
    assert p.main == pytest.approx(want, rel=1e-14)
    assert p.archimedean == pytest.approx(1.5 * sigma_inf(1000, 1))
    assert p.sigma_finite == sigma_hat(1, 30).value


def test_split_zero_main_term():
    assert predict_split(1000, 2, 20).main == 0


def test_nonsplit_assembly():
    p = predict_nonsplit(100, 2, 30)
    assert p.main == pytest.approx(p.archimedean * sigma_tilde(2, 30).value * 100 * math.sqrt(10002) / 48)
    assert predict_nonsplit(100, 1, 30).main == 0


def test_two_squares_prediction_is_linear():
    a, b = predict_r2(1000, 3, 200), predict_r2(4000, 3, 200)
    assert b.main == pytest.approx(4 * a.main)
    assert a.main / 1000 == pytest.approx(8 * (1 + 1 / 3), rel=2e-2)


def test_general_forms_reduce_to_two_squares():
    a = predict_rq(F2, F2, 500, 3, 100)
    b = predict_r2(500, 3, 100)
    assert a.main == pytest.approx(b.main, rel=1e-12)


@pytest.mark.parametrize("Q1, Q2, l", [(F3, F3, 1), (QuadForm.diagonal([1, 1, 2]), F3, 3), (F3, F2, 5)])
def test_general_forms_against_counts(Q1, Q2, l):
    X = 20000
    ratio = empirical_rr(Q1, Q2, X, l) / predict_rq(Q1, Q2, X, l, 50).main
    assert ratio == pytest.approx(1, abs=0.05)


def test_nonsplit_against_counts():
    X = 3000
    assert empirical_nonsplit(X, 2) / predict_nonsplit(X, 2, 50).main == pytest.approx(1, abs=0.1)


def test_dispatch_and_errors():
    assert predict("r2", 100, 1, 50).kind == "r2"
    assert predict("rq", 100, 1, 20, forms=(F2, F2)).main == pytest.approx(predict_r2(100, 1, 20).main)
    with pytest.raises(DomainError):
        predict("bogus", 100, 1)
    with pytest.raises(DomainError):
        predict_rq(F1 := QuadForm.sum_of_squares(1), F1, 100, 1)

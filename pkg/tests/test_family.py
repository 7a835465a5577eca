import pytest

from extreg import Element
from extreg.family import (FAMILY_NAME, FamilyInstance, build_family,
                           characteristic_report, characteristic_scan,
                           check_witness, default_window, verify_family)
from extreg.fields import FieldParseError, PrimeField, QQ
from extreg.resolution import SizeGuardError


def test_build_family_n1():
    inst = build_family(1, QQ)
    assert inst.context.var_names == ("x1", "y1")
    assert str(inst.f) == "x1*y1"
    assert str(inst.s) == "x1"


def test_build_family_n3():
    inst = build_family(3, QQ)
    assert inst.context.var_names == ("x1", "x2", "x3", "y1", "y2", "y3")
    assert len(inst.f.terms) == 3
    assert inst.f.homogeneous_degree() == 2
    assert all(v == QQ.one() for v in inst.f.terms.values())
    assert inst.s.homogeneous_degree() == 3
    assert len(inst.s.terms) == 1


def test_build_family_range():
    for bad in (0, -1, 33, "2"):
        with pytest.raises(ValueError):
            build_family(bad, QQ)
    assert build_family(32, PrimeField(2)).context.n_vars == 64


def test_check_witness():
    assert check_witness(build_family(2, QQ))
    assert check_witness(build_family(5, PrimeField(7)))


def test_perturbed_witness_fails():
    inst = build_family(2, QQ)
    fake = FamilyInstance(2, inst.context, inst.f,
                          Element.variable(inst.context, "x1"))
    assert not check_witness(fake)
    leftover = fake.s.wedge(fake.f)
    assert str(leftover) == "x1*x2*y2"


def test_verify_family_n1():
    report = verify_family(1, QQ)
    assert report.passed
    assert report.min_gen_degrees == {1: 2}
    assert report.reg_lower_bound >= 1
    assert report.window == default_window(1)


def test_verify_family_n3():
    report = verify_family(3, QQ)
    assert report.passed
    assert report.has_degree_n_generator
    assert report.reg_lower_bound >= 3
    assert report.betti.beta(2, 5) >= 1


def test_verify_family_n3_f2():
    report = verify_family(3, PrimeField(2))
    assert report.passed
    support = {d for d, c in report.min_gen_degrees.items() if c}
    assert 2 in support and 3 in support


def test_verify_family_size_guard():
    with pytest.raises(SizeGuardError):
        verify_family(7, QQ)
    with pytest.raises(SizeGuardError):
        verify_family(7, PrimeField(2))
    # allow_large over Q never helps
    with pytest.raises(SizeGuardError):
        verify_family(7, QQ, allow_large=True)


def test_report_json_shape():
    payload = verify_family(2, QQ).to_json_dict()
    assert payload == {
        "n": 2,
        "field": "Q",
        "witness_ok": True,
        "min_gen_degrees": {"2": 5},
        "has_degree_n_generator": True,
        "reg_lower_bound": 2,
        "window": [3, 6],
        "pass": True,
    }


def test_characteristic_report_char0():
    report = characteristic_report(4, QQ)
    assert report.mode == "uniform-degree"
    assert report.passed
    support = {d for d, c in report.min_gen_degrees.items() if c}
    assert support == {4}


def test_characteristic_report_char2():
    report = characteristic_report(3, PrimeField(2))
    assert report.mode == "square-zero"
    assert report.f_square_zero
    assert report.passed
    report = characteristic_report(6, PrimeField(2))
    assert report.f_square_zero  # f*f = 0 at every n in char 2


def test_characteristic_report_other_char_is_exploratory():
    report = characteristic_report(3, PrimeField(3))
    assert report.mode == "exploratory"
    assert report.passed is None
    assert report.min_gen_degrees  # data still reported


def test_characteristic_scan():
    rows = characteristic_scan(3, [2])
    assert rows[0][0] == 2
    assert rows[0][1].get(2, 0) >= 1
    rows = characteristic_scan(2, [3, 5])
    assert [p for p, _ in rows] == [3, 5]
    for _, counts in rows:
        assert isinstance(counts, dict)
    with pytest.raises(FieldParseError):
        characteristic_scan(3, [4])


def test_cross_route_consistency_runs_inside_verify():
    # verify_family raises RuntimeError if the betti route and the
    # annihilator route ever disagree; reaching a report is the check
    for n in (1, 2, 3):
        for field in (QQ, PrimeField(2), PrimeField(3)):
            report = verify_family(n, field)
            beta2 = report.betti.column(2)
            for j, count in beta2.items():
                if j - 2 <= n:
                    assert report.min_gen_degrees.get(j - 2, 0) == count


def test_family_name_constant():
    assert FAMILY_NAME == "peeva"

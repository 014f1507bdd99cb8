import json
from fractions import Fraction

import numpy as np
import pytest

from gchyper import linalg as la
from gchyper.gcs import Bivector, TwoForm, from_symplectic, standard_symplectic
from gchyper.lie import parse_structure_equations
from gchyper.serialize import (FormatError, bivector_from_json, bivector_to_json, dumps,
                               lie_algebra_from_json, lie_algebra_to_json, mixed_form_from_json,
                               mixed_form_to_json, scalar_in, scalar_out, structure_from_json,
                               structure_to_json, two_form_from_json, two_form_to_json)
from gchyper.spinor import exp_i_omega
from randgen import random_structure


def through_text(obj):
    return json.loads(dumps(obj))


def test_scalars():
    assert scalar_out(Fraction(-3, 4)) == "-3/4"
    assert scalar_out(2) == "2"
    assert scalar_out(0.25) == 0.25
    assert scalar_in("-3/4") == Fraction(-3, 4)
    assert scalar_in(0.5, "exact") == Fraction(1, 2)
    assert scalar_in("1/3", "float") == pytest.approx(1 / 3)
    assert isinstance(scalar_in(0.1), float)
    for bad in ("x", True, [1], "1/0"):
        with pytest.raises(FormatError):
            scalar_in(bad)
    with pytest.raises(FormatError):
        scalar_out(la.IMAG)


def test_structure_round_trip():
    s = random_structure(np.random.default_rng(5), 4)
    back = structure_from_json(through_text(structure_to_json(s)))
    assert back == s
    fl = structure_from_json(through_text(structure_to_json(s)), mode="float")
    assert not fl.exact and la.equal(fl.mat, la.floating(s.mat))


def test_forms_round_trip():
    b = TwoForm.from_terms(3, {(0, 2): Fraction(1, 3), (1, 2): -2})
    assert la.equal(two_form_from_json(through_text(two_form_to_json(b))).mat, b.mat)
    beta = Bivector(b.mat)
    assert la.equal(bivector_from_json(through_text(bivector_to_json(beta))).mat, beta.mat)
    rho = exp_i_omega(standard_symplectic(4))
    obj = through_text(mixed_form_to_json(rho))
    assert obj["terms"][0] == {"subset": [], "re": "1", "im": "0"}
    assert mixed_form_from_json(obj).coeffs.tolist() == rho.coeffs.tolist()


def test_mixed_form_index_base():
    obj = {"dim_v": 2, "index_base": 0, "terms": [{"subset": [1, 0], "re": 1}]}
    rho = mixed_form_from_json(obj)
    assert dict(rho.terms()) == {(0, 1): -1}


def test_lie_algebra_round_trip_and_equations():
    g = parse_structure_equations("d e3 = - e1^e2", n=4)
    obj = through_text(lie_algebra_to_json(g))
    assert obj["brackets"] == [{"i": 1, "j": 2, "result": [{"k": 3, "coeff": "1"}]}]
    assert la.equal(lie_algebra_from_json(obj).c, g.c)
    h = lie_algebra_from_json({"dim": 4, "equations": ["d e3 = - e1^e2"]})
    assert la.equal(h.c, g.c)


@pytest.mark.parametrize("obj", [
    {"dim_v": 2, "entries": [0, 1]},
    {"entries": []},
    {"dim_v": 1, "entries": ["a", 0, 0, 0]},
])
def test_bad_matrices(obj):
    with pytest.raises(FormatError):
        structure_from_json(obj)


def test_bad_brackets():
    with pytest.raises(FormatError):
        lie_algebra_from_json({"dim": 2, "brackets": [{"i": 1, "j": 1, "result": [{"k": 2, "coeff": 1}]}]})


def test_dumps_is_deterministic():
    s = from_symplectic(standard_symplectic(2))
    assert dumps(structure_to_json(s)) == dumps(structure_to_json(s))
    assert dumps({"a": 1}).endswith("\n")

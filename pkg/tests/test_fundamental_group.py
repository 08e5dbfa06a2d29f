import itertools
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from langlands_abelian.errors import NotCoprime, ZeroInput
from langlands_abelian.fundamental_group import (
    CharacterOnPi1,
    SL2ZMatrix,
    audit_report,
    characters_with_denominator,
    complete_to_sl2,
    completion_family,
    fixed_variant_character,
    gcd_normal_form,
    langlands_character,
    reachability_search,
    signed_gcd,
    well_definedness_audit,
)

nonzero_pairs = st.tuples(st.integers(-50, 50), st.integers(-50, 50)).filter(lambda kl: kl != (0, 0))


def char(a, b):
    return CharacterOnPi1(Fraction(a), Fraction(b))


class TestNormalForm:
    @pytest.mark.parametrize("kl, expected", [((2, 4), (2, 1, 2)), ((5, 0), (5, 1, 0)), ((1, 1), (1, 1, 1))])
    def test_examples(self, kl, expected):
        assert gcd_normal_form(*kl) == expected

    def test_sign_convention(self):
        assert signed_gcd(0, -3) == -3
        assert signed_gcd(-4, 0) == -4
        assert signed_gcd(-4, 6) == -2
        assert signed_gcd(-4, -6) == 2

    def test_zero(self):
        with pytest.raises(ZeroInput):
            gcd_normal_form(0, 0)

    @given(nonzero_pairs)
    def test_reconstruction(self, kl):
        k, l = kl
        kp, a, b = gcd_normal_form(k, l)
        assert kp > 0 and (kp * a, kp * b) == (k, l) and math.gcd(a, b) == 1


class TestCompletion:
    @pytest.mark.parametrize(
        "ab, rows", [((1, 2), ((1, 2), (0, 1))), ((1, 0), ((1, 0), (0, 1))), ((3, 5), ((3, 5), (1, 2)))]
    )
    def test_examples(self, ab, rows):
        assert complete_to_sl2(*ab).rows() == rows

    @given(nonzero_pairs, st.integers(-20, 20))
    def test_det_one(self, kl, x):
        _, a, b = gcd_normal_form(*kl)
        m = complete_to_sl2(a, b)
        assert m.det == 1 and m.shear(x).det == 1
        assert 0 <= m.a22 < max(abs(b), 1) or b == 0

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            complete_to_sl2(2, 4)

    def test_bad_matrix(self):
        with pytest.raises(ValueError):
            SL2ZMatrix(1, 1, 1, 1)

    def test_family_text(self):
        assert completion_family(3, 5) == "((3, 5), (1 + 3 x, 2 + 5 x)), x in Z"


class TestCharacters:
    def test_examples(self):
        assert langlands_character(2, 4, 0) == char("1/2", 0)
        assert langlands_character(2, 4, 1) == char("1/2", "1/2")
        assert all(langlands_character(1, 1, x).is_trivial() for x in range(-3, 4))

    def test_reduced_mod_one(self):
        c = char("7/3", "-1/4")
        assert (c.value_a, c.value_b) == (Fraction(1, 3), Fraction(3, 4))
        assert c.order() == 12
        assert c.to_json() == {"A": "1/3", "B": "3/4"}

    def test_audit_examples(self):
        assert len(well_definedness_audit(2, 4, [0, 1])) == 2
        assert len(well_definedness_audit(1, 7, range(6))) == 1
        # identity completion: delta = 1, so A -> 1/3 and B -> -x/3 cycles
        assert well_definedness_audit(3, 0, range(3)) == {char("1/3", 0), char("1/3", "2/3"), char("1/3", "1/3")}

    def test_audit_zero(self):
        with pytest.raises(ZeroInput):
            well_definedness_audit(0, 0, [0])

    def test_dichotomy_exhaustive(self):
        for k, l in itertools.product(range(-12, 13), repeat=2):
            if (k, l) == (0, 0):
                continue
            kp = gcd_normal_form(k, l)[0]
            assert (len(well_definedness_audit(k, l, range(kp + 1))) == 1) == (kp == 1)

    def test_report_schema(self):
        rep = json.loads(json.dumps(audit_report(2, 4, [0, 1])))
        assert rep == {
            "k": 2,
            "l": 4,
            "k_prime": 2,
            "characters": [{"A": "1/2", "B": "0/1"}, {"A": "1/2", "B": "1/2"}],
            "well_defined": False,
        }


class TestFixedVariant:
    def test_examples(self):
        assert fixed_variant_character(2, 4) == char("1/2", 0)
        assert fixed_variant_character(1, 0).is_trivial()
        assert fixed_variant_character(0, 0).is_trivial()
        assert fixed_variant_character(3, 3) == char("1/3", "1/3")

    @given(nonzero_pairs, st.integers(-30, 30))
    def test_completion_independent(self, kl, x):
        _, a, b = gcd_normal_form(*kl)
        m = complete_to_sl2(a, b).shear(x)
        assert fixed_variant_character(*kl, m) == fixed_variant_character(*kl)

    def test_rejects_wrong_completion(self):
        with pytest.raises(ValueError):
            fixed_variant_character(2, 4, SL2ZMatrix(1, 0, 0, 1))

    def test_not_injective(self):
        assert fixed_variant_character(1, 0) == fixed_variant_character(0, 1) == fixed_variant_character(1, 1)

    def test_search_reports_unreached(self):
        rep = reachability_search(40, 6)
        assert len(rep["unreached"]) >= 1
        assert rep["injective_on_box"] is False and rep["trivial_preimages"] > 1

    def test_unreached_targets_lift_outside_box(self):
        # every unreached target has an explicit preimage once the box is large enough
        rep = reachability_search(40, 6)
        for entry in rep["unreached"]:
            a, b = Fraction(entry["A"]), Fraction(entry["B"])
            n = math.lcm(a.denominator, b.denominator)
            ra, rb = int(a * n), int(b * n)
            lift = next(
                (ra + i * n, rb + j * n)
                for i, j in itertools.product(range(n), repeat=2)
                if math.gcd(ra + i * n, rb + j * n) == 1
            )
            k, l = n * lift[0], n * lift[1]
            assert max(abs(k), abs(l)) > 40
            assert fixed_variant_character(k, l) == CharacterOnPi1(a, b)

    def test_target_count(self):
        # sum over d <= 6 of phi(d) distinct fractions in [0, 1): 1+1+2+2+4+2 = 12
        assert len(characters_with_denominator(6)) == 12**2

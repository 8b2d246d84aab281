import json
from fractions import Fraction as F

import pytest

from prymcover import jsonio
from prymcover.binforms import certify_form, integral_point_to_form
from prymcover.covers import beta_tuples, curve_through_betas, reconstruct_h_f
from prymcover.curves import CurvePoint, make_curve
from prymcover.points import CandidateSet
from prymcover.polys import Poly
from prymcover.scalars import sqrt_adjoin
from prymcover.zeta import prym_product_check

E1 = make_curve([F(-1, 3), F(9, 8), F(25, 24)])
E1_P = CurvePoint.affine(1, F(1, 12))
E1_Q = CurvePoint.affine(0, F(5, 8))


class TestRationalStrings:
    def test_integer_omits_denominator(self):
        assert jsonio.rat_to_str(F(7)) == "7"
        assert jsonio.rat_to_str(F(-3)) == "-3"

    def test_fraction_roundtrip(self):
        for s in ("1/12", "-35/48", "0", "101"):
            assert jsonio.rat_to_str(jsonio.str_to_rat(s)) == s

    def test_float_notation_rejected(self):
        for bad in ("1.5", "1e3", " 2", "2 "):
            with pytest.raises(ValueError, match="exact rational"):
                jsonio.str_to_rat(bad)

    def test_garbage_rejected(self):
        with pytest.raises(ValueError):
            jsonio.str_to_rat("seven")


class TestScalars:
    def test_irrational_roundtrip(self):
        s = sqrt_adjoin(2) + 3 * sqrt_adjoin(5) - F(1, 2)
        enc = jsonio.scalar_to_json(s)
        assert set(enc) == {"gens", "coords"}
        assert jsonio.json_to_scalar(enc) == s

    def test_product_monomial_key(self):
        s = sqrt_adjoin(2) * sqrt_adjoin(3)
        enc = jsonio.scalar_to_json(s)
        assert enc["gens"] == [2, 3]
        assert enc["coords"] == {"0,1": "1"}

    def test_rational_mqelem_collapses_to_string(self):
        s = sqrt_adjoin(2) * sqrt_adjoin(2)
        assert jsonio.scalar_to_json(s) == "2"

    def test_index_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            jsonio.json_to_scalar({"gens": [2], "coords": {"1": "1"}})


class TestCurveAndPoint:
    def test_curve_roundtrip(self):
        enc = jsonio.curve_to_json(E1)
        assert enc == {"lead": "1", "roots": ["-1/3", "9/8", "25/24"]}
        assert jsonio.json_to_curve(enc) == E1

    def test_twist_flag_preserved(self):
        c = make_curve([0, 1, 2, 3], lead=2, twist_unknown=True)
        assert jsonio.json_to_curve(jsonio.curve_to_json(c)) == c

    def test_point_roundtrip(self):
        enc = jsonio.point_to_json(E1_P)
        assert enc == {"x": "1", "y": "1/12"}
        assert jsonio.json_to_point(enc) == E1_P
        inf = jsonio.point_to_json(CurvePoint.infinity())
        assert inf == {"infinity": True}
        assert jsonio.json_to_point(inf).at_infinity

    def test_singular_curve_rejected(self):
        with pytest.raises(ValueError, match="repeated root"):
            jsonio.json_to_curve({"lead": "1", "roots": ["0", "0", "1"]})


class TestCoverCertificate:
    def test_roundtrip(self):
        cert = reconstruct_h_f(beta_tuples(E1, E1_P, E1_Q)[0])
        enc = jsonio.cover_certificate_to_json(cert)
        assert set(enc) == {"beta", "h", "F", "P", "Q"}
        back = jsonio.json_to_cover_certificate(enc, E1)
        assert back.h == cert.h
        assert back.big_f == cert.big_f
        assert back.beta.betas == cert.beta.betas


class TestPrymReport:
    def test_report_shape(self):
        cert = reconstruct_h_f(beta_tuples(E1, E1_P, E1_Q)[0])
        rep = prym_product_check(cert, 13)
        enc = jsonio.prym_report_to_json(rep)
        assert enc["p"] == 13
        assert set(enc["counts"]) == {"C", "Ctilde", "X_twist1", "X_twistns"}
        assert set(enc["orders"]) == {"C", "Ctilde", "X_twist1", "X_twistns"}
        assert enc["matched_twist"] in ("1", "ns")
        assert len(enc["counts"]["Ctilde"]) == 2 * len(enc["counts"]["C"])


class TestFormCertificate:
    def test_roundtrip_with_entries(self):
        betas = [F(6), F(3, 4), F(4, 3), F(9, 2), F(8)]
        prod = F(1)
        for b in betas:
            prod *= 1 - b * b
        curve, p_pt, q_pt = curve_through_betas(betas, x_p=F(1, 49) ** 2 * prod)
        cert = integral_point_to_form(curve, p_pt, q_pt, ())
        enc = jsonio.form_certificate_to_json(cert)
        assert [e["p"] for e in enc["entries"]] == [7]
        back = jsonio.json_to_form_certificate(enc)
        assert back == cert
        # the reloaded form re-certifies to the same entries
        again = certify_form(back.form, back.s_primes)
        assert again.entries == cert.entries

    def test_form_degree_mismatch_rejected(self):
        enc = {"degree": 3, "lambda": "1", "factors": [["1", "1"], ["1", "2"]]}
        with pytest.raises(ValueError, match="degree"):
            jsonio.json_to_form(enc)


class TestCandidatesAndPoints:
    def test_candidate_set_roundtrip(self):
        cs = CandidateSet(1, (make_curve([0, 1, 2, 3], twist_unknown=True),))
        enc = jsonio.candidate_set_to_json(cs)
        assert jsonio.json_to_candidate_set(enc) == cs

    def test_points_payload(self):
        pts = [
            (CurvePoint.affine(1, F(1, 144)), "candidate 0"),
            (CurvePoint.infinity(), "exceptional set"),
        ]
        enc = jsonio.points_to_json(pts)
        assert enc["points"] == [{"x": "1", "y": "1/144"}, {"infinity": True}]
        assert enc["provenance"][1]["via"] == "exceptional set"


class TestDumps:
    def test_sorted_keys_and_trailing_newline(self):
        text = jsonio.dumps({"b": 1, "a": [F(1)].__len__()})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        json.loads(text)

    def test_poly_roundtrip(self):
        f = Poly([F(1, 2), F(0), F(-3)])
        assert jsonio.json_to_poly(jsonio.poly_to_json(f)) == f

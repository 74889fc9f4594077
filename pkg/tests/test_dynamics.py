import random
from fractions import Fraction
from math import log

import pytest

from pcfram.dynamics import (
    Divisor,
    ProjPoint,
    critical_wronskian,
    evaluate,
    forward_image,
    height_bound,
    is_exceptional,
    iterate_forms,
    iterate_map,
    normalize_map,
    orbit,
    parse_map,
    pcf_check,
    reduction_bad_primes,
)
from pcfram.errors import BudgetExceeded, DegenerateMap, DegreeTooSmall, InvalidInput
from pcfram.exactmath import UniPoly, factor_integer, form_resultant

P = UniPoly.parse
pt = ProjPoint.parse


def test_normalize_removes_content_and_common_factor():
    m = normalize_map([2, 0, 2], [2, 0, 0])
    assert (m.F, m.G, m.d) == (P("x^2+1"), P("1"), 2)
    m = normalize_map([0, 0, 1, 0], [1, 0, 0, 0])  # x^2 y : y^3
    assert (m.F, m.G, m.d) == (P("x^2"), P("1"), 2)


def test_normalize_errors():
    with pytest.raises(DegenerateMap):
        normalize_map([0, 0, 1], [0, 0, 1])
    with pytest.raises(DegreeTooSmall):
        normalize_map([0, 1, 1], [0, 0, 1])  # x^2+xy : x^2 reduces to degree 1
    with pytest.raises(InvalidInput):
        normalize_map([1, 0], [0, 1])


def test_sign_normalization():
    m = parse_map("[-x^2-y^2 : y^2]")
    assert m.F.lc > 0 and m.G == P("-1")


def test_parse_map_syntaxes():
    assert str(parse_map("z^2+1")) == "[x^2 + y^2 : y^2]"
    assert str(parse_map("[x^2+y^2 : y^2]")) == "[x^2 + y^2 : y^2]"
    assert str(parse_map("(z^2-1)/(z+3)")) == "[x^2 - y^2 : x*y + 3*y^2]"
    with pytest.raises(InvalidInput):
        parse_map("z^2 +* 1")


def test_iterate_forms_examples():
    assert iterate_forms(parse_map("z^2+1"), 2) == (P("(x^2+1)^2+1"), P("1"))
    assert iterate_forms(parse_map("z^2"), 3) == (P("x^8"), P("1"))
    assert iterate_forms(parse_map("z^2-2"), 2) == (P("(x^2-2)^2-2"), P("1"))


def test_iterate_forms_budget():
    with pytest.raises(BudgetExceeded) as exc:
        iterate_forms(parse_map("z^2+1"), 5, degree_budget=16)
    assert exc.value.details["limiting_n"] == 5


def test_iterate_map_examples():
    assert iterate_map(parse_map("z^2"), 2).univariate_str() == "z^4"
    m = iterate_map(parse_map("z^2-2"), 2)
    assert m.univariate_str() == "z^4-4*z^2+2"
    phi = parse_map("z^2-2")
    for a in [0, 1, 3, Fraction(1, 2), Fraction(-7, 3)]:
        P0 = ProjPoint.from_value(a)
        assert evaluate(m, P0) == evaluate(phi, evaluate(phi, P0))
    assert iterate_map(phi, 1) == phi


def test_evaluate_examples():
    phi = parse_map("z^2+1")
    assert [str(q) for q in orbit(phi, pt("0"), 3)] == ["1", "2", "5"]
    assert evaluate(parse_map("z^2"), pt("inf")) == ProjPoint.infinity()
    assert str(evaluate(parse_map("z^2-2"), pt("0"))) == "-2"
    assert str(evaluate(parse_map("1/z^2"), pt("0"))) == "inf"


def _random_map(rng, d):
    while True:
        F = [rng.randint(-3, 3) for _ in range(d + 1)]
        G = [rng.randint(-3, 3) for _ in range(d + 1)]
        try:
            m = normalize_map(F, G)
        except (DegenerateMap, DegreeTooSmall):
            continue
        if m.d == d:
            return m


def test_iterate_map_commutes_with_evaluation():
    rng = random.Random(4)
    for _ in range(50):
        phi = _random_map(rng, rng.randint(2, 3))
        k = rng.randint(1, 3)
        Q = ProjPoint(rng.randint(-5, 5), rng.randint(0, 4) or 1)
        want = Q
        for _ in range(k):
            want = evaluate(phi, want)
        assert evaluate(iterate_map(phi, k), Q) == want


def test_resultant_support_of_iterates():
    suite = ["z^2", "z^2-1", "z^2+1", "(z^2-1)/(z+3)", "(2*z^2+1)/(3*z)", "[x^3 - y^3 : 2*x*y^2]"]
    for text in suite:
        phi = parse_map(text)
        base = set(factor_integer(phi.resultant()).primes) if abs(phi.resultant()) > 1 else set()
        for n in range(1, 5):
            if phi.d**n > 256:
                break
            Fn, Gn = iterate_forms(phi, n)
            R = form_resultant(Fn, Gn, phi.d**n)
            assert R != 0
            if abs(R) > 1:
                assert set(factor_integer(R).primes) <= base


def test_wronskian_examples():
    W = critical_wronskian(parse_map("z^2"))
    assert str(W) == "4*x*y"
    assert critical_wronskian(parse_map("z^2+1")).form == P("4*x")
    W = critical_wronskian(parse_map("z*(z-3)"))
    assert W.form == P("4*x-6") and W.content == 2


def test_wronskian_degree_and_multiplicity():
    rng = random.Random(9)
    for _ in range(40):
        phi = _random_map(rng, rng.randint(2, 4))
        W = critical_wronskian(phi)
        assert W.degree == 2 * phi.d - 2
        assert W.total_multiplicity == 2 * phi.d - 2


def test_reduction_bad_primes_examples():
    b = reduction_bad_primes(parse_map("z^2"))
    assert b.bad_reduction == () and b.inseparable_reduction == (2,)
    b = reduction_bad_primes(parse_map("z^2+1"))
    assert b.resultant == 1 and b.inseparable_reduction == (2,)
    b = reduction_bad_primes(parse_map("z*(z-3)"))
    assert b.bad_reduction == () and b.inseparable_reduction == (2,)
    b = reduction_bad_primes(parse_map("(z^2-1)/(z+3)"))
    assert b.resultant == 8 and b.bad_reduction == (2,)


def test_forward_image_examples():
    assert forward_image(parse_map("z^2"), Divisor.of(P("x-2"))) == Divisor.of(P("x-4"))
    assert forward_image(parse_map("z^2+1"), Divisor.of(P("x"))) == Divisor.of(P("x-1"))
    assert forward_image(parse_map("z^2-2"), Divisor.of(P("x^2-2"))) == Divisor.of(P("x"))
    # 1/z sends 0 to infinity and infinity to 0
    img = forward_image(parse_map("1/z^2"), Divisor.of(P("x"), True))
    assert img == Divisor.of(P("x"), True)


def test_forward_image_matches_pointwise_images():
    rng = random.Random(2)
    for _ in range(30):
        phi = _random_map(rng, 2)
        pts = {ProjPoint(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3)}
        D = Divisor.of_points(list(pts))
        assert forward_image(phi, D) == Divisor.of_points([evaluate(phi, q) for q in pts])


def test_pcf_examples():
    v = pcf_check(parse_map("z^2"))
    assert v.status == "PCF" and v.level == 1 and v.divisor == Divisor.of(P("x"), True)
    v = pcf_check(parse_map("z^2-2"))
    assert v.status == "PCF" and v.divisor == Divisor.of(P("(x-2)*(x+2)"), True)
    v = pcf_check(parse_map("z^2+1"))
    assert v.status == "NonPCF" and v.witness == P("x-26")
    assert v.witness_height > v.bound


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_power_maps_pcf(d):
    assert pcf_check(parse_map(f"z^{d}")).status == "PCF"


@pytest.mark.parametrize("c,status", [(0, "PCF"), (-1, "PCF"), (-2, "PCF"), (1, "NonPCF"), (2, "NonPCF"), (3, "NonPCF")])
def test_quadratic_family(c, status):
    assert pcf_check(parse_map(f"z^2+({c})")).status == status


def test_pcf_closure_certificate():
    for text in ["z^2", "z^2-1", "z^2-2", "(z^2-1)/(z^2+1)"]:
        phi = parse_map(text)
        v = pcf_check(phi)
        if v.status != "PCF":
            continue
        assert v.divisor.contains(forward_image(phi, v.divisor))
        assert v.divisor.contains(forward_image(phi, critical_wronskian(phi).critical_divisor()))


def test_pcf_undetermined_on_small_budget():
    v = pcf_check(parse_map("z^2+1"), level_budget=2)
    assert v.status == "Undetermined"


def _height(q: ProjPoint) -> float:
    return log(max(abs(q.a), abs(q.b)))


def test_preperiodic_points_respect_height_bound():
    maps = ["z^2", "z^2-1", "z^2-2", "z^2+1", "z^2-3/4", "(z^2-1)/(z^2+1)", "z^3-3*z"]
    pts = {ProjPoint(a, b) for b in range(1, 21) for a in range(-20, 21) if max(abs(a), b) <= 20}
    for text in maps:
        phi = parse_map(text)
        B = height_bound(phi).bound
        for q in pts:
            seen = {q}
            r = q
            for _ in range(50):
                r = evaluate(phi, r)
                if max(abs(r.a), r.b).bit_length() > 256:
                    break  # escaping orbit, no cycle within reach
                if r in seen:
                    assert _height(q) <= B
                    break
                seen.add(r)


def test_cofactor_identity_holds():
    from pcfram.dynamics import cofactor_height

    for text in ["z^2+1", "(z^2-1)/(z+3)", "[x^3 - 2*y^3 : x*y^2 + y^3]"]:
        phi = parse_map(text)
        assert cofactor_height(phi) >= 1


def test_exceptional_examples():
    assert is_exceptional(parse_map("z^2"), pt("0")).exceptional
    assert is_exceptional(parse_map("z^2+1"), pt("inf")).exceptional
    assert is_exceptional(parse_map("z^3-3*z"), pt("inf")).exceptional
    assert not is_exceptional(parse_map("z^2+1"), pt("0")).exceptional
    # 1 has the single preimage 0, whose single preimage is infinity, yet 1 is not exceptional
    assert not is_exceptional(parse_map("1/(z^2+1)"), pt("1")).exceptional
    assert is_exceptional(parse_map("1/z^2"), pt("0")).exceptional


def test_point_parsing():
    assert pt("-6/4") == ProjPoint(-3, 2)
    assert str(pt("inf")) == "inf" and pt("INF").is_infinity
    with pytest.raises(InvalidInput):
        pt("1/0")

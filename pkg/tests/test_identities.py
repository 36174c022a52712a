from fractions import Fraction as F

import pytest

from eulerkit.algebra import AlphaPoly, XPoly
from eulerkit.engine import euler_poly, genocchi_poly
from eulerkit.identities import (
    EQ_R3_CANDIDATES,
    Grid,
    IdentityId,
    IdentityParams,
    ParameterError,
    ProbeId,
    Status,
    factor_candidate,
    grid_verify,
    identity_sides,
    residual_probe,
    telescope_q,
    theorem1_lhs,
    theorem1_rhs,
    theorem1_rhs_expanded,
    verify_identity,
)
from oracles import classical_euler_polys

x = XPoly.x()
a = XPoly.alpha()
P = IdentityParams


def test_params_validation():
    with pytest.raises(ParameterError):
        P(n=-1)
    with pytest.raises(ParameterError):
        P(lam=AlphaPoly([0, 0, 1]))
    assert P(lam="a").lam == AlphaPoly([0, 1])
    assert P(lam=F(1, 2)).lam == AlphaPoly([F(1, 2)])


def test_theorem1_examples(table):
    assert theorem1_lhs(P(s=1), table) == 2
    assert theorem1_rhs(P(s=1), table) == 2
    assert theorem1_lhs(P(), table).is_zero()
    assert theorem1_rhs(P(n=3, l=2, r=1, lam=1), table).is_zero()
    assert theorem1_rhs(P(l=1, s=1), table) == 2 * x - (a - 1)
    assert theorem1_rhs_expanded(P(s=1), table) == 2
    assert theorem1_rhs_expanded(P(n=2, l=1, r=1), table).is_zero()


def test_theorem1_small_point_by_hand(table):
    # n=1, l=r=s=0, lam=1: E_0(x) + E_1(x) + E_1(a-1-x) collapses to zero
    e0, e1 = euler_poly(0, table), euler_poly(1, table)
    by_hand = e0 + e1 + e1.compose(a - 1 - x)
    assert by_hand.is_zero()
    assert theorem1_lhs(P(n=1, lam=1), table) == by_hand


def test_eq14_matches_rhs_at_spec_point(table):
    p = P(n=1, r=1, s=2, lam=F(1, 2))
    assert theorem1_rhs_expanded(p, table) == theorem1_rhs(p, table)
    assert not theorem1_rhs(p, table).is_zero()


def test_theorem1_depth_error():
    from eulerkit.engine import TableDepthError, build_euler_table

    with pytest.raises(TableDepthError):
        theorem1_lhs(P(n=3, l=3, r=2), build_euler_table(5))


def test_verify_thm1_trivial_point(table):
    rep = verify_identity(IdentityId.THM1, P(s=1), table)
    assert rep.status is Status.HOLDS and rep.residual.is_zero()


def test_cor3_spot_value(table):
    lhs, rhs = identity_sides(IdentityId.COR3, P(n=1, r=0), table)
    assert lhs == -1 and rhs == -1


def test_cor6_spot_value(table):
    g1, g2 = genocchi_poly(1, table), genocchi_poly(2, table)
    assert g1 + g2 + g1.compose(-x) + g2.compose(-x) == 0
    assert verify_identity(IdentityId.COR6, P(n=1, l=1), table).status is Status.HOLDS


@pytest.mark.parametrize("ident,params", [
    (IdentityId.COR3, P(n=1, r=1)),
    (IdentityId.COR5, P(n=0, r=3)),
    (IdentityId.COR6, P(n=0, l=2)),
    (IdentityId.PROP_DERIV, P(n=0)),
    (IdentityId.HU_KIM, P(n=2, extra={"m": 1, "q": 1, "k": 2})),
    (IdentityId.COR0_R6, P(n=0, extra={"m": 1, "q": 0, "k": 1})),
    (IdentityId.COR0_R6, P(n=1)),
])
def test_constraint_violations_are_usage_errors(table, ident, params):
    with pytest.raises(ParameterError):
        verify_identity(ident, params, table)


def test_every_identity_holds_on_a_small_grid(table):
    res = grid_verify(list(IdentityId), Grid.uniform(2, ("0", "1/2", "a")), table, skip_invalid=True)
    assert res.reports and res.all_hold


def test_thm1_grid_count(table):
    res = grid_verify([IdentityId.THM1], Grid.uniform(3, ("0", "1")), table)
    assert len(res.reports) == 512
    assert res.summary() == {"THM1": {"holds": 512, "fails": 0, "usage_error": 0}}


def test_empty_grid(table):
    empty = Grid(range(0), range(0), range(0), range(0), (), range(0), range(0), range(0))
    res = grid_verify([IdentityId.THM1], empty, table)
    assert res.reports == [] and res.totals() == {"holds": 0, "fails": 0, "usage_error": 0}
    assert grid_verify([], Grid.uniform(2), table).reports == []


def test_grid_reports_usage_errors_in_stream(table):
    res = grid_verify([IdentityId.COR3], Grid.uniform(3), table)
    statuses = {(r.params.n, r.params.r): r.status for r in res.reports}
    assert statuses[(1, 1)] is Status.USAGE_ERROR
    assert statuses[(1, 2)] is Status.HOLDS
    assert len(res.reports) == 16
    skipped = grid_verify([IdentityId.COR3], Grid.uniform(3), table, skip_invalid=True)
    assert len(skipped.reports) == 8 and skipped.all_hold


def test_grid_order_is_lexicographic(table):
    res = grid_verify([IdentityId.THM1, IdentityId.COR2], Grid.uniform(1, ("0", "a")), table)
    keys = [(r.identity.name != "THM1", r.params.n, r.params.l, r.params.r, r.params.s,
             str(r.params.lam) != "0") for r in res.reports]
    assert keys == sorted(keys)


def test_parallel_grid_matches_sequential(table):
    ids = [IdentityId.THM1, IdentityId.COR3, IdentityId.QK_TELESCOPE]
    g = Grid.uniform(2, ("1", "a"))
    seq = grid_verify(ids, g, table)
    par = grid_verify(ids, g, table, jobs=2)
    assert [(r.identity, r.params, r.status) for r in seq.reports] == \
           [(r.identity, r.params, r.status) for r in par.reports]


def test_report_serialization(table):
    rep = verify_identity(IdentityId.THM1, P(n=1, s=2, lam="a"), table)
    d = rep.to_dict()
    assert d["identity"] == "THM1" and d["status"] == "holds" and d["residual"] == "0"
    assert d["params"] == {"n": 1, "l": 0, "r": 0, "s": 2, "lambda": "a", "extra": {}}
    assert isinstance(d["elapsed_ms"], int)


def test_wrong_constant_leaves_exact_residual(table):
    # factor off by 2 leaves exactly -2 times the structural term
    from eulerkit.identities import eq_r3_structure

    p = P(n=1, l=1)
    wrong = residual_probe(ProbeId.EQ_R3, p, table).residuals["2(n+l+3)"]
    assert wrong == eq_r3_structure(p, table) * -2


# ---------------------------------------------------------- telescoping

@pytest.mark.parametrize("lam", [0, F(1, 2), AlphaPoly([0, 1])])
def test_telescoping_step(lam):
    p = P(n=2, l=1, r=1, s=3, lam=lam)
    for k in range(3):
        assert telescope_q(p, k).compose(x + 1) == -telescope_q(p, k + 1)


def test_telescope_identity_detects_nothing_on_grid(table):
    res = grid_verify([IdentityId.QK_TELESCOPE], Grid.uniform(2), table)
    assert res.all_hold


# ---------------------------------------------------------- specialization

def test_cor1_residual_equals_thm1_at_s0(table):
    for n in range(3):
        for l in range(3):
            for r in range(3):
                p = P(n=n, l=l, r=r, lam="a")
                c = verify_identity(IdentityId.COR1_R4, p, table).residual
                t = verify_identity(IdentityId.THM1, p, table).residual
                assert c == t
                lhs1, rhs1 = identity_sides(IdentityId.COR1_R4, p, table)
                assert lhs1 - rhs1 == theorem1_lhs(p, table)


def test_eq_r5_is_cor1_at_order_one(table):
    for n in range(4):
        for l in range(4):
            for lam in (0, 1, F(-2, 3)):
                p = P(n=n, l=l, lam=lam)
                l5, r5 = identity_sides(IdentityId.EQ_R5, p, table)
                l1, r1 = identity_sides(IdentityId.COR1_R4, p, table)
                s = (-1) ** n
                assert l5 == l1.specialize_alpha(1) * s
                assert r5 == r1.specialize_alpha(1) * s


def test_eq_r2_against_oracle(table):
    E = classical_euler_polys(10)

    def ev(k, y):
        return sum(v * y**p for p, v in E[k].items())

    from math import comb
    for n in range(4):
        for l in range(4):
            for y in (F(0), F(1, 3), F(-2)):
                lhs = (-1) ** n * sum(comb(n, k) * ev(l + k, y) for k in range(n + 1))
                rhs = (-1) ** l * sum(comb(l, k) * ev(n + k, -y) for k in range(l + 1))
                assert lhs == rhs
                L, R = identity_sides(IdentityId.EQ_R2, P(n=n, l=l), table)
                assert L.evaluate(y) == lhs and R.evaluate(y) == rhs


def test_cor4_from_cor2_genocchi_substitution(table):
    # build COR4 directly from genocchi_poly(.)(0) and compare with the registry sides
    from math import comb

    def G(m):
        return genocchi_poly(m, table).evaluate(0).constant_value()

    for n in range(4):
        for l in range(4):
            for r in range(4):
                lhs = (-1) ** l * sum(comb(n + r, k) * (comb(l + k + r, r - 1) if r else 0)
                                      * F(2) ** (n + r - 1 - k) * G(l + k + 1) for k in range(n + r + 1))
                lhs += (-1) ** (n + r) * sum(comb(l + r, k) * (comb(n + k + r, r - 1) if r else 0)
                                             * F(2) ** (l + r - 1 - k) * G(n + k + 1) for k in range(l + r + 1))
                L, R = identity_sides(IdentityId.COR4, P(n=n, l=l, r=r), table)
                assert L == lhs
                # COR4 right side is r times COR2's right side
                assert R == identity_sides(IdentityId.COR2, P(n=n, l=l, r=r), table)[1] * r


def test_cor5_is_r_times_cor3_rhs(table):
    for n in range(4):
        for r in (0, 2, 4):
            assert identity_sides(IdentityId.COR5, P(n=n, r=r), table)[1] == \
                identity_sides(IdentityId.COR3, P(n=n, r=r), table)[1] * r


# ---------------------------------------------------------- probes

def test_eq_r3_probe_finds_unique_factor(table):
    for n in range(5):
        for l in range(5):
            rep = residual_probe(ProbeId.EQ_R3, P(n=n, l=l), table)
            assert rep.matches == ["2(n+l+2)"]
            assert rep.solved_factor == 2 * (n + l + 2)
            assert not rep.residuals["2(n+l+3)"].is_zero()


def test_eq_r3_probe_custom_candidates(table):
    cands = [factor_candidate("double", lambda n, l: 2 * (n + l + 2)),
             factor_candidate("zero", lambda n, l: 0)]
    rep = residual_probe("eq_r3", P(n=1, l=2), table, cands)
    assert rep.matches == ["double"]
    assert len(EQ_R3_CANDIDATES) == 4


def test_cor0_printed_form_fails(table):
    rep = residual_probe(ProbeId.COR0_R6_AS_PRINTED, P(n=2, extra={"m": 1, "q": 1, "k": 0}), table)
    assert "corrected" in rep.matches
    assert not rep.residuals["printed"].is_zero()


def test_cor0_printed_exponent_needs_m_le_n(table):
    rep = residual_probe(ProbeId.COR0_R6_AS_PRINTED, P(n=1, extra={"m": 2, "q": 0, "k": 0}), table)
    assert "printed" in rep.errors and rep.matches == ["corrected"]


def test_cor0_printed_agrees_when_m_equals_n_and_k_zero(table):
    # all-zero point: every variant reduces to E_0(x) - E_0(-x)
    rep = residual_probe(ProbeId.COR0_R6_AS_PRINTED, P(n=0, extra={"m": 0, "q": 0, "k": 0}), table)
    assert rep.residuals["printed"].is_zero()


def test_hu_kim_printed_limit(table):
    bad = residual_probe(ProbeId.HU_KIM_AS_PRINTED, P(n=2, l=0, r=1, extra={"m": 1, "q": 1, "k": 1}), table)
    assert bad.matches == ["corrected"]
    ok = residual_probe(ProbeId.HU_KIM_AS_PRINTED, P(n=2, l=2, r=1, extra={"m": 1, "q": 1, "k": 1}), table)
    assert sorted(ok.matches) == ["corrected", "printed"]


def test_addition_printed_form_fails(table):
    rep = residual_probe(ProbeId.EQ_7_AS_PRINTED, P(n=2), table)
    assert rep.matches == ["corrected"]
    assert not rep.residuals["printed"].is_zero()
    # at n = 0 both forms are the same single term
    assert residual_probe(ProbeId.EQ_7_AS_PRINTED, P(n=0), table).matches == ["printed", "corrected"]


def test_probe_rejects_unknown():
    with pytest.raises(ParameterError):
        ProbeId.parse("bogus")

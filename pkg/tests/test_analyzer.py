"""Strategy cores, escape searches, and uncovered witnesses."""

import random
from fractions import Fraction as F

import pytest

from intervalgames import catalog
from intervalgames.analyzer import (
    EscapeCertificate,
    ExhaustionReport,
    dense_discrete_witness,
    find_escape,
    strategy_core,
    verify_escape,
)
from intervalgames.sets import RSet, closed, is_discrete, parse_rset

AMBIENT = closed(0, 1)


def rs(text: str) -> RSet:
    return parse_rset(text)


def bot_factory(ident: str):
    return lambda: catalog.make_two(ident, AMBIENT)


# --- cores -------------------------------------------------------------------


def test_core_of_first_member_bot_shrinks_to_zero():
    core8 = strategy_core(bot_factory("first-member"), (), 8, AMBIENT)
    assert core8.rset == rs("[0,1/1024]")  # [0, 2^-10]
    core10 = strategy_core(bot_factory("first-member"), (), 10, AMBIENT)
    assert core10.rset == rs("[0,1/4096]")
    assert core10.rset.is_subset(core8.rset)


def test_core_of_empty_bot_is_empty():
    core = strategy_core(bot_factory("empty"), (), 4, AMBIENT)
    assert core.rset.is_empty


def test_core_monotone_in_depth():
    for tau in [(), (2,), (2, 3)]:
        shallow = strategy_core(bot_factory("halving"), tau, 3, AMBIENT)
        deep = strategy_core(bot_factory("halving"), tau, 6, AMBIENT)
        assert deep.rset.is_subset(shallow.rset)
        assert deep.rset.closure() == deep.rset  # closed
        assert deep.rset.is_subset(rs("[0,1]"))


# --- escapes -----------------------------------------------------------------


def test_escape_from_first_member_bot():
    result = find_escape(bot_factory("first-member"), F(1, 2), 4, 6, AMBIENT)
    assert isinstance(result, EscapeCertificate)
    assert len(result.indices) == 4
    assert verify_escape(bot_factory("first-member"), result, AMBIENT)


def test_escape_from_triadic_countable_bot():
    factory = bot_factory("countable:triadic")
    result = find_escape(factory, F(1, 2), 5, 12, AMBIENT)
    assert isinstance(result, EscapeCertificate)
    assert len(result.indices) == 5
    assert verify_escape(factory, result, AMBIENT)


def test_escape_vs_halving_reports_outcome_honestly():
    # no a-priori claim: either a certificate or an exhaustion report,
    # and whichever it is must be internally consistent
    result = find_escape(bot_factory("halving"), F(1, 2), 3, 6, AMBIENT)
    if isinstance(result, EscapeCertificate):
        assert verify_escape(bot_factory("halving"), result, AMBIENT)
    else:
        assert isinstance(result, ExhaustionReport)
        assert 1 <= result.failed_depth <= 3


def test_verify_escape_rejects_tampered_certificate():
    result = find_escape(bot_factory("first-member"), F(1, 2), 3, 6, AMBIENT)
    tampered = EscapeCertificate(
        result.indices, F(1, 1024), result.uncovered_check
    )
    assert not verify_escape(bot_factory("first-member"), tampered, AMBIENT)


# --- uncovered witnesses -------------------------------------------------------


def test_witness_interval_between_closures():
    fam = is_discrete([rs("(0,1/4)"), rs("(1/2,3/4)")])
    w = dense_discrete_witness(fam, AMBIENT)
    assert w.kind == "interval"
    assert str(w.interval) == "(1/4,1/2)"


def test_witness_point_for_dense_single_member():
    fam = is_discrete([rs("(0,1/2);(1/2,1)")])
    w = dense_discrete_witness(fam, AMBIENT)
    assert w.kind == "point" and w.point == F(1, 2)


def test_witness_endpoint_for_open_full_member():
    fam = is_discrete([rs("(0,1)")])
    w = dense_discrete_witness(fam, AMBIENT)
    assert w.kind == "point" and w.point == F(0)


def test_witness_errors_when_nothing_is_missed():
    fam = is_discrete([rs("[0,1]")])
    with pytest.raises(ValueError):
        dense_discrete_witness(fam, AMBIENT)


def test_witness_rational_is_uncovered_for_seeded_families():
    rng = random.Random(2024)
    box = rs("[0,1]")
    for _ in range(50):
        k = rng.randint(2, 5)
        cuts = sorted(rng.sample(range(1, 64), 2 * k))
        members = []
        for i in range(0, 2 * k, 2):
            lo, hi = F(cuts[i], 64), F(cuts[i + 1], 64)
            if lo < hi:
                members.append(RSet.interval(lo, hi))
        fam = is_discrete(members)
        w = dense_discrete_witness(fam, AMBIENT)
        q = w.rational()
        assert box.contains(q)
        assert not fam.union().contains(q)

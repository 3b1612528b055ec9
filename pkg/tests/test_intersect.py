from fractions import Fraction

import pytest

from lambdaset.errors import InvalidInput, OutOfRange
from lambdaset.ifs_core import membership
from lambdaset.intersect import (find_common, intersect_covers,
                                 product_dim_report)
from lambdaset.lambda_set import binary_expansion, cover

F = Fraction


def test_intersect_with_full_interval_clips(cfg):
    base = cover(F(1, 3), 4, cfg)
    for full in (cover(F(1, 3), 1, cfg),     # single interval [1/3, 1/2]
                 cover(F(1, 100), 1, cfg)):  # single interval [1/100, 1/2]
        both = intersect_covers([base, full])
        assert len(both.intervals) == len(base.intervals)
        for got, expect in zip(both.intervals, base.intervals):
            assert got.lo.lo.to_fraction() == expect.lo.lo.to_fraction()
            assert got.hi.hi.to_fraction() == expect.hi.hi.to_fraction()


def test_intersection_contains_half(cfg):
    inter = intersect_covers([cover(F(1, 3), 5, cfg), cover(F(1, 4), 5, cfg),
                              cover(F(2, 5), 5, cfg)])
    assert inter.covers(F(1, 2))


def test_intersection_shrinks(cfg):
    a, b = cover(F(1, 3), 6, cfg), cover(F(1, 4), 6, cfg)
    inter = intersect_covers([a, b])
    assert inter.intervals
    assert inter.total_length() < min(a.total_length(), b.total_length())


def test_intersection_commutative_associative(cfg):
    covers = [cover(F(1, 3), 4, cfg), cover(F(1, 4), 4, cfg),
              cover(F(2, 5), 4, cfg)]

    def outline(ic):
        return [(iv.lo.lo.to_fraction(), iv.hi.hi.to_fraction())
                for iv in ic.intervals]

    ab_c = intersect_covers([intersect_covers(covers[:2]), covers[2]])
    a_bc = intersect_covers([covers[0], intersect_covers(covers[1:])])
    cba = intersect_covers(covers[::-1])
    tol = F(1, 1 << 70)
    for left, right in ((ab_c, a_bc), (ab_c, cba)):
        assert len(outline(left)) == len(outline(right))
        for (l0, l1), (r0, r1) in zip(outline(left), outline(right)):
            assert abs(l0 - r0) <= tol and abs(l1 - r1) <= tol
    with pytest.raises(InvalidInput):
        intersect_covers([])


def test_find_common_single_target(cfg):
    certs = find_common([F(1, 3)], 4, cfg)
    top = [c for c in certs if c.lam_exact == F(1, 2)]
    assert len(top) == 1
    assert top[0].status == "Exact"
    assert top[0].per_target_codings[0] == binary_expansion(F(1, 3))


def test_find_common_pair(cfg):
    certs = find_common([F(1, 3), F(1, 4)], 6, cfg)
    assert [c.sort_key() for c in certs] == sorted(c.sort_key() for c in certs)
    exact = {c.lam_exact for c in certs if c.lam_exact is not None}
    assert F(1, 2) in exact
    assert F(1, 3) in exact               # 1/4 and 1/3 both lie in K_{1/3}
    # replayability of every exact certificate
    for c in certs:
        if c.lam_exact is not None:
            assert all(membership(y, c.lam_exact, 600) is True
                       for y in c.targets)
    # ratio lower bound: never below the largest target
    assert all(c.lam.hi.to_fraction() >= F(1, 3) for c in certs)


def test_find_common_extreme_targets(cfg):
    certs = find_common([F(49, 100), F(1, 100)], 3, cfg)
    assert any(c.lam_exact == F(1, 2) for c in certs)
    assert all(c.lam.hi.to_fraction() >= F(49, 100) for c in certs)


def test_find_common_validation(cfg):
    with pytest.raises(InvalidInput):
        find_common([], 4, cfg)
    with pytest.raises(OutOfRange):
        find_common([F(3, 4)], 4, cfg)


def test_product_dim_report(cfg):
    rep = product_dim_report([F(1, 3)], range(2, 7), cfg)
    assert rep.per_target[0]["newhouse_lower"] > 0.8
    assert rep.per_target[0]["bound_violations"] == 0
    rep2 = product_dim_report([F(1, 3), F(1, 4)], range(2, 4), cfg)
    assert len(rep2.per_target) == 2
    assert rep2.combined_lower == min(r["newhouse_lower"]
                                      for r in rep2.per_target)
    assert "heuristic" in rep2.combination
    with pytest.raises(InvalidInput):
        product_dim_report([], range(2, 3), cfg)

import pytest

from q2bkss import spectral
from q2bkss.connecting import PreconditionError
from q2bkss.homology import ModulePresentation
from q2bkss.spectral import (
    Bidegree,
    collapse_check,
    cross_check,
    d2_candidates,
    e2_direct,
    e2_direct_degree,
    e2_filtration,
    e2_filtration_degree,
    sector_of,
    theorem_table,
    topological_page,
)


@pytest.fixture(scope="module")
def small_pages():
    return e2_direct(-12, 14, 12, certify=False), e2_filtration(-12, 14, 12, certify=False)


def test_sector_and_bidegree():
    assert sector_of(54) == (1, 13)
    assert sector_of(8) == (0, 2)
    assert sector_of(7) is None
    assert Bidegree(1, 5).chart_x == 4


def test_zero_line(small_pages):
    direct, filt = small_pages
    assert direct.get(0, 0).invariants() == (1, ())
    assert direct.get(0, 6).generators == ("β",)
    assert direct.get(0, 6).orders == (1,)
    assert direct.get(0, 4).is_zero()


def test_known_entries(small_pages):
    _, filt = small_pages
    # Z/3^{nu(3m)} plus copies of Z/3 at t = 4m, m = 1
    assert filt.get(1, 4).invariants() == (0, (1,) * 9)
    # t = 0, s = 2: free plus Z/3 summands only
    free, tors = filt.get(2, 0).invariants()
    assert free > 0 and set(tors) == {1}
    # t = 6: Z/3 and Z/9 summands with nu(6m + 3) = 2
    assert set(filt.get(2, 6).torsion_exponents) == {1, 2}


def test_odd_degrees_are_torsion_only(small_pages):
    direct, filt = small_pages
    for t in range(-11, 14, 2):
        assert filt.get(2, t).is_zero()
        assert direct.get(0, t).iso_equal(direct.get(1, t))


def test_direct_equals_filtration(small_pages):
    direct, filt = small_pages
    for b in direct.degrees():
        for s in range(3):
            assert direct.get(s, b).iso_equal(filt.get(s, b)), (s, b)


def test_theorem_examples():
    th = theorem_table(4, 8, 12)
    assert th.get(1, 4).invariants() == (0, (1,) * 9)
    assert set(th.get(2, 8).torsion_exponents) == {1}
    th = theorem_table(54, 54, 12)
    assert th.get(1, 54).meta["placeholders"] == ["U^54"]
    assert th.get(2, 54).relations == ("~",)


def test_cross_check_small():
    cc = cross_check(-16, 16, 12)
    assert cc.ok, [r.__dict__ for r in cc.failures()]
    assert all(r.status == "match" for r in cc.rows)


def test_cross_check_case_five():
    cc = cross_check(54, 54, 12)
    assert cc.ok
    statuses = {r.s: r.status for r in cc.rows}
    assert statuses[1] == "placeholder" and statuses[2] == "placeholder"
    assert 54 in cc.resolved_u


def test_certificate_recorded():
    page = e2_filtration(-4, 4, 8)
    assert page.notes["certificate"]


def test_window_too_small_raises():
    with pytest.raises(PreconditionError):
        spectral.closed_window(1, 13, 3)


def test_single_degree_paths_agree():
    for t in (-6, 0, 2, 6, 14):
        a = e2_direct_degree(t, 10)
        b = e2_filtration_degree(t, 10)
        assert all(x.iso_equal(y) for x, y in zip(a, b))


def test_parallel_matches_serial():
    a = e2_filtration(-8, 8, 8, jobs=1, certify=False)
    b = e2_filtration(-8, 8, 8, jobs=2, certify=False)
    assert a.to_json() == b.to_json()


def test_json_shape(small_pages):
    _, filt = small_pages
    rows = filt.to_json()
    first = rows[0]
    assert set(first) >= {"s", "t", "chartX", "summands", "summary", "provenance"}
    assert first["provenance"] == "filtration"


# -- differentials ---------------------------------------------------------------


def test_no_candidates_in_internal_grading(small_pages):
    _, filt = small_pages
    cands = d2_candidates(filt)
    assert all(c.status == "forced-zero" for c in cands)
    assert collapse_check(filt).ok


def test_topological_candidates(small_pages):
    _, filt = small_pages
    rep = collapse_check(filt, "topological")
    assert rep.ok
    # alpha at stem 3 and b at stem 27 are the only sources
    assert [(c.source, c.target) for c in rep.possibly_nonzero] == [((0, 3), (2, 4)), ((0, 27), (2, 28))]
    top = topological_page(filt)
    assert [top[c.source].generators for c in rep.possibly_nonzero] == [("α",), ("b",)]
    assert rep.rows_above_two_zero and rep.one_line_permanent


def test_topological_regrading(small_pages):
    _, filt = small_pages
    top = topological_page(filt)
    assert top[(0, 3)].generators == ("α",)
    assert top[(0, 10)].generators == ("β",)
    assert top[(0, 0)].invariants() == (1, ())


def test_bad_grading():
    page = e2_filtration(0, 0, 8, certify=False)
    with pytest.raises(ValueError):
        d2_candidates(page, "other")
    assert isinstance(page.get(5, 0), ModulePresentation)

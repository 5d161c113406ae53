import pytest
from hypothesis import given
from hypothesis import strategies as st

from floerfix.surfaces import SurfacePiece, rel_betti, simplicial_oracle, triangulate


@pytest.mark.parametrize(
    "piece, expected",
    [
        (SurfacePiece(0, 1, 1), (0, 0, 1)),
        (SurfacePiece(0, 2, 1), (0, 0, 0)),
        (SurfacePiece(0, 3, 0), (1, 2, 0)),
        (SurfacePiece(1, 1, 0), (1, 2, 0)),
        (SurfacePiece(2, 0, 0), (1, 4, 1)),
        (SurfacePiece(0, 0, 0), (1, 0, 1)),
    ],
)
def test_known_pieces(piece, expected):
    assert rel_betti(piece) == expected
    assert simplicial_oracle(piece) == expected


@pytest.mark.parametrize("g", range(4))
def test_closed_form_matches_triangulation(g):
    for b in range(5):
        for c in range(b + 1):
            s = SurfacePiece(g, b, c)
            assert rel_betti(s) == simplicial_oracle(s), s


def test_punctures_act_like_free_circles():
    assert simplicial_oracle(SurfacePiece(1, 2, 1, punctures=1)) == rel_betti(SurfacePiece(1, 3, 1))


def test_triangulation_is_a_closed_pseudomanifold_away_from_circles():
    tris, circles = triangulate(2, 2)
    edges = {}
    for t in tris:
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            edges[e] = edges.get(e, 0) + 1
    boundary = {e for e, k in edges.items() if k == 1}
    expected = {tuple(sorted((c[i], c[(i + 1) % 3]))) for c in circles for i in range(3)}
    assert boundary == expected
    assert all(k <= 2 for k in edges.values())


def test_rejects_bad_pieces():
    with pytest.raises(ValueError):
        SurfacePiece(0, 1, 2)
    with pytest.raises(ValueError):
        SurfacePiece(-1, 0, 0)
    with pytest.raises(ValueError):
        simplicial_oracle(SurfacePiece(4, 0, 0))
    with pytest.raises(ValueError):
        simplicial_oracle(SurfacePiece(0, 3, 0, punctures=2))


pieces = st.integers(0, 30).flatmap(
    lambda g: st.integers(0, 30).flatmap(
        lambda b: st.builds(SurfacePiece, st.just(g), st.just(b), st.integers(0, b), st.integers(0, 5))
    )
)


@given(pieces)
def test_alternating_sum_is_euler_characteristic(s):
    h0, h1, h2 = rel_betti(s)
    assert min(h0, h1, h2) >= 0
    assert h0 - h1 + h2 == s.euler_characteristic


@given(pieces)
def test_extra_puncture_adds_one_cycle(s):
    # holds while some boundary stays free; with every circle collapsed, the
    # new puncture instead kills the fundamental class and h1 is unchanged
    if s.holes == 0 or s.collapsed_circles == s.holes:
        return
    more = SurfacePiece(s.genus, s.boundary_circles, s.collapsed_circles, s.punctures + 1)
    assert rel_betti(more)[1] == rel_betti(s)[1] + 1

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerocycles.errors import CapExceeded, DegenerateGeometry, NotTransitive
from zerocycles.monodromy import (
    Permutation,
    PermGroup,
    base_labeling,
    compose_in_order,
    critical_data,
    group_elements,
    imprimitivity_blocks,
    is_block_system,
    is_two_transitive,
    loop_permutation,
    monodromy,
    monodromy_generators,
    residue_blocks,
)
from zerocycles.oracle import chebyshev_roots
from zerocycles.polycore import Poly, chebyshev

from conftest import CUBIC_INNER, CUBIC_OUTER, P, SEXTIC, composed

S3 = PermGroup(3, [Permutation((2, 1, 3)), Permutation((2, 3, 1))])
C6 = PermGroup(6, [Permutation.long_cycle(6)])


def test_permutation_basics():
    a = Permutation.from_cycles(4, [(1, 2)])
    b = Permutation.from_cycles(4, [(2, 3)])
    # a first, then b: 1 -> 2 -> 3
    assert a.then(b)(1) == 3
    assert a.then(a).is_identity()
    assert compose_in_order([a, b, a.inverse()]) == a.then(b).then(a.inverse())
    assert Permutation.long_cycle(5).cycles() == [(1, 2, 3, 4, 5)]
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_critical_data_examples():
    cd = critical_data(Poly.monomial(2))
    assert cd.critical_points == (0j,) and cd.critical_values == (0j,)
    cd = critical_data(P(0, -1, 0, 1))
    r = 1 / math.sqrt(3)
    assert np.allclose(sorted(z.real for z in cd.critical_points), [-r, r])
    v = 2 / (3 * math.sqrt(3))
    assert np.allclose(sorted(z.real for z in cd.critical_values), [-v, v])
    cd = critical_data(CUBIC_INNER)
    assert np.allclose(sorted(z.real for z in cd.critical_points), [-4 / 3, 0])
    assert np.allclose(sorted(z.real for z in cd.critical_values), [-1, 5 / 27])


@pytest.mark.parametrize("m", [2, 3, 5, 6, 9])
def test_labeling_of_monomials(m):
    lab = base_labeling(Poly.monomial(m))
    eps = cmath.exp(2j * math.pi / m)
    want = [lab.t0 ** (1 / m) * eps ** k for k in range(m)]
    assert np.allclose(lab.roots, want, atol=1e-12)


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8])
def test_labeling_of_chebyshev(m):
    lab = base_labeling(chebyshev(m))
    assert np.allclose(lab.roots, chebyshev_roots(m, lab.t0), atol=1e-10)


def test_base_point_clear_of_critical_values():
    lab = base_labeling(CUBIC_INNER)
    assert lab.t0 > 2 * max(abs(v) for v in lab.crit.critical_values)


def test_monomial_single_loop():
    md = monodromy(SEXTIC)
    assert md.generators == [Permutation.long_cycle(6)]


def test_cubic_loops_are_transpositions():
    for f in (P(0, -1, 0, 1), CUBIC_INNER):
        md = monodromy(f)
        assert len(md.generators) == 2
        for g in md.generators:
            assert sorted(len(c) for c in g.cycles()) == [2]
        assert compose_in_order(md.generators) == Permutation.long_cycle(3)


@pytest.mark.parametrize("f", [
    SEXTIC, P(0, -1, 0, 1), CUBIC_INNER, composed(CUBIC_OUTER, CUBIC_INNER),
    composed(CUBIC_OUTER, SEXTIC), chebyshev(5), chebyshev(6), P(1, 2, 0, -1, 0, 1),
])
def test_loop_at_infinity_consistency(f):
    md = monodromy(f)
    assert md.infinity_ok
    assert compose_in_order(md.generators) == Permutation.long_cycle(f.degree)


@pytest.mark.parametrize("f", [CUBIC_INNER, composed(CUBIC_OUTER, CUBIC_INNER)])
def test_reversed_loop_gives_inverse(f):
    lab = base_labeling(f)
    md = monodromy(f)
    for v, g in zip(md.values, md.generators):
        assert loop_permutation(f, lab, v, reverse=True) == g.inverse()


def test_group_orders():
    assert monodromy_generators(P(0, -1, 0, 1)).order() == 6
    assert monodromy_generators(composed(CUBIC_OUTER, CUBIC_INNER)).order() == 1296
    assert monodromy_generators(chebyshev(6)).order() == 12
    assert monodromy_generators(chebyshev(5)).order() == 10
    assert PermGroup(3, [Permutation.long_cycle(3)]).order() == 3
    assert S3.order() == 6
    assert len(group_elements(S3)) == 6


def test_element_cap_is_enforced():
    G = monodromy(composed(CUBIC_OUTER, CUBIC_INNER)).group(element_cap=100)
    with pytest.raises(CapExceeded):
        G.order()


def test_two_transitivity():
    assert not is_two_transitive(C6)
    assert is_two_transitive(S3)
    assert is_two_transitive(monodromy_generators(P(0, -1, 0, 1)))
    assert not is_two_transitive(monodromy_generators(chebyshev(5)))


def _two_transitive_brute(G: PermGroup) -> bool:
    m = G.degree
    pairs = {(g[0], g[1]) for g in G.elements()}
    return len(pairs) == m * (m - 1)


@pytest.mark.parametrize("f", [P(0, -1, 0, 1), chebyshev(4), chebyshev(5), SEXTIC,
                               P(1, 0, 3, 0, 1), P(0, 1, 1, 0, 0, 1),
                               composed(CUBIC_OUTER, CUBIC_INNER)])
def test_two_transitivity_agrees_with_closure(f):
    G = monodromy_generators(f)
    assert is_two_transitive(G) == _two_transitive_brute(G)


def test_blocks_of_cyclic_group():
    found = {s.blocks for s in imprimitivity_blocks(C6)}
    assert ((1, 4), (2, 5), (3, 6)) in found
    assert ((1, 3, 5), (2, 4, 6)) in found
    assert len(found) == 2


def test_primitive_group_has_no_blocks():
    assert imprimitivity_blocks(S3) == []


def test_intransitive_group_rejected():
    with pytest.raises(NotTransitive):
        imprimitivity_blocks(PermGroup(4, [Permutation.from_cycles(4, [(1, 2)])]))


def test_blocks_are_residue_classes():
    G = monodromy_generators(composed(CUBIC_OUTER, CUBIC_INNER))
    systems = imprimitivity_blocks(G)
    assert [s.blocks for s in systems] == [residue_blocks(9, 3).blocks]
    assert residue_blocks(9, 3).blocks == ((1, 4, 7), (2, 5, 8), (3, 6, 9))


@pytest.mark.parametrize("f", [composed(CUBIC_OUTER, SEXTIC), chebyshev(6), Poly.monomial(8)])
def test_returned_blocks_are_invariant(f):
    G = monodromy_generators(f)
    for sysm in imprimitivity_blocks(G):
        cells = {frozenset(b) for b in sysm.blocks}
        for g in G.generators:
            for b in sysm.blocks:
                assert frozenset(g(i) for i in b) in cells
        assert is_block_system(G, sysm)


def test_loops_respect_blocks():
    """Loops around inner values move inside one block, outer ones permute whole blocks."""
    for inner in (CUBIC_INNER, SEXTIC):
        f = composed(CUBIC_OUTER, inner)
        md = monodromy(f)
        blocks = residue_blocks(f.degree, inner.degree)
        outer_vals = critical_data(CUBIC_OUTER).critical_values
        cells = {frozenset(b) for b in blocks.blocks}
        for v, g in zip(md.values, md.generators):
            if min(abs(v - a) for a in outer_vals) < 1e-9:
                assert all(frozenset(g(i) for i in b) in cells for b in blocks.blocks)
            else:
                moved = g.support()
                assert any(moved <= set(b) for b in blocks.blocks)


def test_monodromy_json_shape():
    js = monodromy(CUBIC_INNER).to_json()
    assert js["infinity_check"] is True
    assert len(js["generators"]) == 2
    assert all(isinstance(v, str) for v in js["critical_values"])


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=5), st.integers(1, 3))
def test_random_polynomials_multiply_to_long_cycle(low, lead):
    f = Poly(low + [lead])
    try:
        md = monodromy(f)
    except DegenerateGeometry:
        return
    assert compose_in_order(md.generators) == Permutation.long_cycle(f.degree)
    assert PermGroup(f.degree, md.generators).is_transitive()

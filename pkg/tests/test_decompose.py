import random

import pytest

from zerocycles.decompose import (
    CHEBYSHEV,
    MONOMIAL,
    TWO_TRANSITIVE,
    DecompositionChain,
    check_no_merge,
    classify_factor,
    decompose_chain,
    divisor_set,
    enumerate_right_factors,
)
from zerocycles.errors import InputError
from zerocycles.monodromy import imprimitivity_blocks, monodromy_generators
from zerocycles.polycore import Poly, chebyshev, compose_all, poly_compose

from conftest import CUBIC_INNER, CUBIC_OUTER, P, SEXTIC, composed
from strategies import random_chain


def test_monomial_alone():
    ch = decompose_chain(SEXTIC)
    assert ch.degrees == [6] and ch.tags == [MONOMIAL]
    assert ch.hypothesis_ok


def test_two_transitive_pair():
    ch = decompose_chain(composed(CUBIC_OUTER, CUBIC_INNER))
    assert ch.degrees == [3, 3]
    assert ch.tags == [TWO_TRANSITIVE, TWO_TRANSITIVE]
    assert ch.hypothesis_ok
    assert compose_all(ch.factors) == ch.composed


def test_cubic_over_monomial():
    ch = decompose_chain(composed(CUBIC_OUTER, SEXTIC))
    assert ch.degrees == [3, 6]
    assert ch.tags == [TWO_TRANSITIVE, MONOMIAL]
    assert ch.factors[1] == SEXTIC


def test_chebyshev_composites_fuse():
    ch = decompose_chain(chebyshev(6))
    assert ch.degrees == [6] and ch.tags == [CHEBYSHEV]
    ch = decompose_chain(Poly.monomial(12))
    assert ch.degrees == [12] and ch.tags == [MONOMIAL]


def test_classify_factor():
    p = poly_compose(P(-5, 2), poly_compose(Poly.monomial(3), P(1, 1)))   # 2(z+1)^3 - 5
    c = classify_factor(p)
    assert c.tag == MONOMIAL and c.core_degree == 3
    assert poly_compose(c.mu, poly_compose(c.core(), c.nu)) == p
    c = classify_factor(chebyshev(4))
    assert c.tag == CHEBYSHEV and c.core_degree == 4
    assert classify_factor(CUBIC_OUTER).tag == TWO_TRANSITIVE
    with pytest.raises(InputError):
        classify_factor(P(1, 2))


def test_linear_conjugate_of_chebyshev():
    p = poly_compose(P(3, -2), poly_compose(chebyshev(5), P(1, 2)))
    c = classify_factor(p)
    assert c.tag == CHEBYSHEV and c.core_degree == 5
    assert poly_compose(c.mu, poly_compose(c.core(), c.nu)) == p


def test_no_merge_examples():
    assert check_no_merge(CUBIC_OUTER, CUBIC_INNER).ok
    w = check_no_merge(Poly.monomial(2), Poly.monomial(3))
    assert not w.ok
    w = check_no_merge(P(-2, 0, 1), Poly.monomial(2))
    assert not w.ok and w.condition == 1
    assert w.to_json()["failed_condition"] == 1


def test_no_merge_injectivity_condition():
    # h = z^3 - 3z has critical values +-2, and w^2 identifies them
    w = check_no_merge(P(1, 0, 1), P(0, -3, 0, 1))
    assert not w.ok and w.condition == 2


def test_merged_chain_flagged():
    ch = DecompositionChain.from_factors([P(-2, 0, 1), Poly.monomial(2)], fuse=False)
    assert not ch.hypothesis_ok


def test_right_factors_of_monomial():
    ch = decompose_chain(SEXTIC)
    assert [r.degree for r in enumerate_right_factors(ch)] == [2, 3]
    assert [r.degree for r in enumerate_right_factors(ch, include_whole=True)] == [2, 3, 6]
    assert divisor_set(ch) == {1, 2, 3, 6}


def test_right_factors_of_pair():
    ch = decompose_chain(composed(CUBIC_OUTER, CUBIC_INNER))
    rfs = enumerate_right_factors(ch)
    assert len(rfs) == 1 and rfs[0].degree == 3
    assert poly_compose(rfs[0].outer, rfs[0].inner) == ch.composed


def test_right_factors_of_cubic_over_monomial():
    ch = decompose_chain(composed(CUBIC_OUTER, SEXTIC))
    rfs = enumerate_right_factors(ch)
    assert [r.degree for r in rfs] == [2, 3, 6]
    assert [r.inner for r in rfs] == [Poly.monomial(2), Poly.monomial(3), SEXTIC]


@pytest.mark.parametrize("f", [composed(CUBIC_OUTER, CUBIC_INNER), composed(CUBIC_OUTER, SEXTIC),
                               Poly.monomial(6), chebyshev(6)])
def test_blocks_match_right_factors(f):
    ch = decompose_chain(f)
    sizes = sorted(r.degree for r in enumerate_right_factors(ch))
    blocks = sorted(s.block_size for s in imprimitivity_blocks(monodromy_generators(f)))
    assert sizes == blocks


def test_chain_json():
    js = decompose_chain(composed(CUBIC_OUTER, CUBIC_INNER)).to_json()
    assert js["hypothesis_ok"] is True
    assert [f["class"] for f in js["factors"]] == [TWO_TRANSITIVE, TWO_TRANSITIVE]
    assert set(js["factors"][0]) == {"coeffs", "class", "core_degree", "pre_linear", "post_linear"}


def test_user_factors_are_kept():
    ch = DecompositionChain.from_factors([CUBIC_OUTER, CUBIC_INNER], normalize=False)
    assert ch.factors == [CUBIC_OUTER, CUBIC_INNER]


@pytest.mark.parametrize("seed", range(6))
def test_random_compositions_recovered(seed):
    factors, built, f = random_chain(random.Random(seed))
    ch = decompose_chain(f)
    assert ch.degrees == built.degrees
    assert ch.tags == built.tags
    assert ch.hypothesis_ok
    assert compose_all(ch.factors) == f

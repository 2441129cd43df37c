"""Random inputs shared by the property and acceptance tests."""

import random

from zerocycles.decompose import CHEBYSHEV, MONOMIAL, TWO_TRANSITIVE, DecompositionChain
from zerocycles.polycore import Poly, chebyshev, compose_all, poly_compose


def random_linear(rng: random.Random) -> Poly:
    return Poly([rng.randint(-2, 2), rng.choice([-2, -1, 1, 2])])


def random_factor(rng: random.Random, degree: int, kind: str) -> Poly:
    if kind == MONOMIAL:
        core = Poly.monomial(degree)
    elif kind == CHEBYSHEV:
        core = chebyshev(degree)
    else:
        while True:
            core = Poly([rng.randint(-3, 3) for _ in range(degree)] + [rng.choice([1, 2, -1])])
            if core.degree == degree:
                break
    return poly_compose(random_linear(rng), poly_compose(core, random_linear(rng)))


def random_chain(rng: random.Random, max_degree: int = 24, count: int | None = None):
    """Factors (outermost first) with their intended classes, composed degree <= max_degree.

    Only returns constructions whose adjacent splits do not merge and that are
    already in fused form: quadratic o quadratic is a conjugate of T_4 and is
    canonically a single Chebyshev factor, so such windows are skipped.
    """
    options = [(2, MONOMIAL), (3, MONOMIAL), (4, MONOMIAL), (3, TWO_TRANSITIVE),
               (4, TWO_TRANSITIVE), (5, TWO_TRANSITIVE), (4, CHEBYSHEV), (5, CHEBYSHEV)]
    while True:
        n = count or rng.choice([2, 3])
        picks = [rng.choice(options) for _ in range(n)]
        deg = 1
        for d, _ in picks:
            deg *= d
        if deg > max_degree:
            continue
        factors = [random_factor(rng, d, k) for d, k in picks]
        chain = DecompositionChain.from_factors(factors, fuse=False, normalize=False)
        if chain.tags != [k for _, k in picks] or not chain.hypothesis_ok:
            continue
        if DecompositionChain.from_factors(factors, normalize=False).degrees != chain.degrees:
            continue
        return factors, chain, compose_all(factors)

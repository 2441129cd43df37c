"""Vanishing 0-dimensional abelian integrals: decomposition, monodromy and solution spaces."""

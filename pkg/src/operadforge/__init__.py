"""Exact combinatorics of manifold operads and bimodule cobordisms.

Modules: ``treekit`` (labeled and colored trees, contractions), ``posetkit``
(finite posets, joins, colimits, isomorphism), ``polykit`` (rational
polytopes and face lattices), ``gf2homology`` (mod-2 homology),
``linkcheck`` (certificates for link posets) and ``stratlab`` (cell models,
boundary colimits, surgery).
"""

from . import gf2homology, linkcheck, polykit, posetkit, stratlab, treekit

__version__ = "0.1.0"

__all__ = ["gf2homology", "linkcheck", "polykit", "posetkit", "stratlab", "treekit", "__version__"]

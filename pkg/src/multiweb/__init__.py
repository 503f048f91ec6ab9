"""Exact enumeration and determinantal solution of higher-rank dimer models.

The package is organized around a few small layers:

* ``graph`` / ``webs`` -- planar bipartite graphs with rotation systems,
  multiplicities and cilia; enumeration of multiwebs and loop moves.
* ``connection`` -- matrix-valued edge weights (connections) and exact
  multiweb traces via the coloring expansion.
* ``kasteleyn`` -- sign assignments, block Kasteleyn matrices over the
  rationals or bivariate Laurent polynomials, and the determinant identity
  ``det K = +/- sum of traces``.
* ``grassmann`` -- weighted networks in a disk, boundary measurements,
  matching generating functions and Schur reduction.
* ``honeycomb`` / ``scalar`` -- the trivalent torus graph, finite patches,
  and the gadget scalarization that turns rank-2 models into scalar dimers.
* ``models`` -- free-fermionic six-vertex and twenty-vertex models,
  characteristic polynomials, free energy, amoebas and positivity tests.

All combinatorial computations are exact (``fractions.Fraction``); floating
point appears only in quadrature and root-finding layers.
"""

__version__ = "0.1.0"

"""Exact counting of torsion tuples and Fuchsian group representations in GL_n(q).

Submodules:

* :mod:`fgc.signature`  -- Fuchsian signatures, Euler characteristic, parity sign
* :mod:`fgc.torsion`    -- exact counts of x^a = 1 in GL_n(q), with determinant
* :mod:`fgc.modforms`   -- eta / theta q-series and asymptotic predictions
* :mod:`fgc.hurwitz`    -- character-sum homomorphism counts and brute force
* :mod:`fgc.dimension`  -- centralizer minima and representation variety dimension
* :mod:`fgc.verifier`   -- certified rational branch-and-bound for the exclusion list
"""

__version__ = "0.1.0"

from .signature import FuchsianSignature, parse_signature  # noqa: F401

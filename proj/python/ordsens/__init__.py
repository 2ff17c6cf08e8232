"""Single-mode bosonic nonclassicality analysis in a truncated Fock space.

The heavy lifting lives in the C++ extension ``ordsens._core``: ordering
sensitivity (commutator, K-matrix, characteristic-function and grid routes),
quasiprobability grids and the s-ordered entropy, the moment / squeezing /
quantum-Fisher witness suite, and the thermal-bath channel.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc

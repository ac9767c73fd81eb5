"""Two-level atom in a lossy cavity driven by broadband squeezed vacuum.

Rates and detunings are in units of the cavity damping kappa (hbar = 1). Composite
states order the atom slow and the field fast, with the atom basis (g, e).
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"

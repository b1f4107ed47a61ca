"""Single-photon network simulator and gravitational-witness testbench.

Thin re-export of the compiled core. See the README for the physics and the
output contract; every function here is deterministic in its seed arguments.
"""

from ._istbench import *  # noqa: F401,F403
from ._istbench import __version__  # noqa: F401

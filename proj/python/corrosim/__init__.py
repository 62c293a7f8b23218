"""Chemo-mechanical prediction of corrosion-induced cracking and corrosion
concealment in porous reinforced concrete.

The heavy lifting lives in the compiled extension ``corrosim._core``; this
package re-exports its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

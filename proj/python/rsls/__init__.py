# SPDX-License-Identifier: Apache-2.0
"""Reduced-subspace least-squares channel estimation for uniform planar arrays.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"

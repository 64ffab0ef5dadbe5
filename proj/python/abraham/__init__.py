"""Spectral Maxwell-Lorentz laboratory: solitons, scattering, infrared tails.

The heavy lifting lives in the compiled extension ``_core``. When the package
is installed (scikit-build-core places ``_core`` inside the package) the
relative import works; in a plain CMake build tree the module sits next to
the build products and is importable from the top level instead.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # build-tree layout
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401

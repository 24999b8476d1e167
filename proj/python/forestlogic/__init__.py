"""Forest automata, branching temporal logics over unranked forests, and the
decidable characterization of EF-definable languages.

The heavy lifting lives in the compiled extension ``_forestlogic``; this
package re-exports its public surface.
"""

try:
    # Installed layout: the extension sits inside the package.
    from ._forestlogic import *  # noqa: F401,F403
    from . import _forestlogic as _impl
except ImportError:
    # Build-tree layout: the extension is on PYTHONPATH next to the sources.
    from _forestlogic import *  # noqa: F401,F403
    import _forestlogic as _impl

__version__ = _impl.__version__
__all__ = [name for name in dir(_impl) if not name.startswith("_")]

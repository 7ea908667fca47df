"""Lattice and finite-volume simulators for phenotype-structured haptotactic
invasion.

The compiled extension carries the engines; this package just re-exports it.
"""

try:
    from ._haptowave import *  # noqa: F401,F403  (installed layout)
    from . import _haptowave as _core  # noqa: F401
except ImportError:  # in-tree build: extension sits next to the package
    from _haptowave import *  # noqa: F401,F403
    import _haptowave as _core  # noqa: F401

__version__ = "0.1.0"

__all__ = [
    "derive_scaled_params",
    "load_config",
    "builtin_presets",
    "run_continuum",
    "run_ibm",
    "oracle_errors",
    "front_structure",
    "run_cli",
    "Config",
    "ModelParams",
    "Snapshot",
]

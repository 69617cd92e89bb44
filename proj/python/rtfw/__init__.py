"""Relativistic Thomas-Fermi-Weizsacker functional toolkit.

Momenta are in units of mc, energies in mc^2, lengths in reduced Compton
wavelengths.
"""

try:
    from ._core import *  # noqa: F401,F403
except ImportError:  # build-tree layout: extension next to the package on sys.path
    from _core import *  # noqa: F401,F403

"""Exact workbench for Steinberg pro-groups over finite rings Z/N.

Modules: rootsys (root systems), coeffring (base rings, localizations,
partitions of unity), algebra (matrix algebras, crossed modules,
homotopes), tower (pro-towers and cosheaf witnesses), oddform (odd form
algebras), steinberg (realizations and relation checkers) and presentation
(finite presentations and coset enumeration).
"""

__version__ = "0.1.0"

from .checks import FAIL, INCONCLUSIVE, PASS, CheckReport, Identity, run_identities
from .coeffring import BaseRing
from .rootsys import root_system

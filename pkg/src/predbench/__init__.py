"""Engineered dynamic predecessor structures and their benchmark harness.

Every structure stores a set of unsigned integer keys below a fixed bit
width and answers predecessor(x), the largest stored key at most x, under
inserts and deletes. The implementations trade constant factors and memory
very differently; the harness makes those trade-offs measurable.
"""

from .btree import BTreeSet
from .core import OracleSet, PredecessorSet
from .fusion import FusionNode, FusionTree
from .universe_sampling import USConfig, UniverseSampling
from .word_ops import USING_PORTABLE
from .yfast import YFastConfig, YFastTrie

__version__ = "0.1.0"

__all__ = [
    "BTreeSet",
    "FusionNode",
    "FusionTree",
    "OracleSet",
    "PredecessorSet",
    "USConfig",
    "USING_PORTABLE",
    "UniverseSampling",
    "YFastConfig",
    "YFastTrie",
    "__version__",
]

"""Wavelet-tree toolkit.

Succinct rank/select bit vectors, balanced wavelet trees with range
quantile / next-value / adaptive intersection queries, document retrieval
over string collections (flat, range-restricted, and hierarchical/XML), and
a dual-mode inverted index serving frequency-ordered and docid-ordered
postings from one structure.
"""

from .bitvec import BitVec, SparseBitVec
from .bundle import IndexBundle
from .docindex import DocIndex
from .hierdoc import HierIndex, ParenTree, UnitMask
from .invindex import InvIndex
from .rangeops import (
    QuantileFinger,
    RnvFinger,
    mrqq,
    rint,
    rint_via_rnv,
    rnv,
    rnv_fingered,
    rqq,
    rqq_fingered,
)
from .wavelet import Node, QueryStats, WaveletTree

__all__ = [
    "BitVec",
    "SparseBitVec",
    "Node",
    "QueryStats",
    "WaveletTree",
    "QuantileFinger",
    "RnvFinger",
    "rqq",
    "rqq_fingered",
    "rnv",
    "rnv_fingered",
    "rint",
    "rint_via_rnv",
    "mrqq",
    "DocIndex",
    "HierIndex",
    "ParenTree",
    "UnitMask",
    "InvIndex",
    "IndexBundle",
]

__version__ = "0.1.0"

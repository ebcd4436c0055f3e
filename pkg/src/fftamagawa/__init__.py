"""Intertwining operators and Tamagawa numbers of quasi-split groups over F_q(t)."""

from .catalog import CatalogEntry, default_catalog, parse_descriptor
from .galois_form import QuasiSplitDatum, restrict_roots, xi
from .intertwine import LambdaPoint, global_intertwiner, local_factor, pole_order_M_w0
from .ratfun import Atom, FactorProduct
from .rootsys import CartanDatum, RootSystem, cartan_matrix
from .tamagawa import tau_chain

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CartanDatum",
    "CatalogEntry",
    "FactorProduct",
    "LambdaPoint",
    "QuasiSplitDatum",
    "RootSystem",
    "cartan_matrix",
    "default_catalog",
    "global_intertwiner",
    "local_factor",
    "parse_descriptor",
    "pole_order_M_w0",
    "restrict_roots",
    "tau_chain",
    "xi",
]

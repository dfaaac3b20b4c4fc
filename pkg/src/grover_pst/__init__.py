"""Perfect state transfer and periodicity of Grover walks on graphs."""

from __future__ import annotations

from .errors import CapacityError, GroverPstError, ParameterError
from .exact_spectra import discriminant_spectrum, is_periodic, period, u_spectrum
from .graph_core import Graph, build_family, from_edges, parse_edge_list, parse_family_spec
from .pst_engine import PstCertificate, analyze_pst, pst_search
from .sim_oracle import brute_force_pst, verify_certificates
from .walk_operators import build_walk

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Graph",
    "GroverPstError",
    "ParameterError",
    "PstCertificate",
    "analyze_pst",
    "brute_force_pst",
    "build_family",
    "build_walk",
    "discriminant_spectrum",
    "from_edges",
    "is_periodic",
    "parse_edge_list",
    "parse_family_spec",
    "period",
    "pst_search",
    "u_spectrum",
    "verify_certificates",
]

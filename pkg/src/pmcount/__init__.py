"""Exact hafnians, permanents and perfect matching counts over commutative rings."""

from .errors import CapExceeded, InputError
from .hafnian import (
    hafnian_bruteforce,
    hafnian_labelring,
    hafnian_polyspace,
    permanent_bruteforce,
    permanent_ryser,
    permanent_via_hafnian,
)
from .matching import Graph, count_perfect_matchings, count_pm_bruteforce, parse_graph
from .rings import ZZ, ModRing, PolynomialRing
from .setcover import SetCoverInstance, count_exact_covers_dp, recover_permanent_crt

__version__ = "0.1.0"

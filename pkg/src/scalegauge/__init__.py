"""Scaled complex number structures, scaled Hilbert spaces and the two
GL(1,C) lattice gauge fields they induce."""

from .errors import *  # noqa: F401,F403
from .scaled_numbers import (  # noqa: F401
    ScaledNumber,
    ScaledStructure,
    check_field_axioms,
    check_naturals_isomorphism,
    correspondence,
    element_with_value,
    make_structure,
    nat_scaled_ops,
    sameness,
    value_of,
)
from .lattice_gauge import GaugeFields, Lattice, LinkField, links_from_fields  # noqa: F401
from .generators import generate_fields, make_rng  # noqa: F401

__version__ = "0.1.0"

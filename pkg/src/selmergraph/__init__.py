"""Selmer groups of a two-parameter 2-isogeny family, three ways.

The same finite subgroup of Q(S,2) is computed from congruence tables
(local descent clause by clause), from even / quasi-even partitions of
small directed graphs, and certified against a generic p-adic / real
solvability oracle.  Product-formula lower bounds on the 2-rank come with
explicit witness classes.
"""

from ._backend import BACKEND_NAME
from .arith import NotSquareFree, is_prime, jacobi, legendre
from .graphs import (
    CaseGap,
    ConventionUndefined,
    PartitionGraph,
    build_G_minus,
    build_G_plus,
    build_g_minus,
    build_g_plus,
    enumerate_partitions,
    is_even,
    is_quasi_even,
    serialize_graph,
)
from .local import LocalVerdict, UnsupportedClass, table_verdict
from .model import (
    CurveParams,
    InvalidD,
    InvalidGap,
    NotPrime,
    Place,
    SquareClass,
    class_from_integer,
    enumerate_classes,
    places,
    torsor_coeffs,
    validate_params,
)
from .oracle import DepthExceeded, global_member, locally_solvable, padic_solvable, real_solvable
from .selmer import (
    BoundReport,
    GraphResult,
    InstanceReport,
    OutOfScope,
    SelmerSet,
    appendix_bounds,
    bound_check,
    even_only_regime,
    selmer_by_descent,
    selmer_by_graph,
    theorem_count,
    verify_instance,
)

__version__ = "1.0.0"

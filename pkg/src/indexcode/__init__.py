"""Index coding: hyperclique cover bounds, partition bounds, and linear codes.

Set ``INDEXCODE_NO_NUMBA=1`` to run the pure numpy/Python kernels instead of
the numba-compiled ones.
"""

from ._kernels import USE_NUMBA
from .codes import (
    DecodabilityReport,
    IndexCode,
    build_clique_cover_code,
    build_code,
    build_local_code,
    build_partition_multicast_code,
    build_partitioned_local_code,
    mds_generator,
    round_trip,
    verify_decodable,
)
from .cover import (
    PARAMETERS,
    BoundValue,
    CoverSolution,
    deficit,
    solve,
    solve_hyperclique_cover,
    solve_local_hyperclique_cover,
    solve_partition_multicast,
    solve_partitioned_local,
)
from .gf import FieldContext, FieldTooSmall, gf
from .hypercliques import (
    CapExceeded,
    Hyperclique,
    enumerate_maximal_hypercliques,
    interference_users,
    is_hyperclique,
)
from .instance import (
    GroupcastInstance,
    InstanceError,
    UnicastInstance,
    gen_family,
    gen_figure2,
    gen_random,
    gic_to_uic,
    induced_subproblem,
    parse_instance,
    serialize_instance,
    uic_as_gic,
)
from .minrank import FittingMatrix, minrank, minrank_code
from .report import BoundReport, build_report, instances_from_spec

__version__ = "0.1.0"

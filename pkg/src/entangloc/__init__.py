"""Localize partial entanglement in multipartite quantum states.

The finest partition of the subsystems under which a state factorizes is
found with bipartite tools only: Schmidt ranks for pure states, bipartite
separability oracles for mixed states, and an enumeration of 2-partitions.
"""

__version__ = "0.1.0"

from .bruteforce import brute_finest_partition, marginal_purity
from .linalg import (
    partial_trace,
    partial_transpose,
    realign,
    reshape_bipartite,
    schmidt_decompose,
)
from .mixed import InconclusivePolicy, MixedReport, check_pi_separable_constructed, localize_mixed
from .oracles import (
    OracleSpec,
    OracleVerdict,
    Verdict,
    oracle_all,
    oracle_ccnr,
    oracle_ppt,
    oracle_ppt_rank,
    oracle_product,
    oracle_pure,
)
from .partitions import (
    Bipartition,
    Partition,
    bell_number,
    enumerate_bipartitions,
    enumerate_partitions,
    meet,
    refines,
    stirling2,
)
from .pure import SeparabilityReport, is_product_across, localize
from .states import (
    DensityMatrix,
    PureState,
    density_from_pure,
    embed_product,
    make_basis,
    make_bell,
    make_ghz,
    make_w,
    mix,
    random_pure,
    tensor,
    werner_2qubit,
)

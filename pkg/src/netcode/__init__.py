"""Linear network codes on acyclic networks, instantaneous and with unit delays."""

from .code import (
    NetworkCode,
    TransferReport,
    Verdict,
    check_feasibility,
    complete_decoders,
    lift_to_unit_delay,
    load_code,
    propagate,
    transfer_matrices,
    verify,
)
from .convert import Conversion, ud_to_inst
from .delaycode import (
    DelayCodeScheme,
    budget_audit,
    fig4_delay_code_search,
    materialize,
    nonuniform_construct,
    uniform_construct,
    uniformity_audit,
)
from .errors import *  # noqa: F401,F403
from .field import FieldElement, FieldSpec, extension_containing, make_field, parse_field
from .lif import lemma2_combine, lif_construct
from .netgen import generate
from .netgraph import Network, depth_vectors, equal_depth, flow_decompose, load_network, mincut, node_disjoint_paths
from .oracle import exhaustive_search, min_field_size, table1_audit
from .polyrat import RatMatrix, RationalFn
from .sim import decode_check, simulate

__version__ = "0.1.0"

"""LP decoding of binary LDPC codes via ADMM consensus optimization.

The core primitive is an exact O(d log d) Euclidean projection onto the
parity polytope; around it sit the ADMM decoder, sum-product BP and
dual-ascent baselines, channel models, and a seeded Monte-Carlo harness.
"""

from .admm_decoder import (
    AdmmConfig,
    AdmmState,
    DecodeOutput,
    STATUS_CONVERGED,
    STATUS_MAX_ITERS,
    decode,
)
from .bp_decoder import BpConfig, decode_bp, posterior_llrs
from .channels import Awgn, Bsc, ChannelModel, llr, transmit
from .codes import (
    AlistParseError,
    CodeGenerationError,
    ParityCheckMatrix,
    emit_alist,
    gen_regular_ldpc,
    is_codeword,
    parse_alist,
)
from .dual_ascent import DualAscentConfig, decode_dual_ascent
from .parity_polytope import (
    ProjectionWorkspace,
    TwoSliceDecomposition,
    constituent_parity,
    even_ceil,
    even_floor,
    maximize_linear,
    membership,
    project_batch,
    project_breakpoint_march,
    project_hypercube,
    project_parity_polytope,
    two_slice_decompose,
)
from .simulator import (
    DecoderRef,
    MlOutcome,
    TrialStats,
    ml_account,
    run_point,
    stats_to_csv,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig",
    "AdmmState",
    "AlistParseError",
    "Awgn",
    "BpConfig",
    "Bsc",
    "ChannelModel",
    "CodeGenerationError",
    "DecodeOutput",
    "DecoderRef",
    "DualAscentConfig",
    "MlOutcome",
    "ParityCheckMatrix",
    "ProjectionWorkspace",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITERS",
    "TrialStats",
    "TwoSliceDecomposition",
    "constituent_parity",
    "decode",
    "decode_bp",
    "decode_dual_ascent",
    "emit_alist",
    "even_ceil",
    "even_floor",
    "gen_regular_ldpc",
    "is_codeword",
    "llr",
    "maximize_linear",
    "membership",
    "ml_account",
    "parse_alist",
    "posterior_llrs",
    "project_batch",
    "project_breakpoint_march",
    "project_hypercube",
    "project_parity_polytope",
    "run_point",
    "stats_to_csv",
    "sweep",
    "transmit",
    "two_slice_decompose",
]

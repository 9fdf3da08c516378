"""Even-cycle detection in the Broadcast CONGEST model, simulated round by round."""

from evencycle.density import (
    DensityCertificate,
    build_H,
    compute_in_out,
    density_certificate,
    density_extract,
    extract_cycle_from_core,
    find_violation,
    peel,
    reconstruct_path,
)
from evencycle.detect import c2k_heavy_phase, c2k_light_phase, c2k_program, c4_program, threshold_exceeded
from evencycle.errors import (
    BandwidthExceeded,
    CapExceeded,
    CongestionViolation,
    DecodeError,
    DoubleBroadcast,
    EvenCycleError,
    GraphError,
    InvariantViolation,
    PreconditionError,
    SimulationFault,
    VerdictTimeout,
)
from evencycle.graph import (
    Graph,
    enumerate_simple_paths,
    find_cycle_bruteforce,
    has_cycle_exhaustive,
    local_density,
    parse_edge_list,
    reach_exact,
    read_edge_list,
    verify_cycle,
    write_edge_list,
)
from evencycle.rep import PathFamily, SetFamily, compute_representative, filter_paths, verify_representative
from evencycle.sim import ACCEPT, REJECT, UNDECIDED, NodeProgram, RunReport, global_verdict, run

__all__ = [
    "ACCEPT",
    "REJECT",
    "UNDECIDED",
    "BandwidthExceeded",
    "CapExceeded",
    "CongestionViolation",
    "DecodeError",
    "DensityCertificate",
    "DoubleBroadcast",
    "EvenCycleError",
    "Graph",
    "GraphError",
    "InvariantViolation",
    "NodeProgram",
    "PathFamily",
    "PreconditionError",
    "RunReport",
    "SetFamily",
    "SimulationFault",
    "VerdictTimeout",
    "build_H",
    "c2k_heavy_phase",
    "c2k_light_phase",
    "c2k_program",
    "c4_program",
    "compute_in_out",
    "compute_representative",
    "density_certificate",
    "density_extract",
    "enumerate_simple_paths",
    "extract_cycle_from_core",
    "filter_paths",
    "find_cycle_bruteforce",
    "find_violation",
    "global_verdict",
    "has_cycle_exhaustive",
    "local_density",
    "parse_edge_list",
    "peel",
    "reach_exact",
    "read_edge_list",
    "reconstruct_path",
    "run",
    "threshold_exceeded",
    "verify_cycle",
    "verify_representative",
    "write_edge_list",
]

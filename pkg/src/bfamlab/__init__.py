"""Pseudospectral toolkit for Besov-space continuity experiments on the
Camassa-Holm / b-family equations."""

from .grid import (
    Field,
    GridSpec,
    MultiplierSpec,
    Spectrum,
    apply_multiplier,
    apply_pd,
    dealias,
    derivative,
    from_spectrum,
    helmholtz_inverse,
    lebesgue_norm,
    make_field,
    make_grid,
    to_spectrum,
)
from .lp import CutoffPair, DyadicBlocks, build_cutoffs, decompose, dyadic_block, high_pass, low_pass
from .besov import BesovParams, besov_norm, check_index_condition, interpolation_defect, product_ratio
from .data import (
    PacketSpec,
    ProfilePhi,
    build_phi,
    make_f_n,
    make_g_n,
    make_peakon,
    make_smoothed_peakon,
    make_v,
    preset_u0,
    translate,
)
from .solver import (
    ModelParams,
    SolverConfig,
    Trajectory,
    bilinear_B,
    conserved_quantities,
    evolve,
    linear_transport_evolve,
    rhs,
    step,
)
from .oracles import frozen_phase_gap, frozen_phase_slope, load_reference, periodized_kernel
from .experiments import (
    Check,
    ExperimentReport,
    FitResult,
    HarnessConfig,
    NormCurve,
    TransportProblem,
    check_decoupling,
    check_transport_apriori,
    check_truncation_stability,
    check_two_solution_stability,
    fit_slope,
    make_stability_pairs,
    make_transport_problems,
    run_nonuniform_at,
    run_nonuniform_basic,
)
from .reporting import (
    ConfigError,
    ReportFiles,
    RunConfig,
    build_run_config,
    config_hash,
    parse_config,
    read_curves,
    write_report,
)

__version__ = "0.1.0"

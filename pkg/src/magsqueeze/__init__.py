"""Hybrid flux-qubit / magnon toolkit: conditional squeezing, superposition
states, and the supporting coupling, dynamics, and observable machinery."""

__version__ = "0.1.0"

from .constants import thermal_occupation
from .coupling import (
    LoopGeometry,
    MaterialSpec,
    SphereSpec,
    YIG,
    coupling_map,
    coupling_strength,
    loop_field,
    volume_avg_field,
)
from .dynamics import (
    LindbladSpec,
    SolverConfig,
    TrajectoryResult,
    build_dissipators_effective,
    build_dissipators_full,
    conditional_squeezing_run,
    conditional_superposition_run,
    evolve_master,
    postselect_qubit,
    sector_covariance_squeezing,
)
from .errors import (
    ConfigError,
    DimensionError,
    FrameError,
    MagsqueezeError,
    NumericalError,
    StiffnessError,
    TruncationError,
)
from .model import (
    DerivedParams,
    PhysicalParams,
    analytic_propagator,
    build_H_cs,
    build_H_eff,
    build_H_lab,
    build_H_rot,
    build_H_tot,
    derive,
    frame_transform,
    james_effective,
    squeezing_parameter,
)
from .observables import (
    WignerGrid,
    fock_populations,
    min_quadrature_variance,
    squeezing_db,
    uhlmann_fidelity,
    wigner,
    wigner_negativity_volume,
)
from .qops import HilbertSpace, StateDensity
from .states import (
    joint_initial_state,
    logical_codewords,
    squeezed_vacuum_fock,
    superposition_pm,
)

"""Exact non-paraxial vortex beams for photons, electrons and gravitational
waves, with fringe-visibility analysis of +-ell superpositions.

Fields of all three species are generated from closed-form scalar
potentials by exact derivative operators; focusing fills the azimuthal
fringe minima through the species-specific extra components
(longitudinal field, small spinor component, transverse-longitudinal
curvature), and the analysis layer quantifies the resulting loss of
visibility.
"""

from .analysis import (
    AnalysisError,
    VisibilityReport,
    analyze_beam,
    analyze_intensity,
    azimuthal_extrema,
    find_r_max,
    fringe_spacing,
    numerical_aperture,
    scaling_fit,
    visibility,
)
from .electron import (
    DiracSpinor,
    ElectronBeam,
    dirac_spinor,
    electron_density,
    superposed_spinor,
)
from .gridio import (
    FieldGrid,
    GridSpec,
    read_csv,
    read_report,
    sample_grid,
    write_csv,
    write_figure,
    write_png,
    write_report,
)
from .gw import (
    CurvatureTensor,
    GravitationalWaveBeam,
    curvature,
    gw_intensity,
    phi_abcd,
)
from .jets import (
    DiffOp,
    Jet,
    JetError,
    MultiIndex,
    SpacetimePoint,
    apply_operator,
    finite_difference_partial,
)
from .photon import PhotonBeam, RSVector, em_intensity, extract_EB, rs_vector
from .potentials import (
    BranchCutError,
    ElectronPacketParams,
    ParaxialLGParams,
    PhotonPotentialParams,
    Potential,
    SuperpositionSpec,
    electron_f,
    lg_paraxial,
    photon_chi,
    superpose,
)
from .presets import PRESETS, build_beam, preset_names
from .validation import (
    ResidualReport,
    ValidationConfig,
    dalembert_residual,
    maxwell_residual,
    paraxial_agreement,
    run_negative_controls,
    run_standard_suite,
    steuernagel_invariance,
)

__version__ = "0.1.0"

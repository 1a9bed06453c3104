pub mod algebra;
pub mod bosonic;
pub mod equivalence;
pub mod error;
pub mod intelligent;
pub mod linalg;

pub use algebra::{
    check_rotation, make_pair, make_spin_observables, AlgebraKind, Generators, HalfInteger,
    ObservablePair, PairSelector, Parity, RotationKind, RotationPropagator, Spin,
};
pub use equivalence::{
    certify_transport, covariance_angle, forward_map, inverse_map, padded_moment_delta,
    predict_rotated_cov, puri_state, transport, working_pair, Branch, CovarianceAngle, EquivalenceRecord,
    InverseMap, Transport, TransportBranch,
};
pub use bosonic::{
    optical_unitary, schwinger_su2, su11_single_mode, su11_two_mode, AmplifierGenerator, FockSpace, LeakageReport,
    OpticalElement, OpticalOutput, PhaseMode, SplitterGenerator,
};
pub use error::{Error, Result};
pub use intelligent::{
    classify, moments, moments_unchecked, solve_intelligent, IntelligentState, MomentSummary, Solution,
    SolveOptions, Squeezing, StateStatus, DEFAULT_LEAKAGE_THRESHOLD,
};
pub use linalg::{ComplexSquareMatrix, TolerancePolicy, C64};

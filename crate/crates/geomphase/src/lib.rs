//! Geometric and dynamical phase extraction for driven quantum systems.
//!
//! The library separates three concerns that are easy to conflate:
//!
//! * **Models** ([`evolution::HamiltonianModel`]) supply a Hermitian
//!   generator at any time. The exactly solvable rotating-field two-level
//!   system lives in [`rotating`] and doubles as the test oracle.
//! * **Frames** ([`frame::BasisFrame`]) supply a smooth moving orthonormal
//!   basis along with its time derivative. Frames carry gauge freedom: any
//!   per-level rephasing ([`gauge::GaugeTransform`]) yields an equally valid
//!   frame, and every extracted phase in [`phases`] is checked to be
//!   insensitive to it.
//! * **Functionals** ([`phases`]) turn a model, a frame, and a time grid
//!   into numbers: dynamical phase, cyclic and non-cyclic geometric phase,
//!   the projective-space phase computed from amplitudes alone, holonomy,
//!   and parallel-transport repair of an arbitrary frame.
//!
//! [`evolution`] closes the loop: it projects the generator onto a frame,
//!   propagates the resulting coefficient system, and reconstructs
//!   amplitudes that can be compared against closed forms or a direct
//!   integrator.
//!
//! The `geomphase` binary exposes the same machinery as four subcommands
//! (`sweep`, `validate`, `gauge-fuzz`, `phase`); see [`cli`]. The examples
//! directory exercises every major capability end to end.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod frame;
pub mod gauge;
pub mod grid;
pub mod linalg;
pub mod phases;
pub mod report;
pub mod rotating;

pub use error::{GeomPhaseError, Result};
pub use evolution::{
    adiabatic_projection, effective_hamiltonian, evolve, reconstruct_amplitude,
    schrodinger_integrate,
    AmplitudeSeries, EffectiveHamiltonianSeries, EvolutionOperatorSeries, FnHamiltonian,
    HamiltonianModel, StaticHamiltonian,
};
pub use frame::{
    apply_gauge, fourier_unitary_frame, BasisFrame, CentralDifference, FnFrame, GaugedFrame,
    StaticFrame,
};
pub use gauge::{gauge_fuzz_sample, GaugeTransform, PhaseFunction};
pub use grid::TimeGrid;
pub use linalg::{inner, HermitianMatrix, StateVector};
pub use phases::{
    aa_phase, circle_distance, dynamical_phase, geometric_phase_beta, holonomy, noncyclic_phase,
    parallel_residual, parallel_transport_fix, unwrap_phase_series, wrap_2pi, wrap_pm_pi,
    PhaseDecomposition, TransportedFrame, CYCLIC_TOL, OVERLAP_FLOOR,
};
pub use report::{CheckRecord, RunReport};
pub use rotating::{
    berry_phase_adiabatic, AdiabaticFrame, Level, RotatingFieldParams, RotatingFrame,
    RotatingHamiltonian,
};

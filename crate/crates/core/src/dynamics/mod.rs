//! Time evolution: Lindblad reference, exact and Trotterized repeated
//! interaction, and repeated-interaction state preparation.
//!
//! Every engine works on Hermitian operators and re-symmetrizes after each
//! step. Times are in periods.

mod kraus;
mod lindblad;
mod propagator;
mod ri;
mod stateprep;
mod trajectory;
mod trotter;

pub use lindblad::{integrate_lindblad, lindblad_rhs, LindbladConfig, LindbladMode, COMPILED_MAX_DIM};
pub use propagator::{Propagation, TRACE_TOLERANCE};
pub use ri::{build_ri_unitary, evolve_ri, ri_step, RiConfig};
pub use stateprep::{ground_donor_state, run_state_preparation};
pub use trajectory::Trajectory;
pub use trotter::{build_trotter_unitary, build_trotter_unitary_with, TrotterSplit};

pub(crate) use propagator::check_trace;

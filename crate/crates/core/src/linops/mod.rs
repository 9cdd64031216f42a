//! Dense complex linear algebra on tensor-product spaces.

mod density;
mod eigen;
mod functions;
pub(crate) mod gemm;
mod operator;
mod tensor;

pub use density::DensityMatrix;
pub use eigen::{herm_eig, EigenDecomposition, HERMITIAN_TOLERANCE};
pub use functions::{concurrence, expm_i_herm, expm_nilpotent2, fidelity, sqrt_psd, FidelityTarget, PSD_CLIP};
pub use operator::Operator;
pub use tensor::{kron, kron_all, partial_trace, partial_trace_operator};

pub(crate) use functions::concurrence_operator;
pub(crate) use operator::symmetrize_in_place;

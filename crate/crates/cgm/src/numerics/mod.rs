//! Dense matrix arithmetic, reverse-mode differentiation, and the symmetric
//! eigendecomposition utilities the correlation loss depends on.

pub mod eig;
pub mod gradcheck;
pub mod matrix;
pub mod tape;

pub use eig::{inv_sqrt_psd, sym_eig};
pub use gradcheck::{grad_check, GradCheckReport, SUBSAMPLE_THRESHOLD};
pub use matrix::{sigmoid, Matrix};
pub use tape::{concat_cols, concat_rows, Tape, Var};

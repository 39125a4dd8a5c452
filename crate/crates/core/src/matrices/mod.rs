//! Dense complex linear algebra and exact integer linear algebra.

mod complex;
mod integer;
mod phase;

pub use complex::*;
pub use integer::{integer_left_kernel, smith_normal_form, to_f64, IntegerMatrix, SmithForm};
pub use phase::{phase_of, PhaseMatrix};

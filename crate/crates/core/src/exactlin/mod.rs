//! Exact integer and rational linear algebra.

pub mod eventual;
pub mod lattice;
pub mod localized;
pub mod matrix;
pub mod numfield;
pub mod poly;
pub mod primes;
pub mod roots;
pub mod smith;

pub use eventual::{eventual_range, EventualRange};
pub use lattice::Lattice;
pub use localized::{solve_localized, Certificate, LocalConstraint, Normalization};
pub use matrix::{Int, IntMatrix, Rat, RatMatrix, RatVector};
pub use numfield::{NfElem, NumberField};
pub use smith::{smith_normal_form, SmithDecomposition};

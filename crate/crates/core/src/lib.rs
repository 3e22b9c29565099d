//! Exact first cohomology of one-dimensional substitution tiling spaces.
//!
//! The pipeline runs from a symbolic substitution to its Anderson–Putnam
//! complex, the direct-limit group `H¹(Ω) = ⋃ Ã⁻ⁿΣ`, the eigenvalue group
//! and Ruelle–Sullivan functional, and finally to splitting decisions for
//! the two short exact sequences
//! `0 → E → H¹ → coker θ → 0` and `0 → Inf → H¹ → freq → 0`.

pub mod exactlin;
pub mod apcomplex;
pub mod dirlimit;
pub mod pipeline;
pub mod report;
pub mod spectral;
pub mod splitting;
pub mod substitution;

pub mod cli;
pub mod cohomology;
pub mod divisor_model;
pub mod fourier;
pub mod matrix;
pub mod orbit;
pub mod scalars;
pub mod semigroup;

//! Regular cycles of permutation-group elements, fixed-point ratios, finite
//! classical-group subspace actions and bound certification.

pub mod numtheory;
pub mod perm;
pub mod regcycle;
pub mod geometry;
pub mod bounds;
pub mod cli;

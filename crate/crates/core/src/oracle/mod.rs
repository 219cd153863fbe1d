//! Brute-force cross-checks for the solver.
//!
//! Nothing here shares code with the triangular solver: the conjugacy
//! coefficients are rebuilt from an explicit enumeration of the index
//! equations with integer multinomials, injectivity is probed by counting
//! preimages in a finite quotient of the unit disc, and the functional
//! equation is tested at individual points.

mod census;
mod index;
mod pointwise;
mod recursion;

pub use census::{preimage_census, CensusEntry, CensusReport};
pub use index::{enumerate_index_solutions, verify_partition_lemma, IndexSolution, PartitionLemma};
pub use pointwise::{domain_exponent, pointwise_conjugacy_check, Mode, PointCheck};
pub use recursion::direct_bk_recursion;

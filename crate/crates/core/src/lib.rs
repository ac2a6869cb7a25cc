//! Cellular machinery for arrangements of complex n-spheres in C^{n+1}.
//!
//! The arrangement consists of the n+1 unit spheres `S_j = {z : (z - i e_j)^2 = 1}`.
//! This crate builds the CW complex whose cells are indexed by flags of subsets
//! of `{1, ..., n+1}` together with signed cone data, computes its integer
//! homology via Smith normal form, produces the explicit generator chains, and
//! evaluates intersection indices and Picard-Lefschetz monodromy on top of them.
//!
//! ```
//! use qah_core::cells::{boundary_chain, top_generators, CellComplex};
//! use qah_core::homology::{class_rank, Filter};
//!
//! let n = 1;
//! let cx = CellComplex::build(n);
//! let gens = top_generators(n)?;
//! // the three sphere-union generators are independent cycles
//! for e in gens.absolute.values() {
//!     assert!(boundary_chain(e).is_zero());
//! }
//! let cycles: Vec<_> = gens.absolute.values().cloned().collect();
//! assert_eq!(class_rank(&cx, &cycles, Filter::EqOnly)?, 3);
//! # Ok::<(), qah_core::Error>(())
//! ```

pub mod cells;
pub mod combinatorics;
pub mod geometry;
pub mod homology;
pub mod intersection;
pub mod monodromy;
pub mod verify;

mod error;

pub use error::Error;

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! Constant-dimension subspace codes over F₂.
//!
//! The crate provides exact, bit-packed linear algebra over F₂, the geometry
//! of subspaces of F₂^v (distance, duality, incidence, enumeration),
//! rank-metric and lifted MRD codes including the two optimal (8,257,6;4)₂
//! codes, closed-form and recursive upper bounds on code sizes, a
//! branch-and-bound clique engine with orbit-based symmetry splitting, and
//! generators for the integer-programming models used in extension searches.
//!
//! A narrative guide with runnable examples lives in `book/`; its code
//! snippets are compiled and executed as doc-tests of this crate.

pub mod bounds;
pub mod codes;
pub mod geometry;
pub mod ilp;
pub mod linalg;
pub mod search;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

// Compile and run the book's code snippets as doc-tests so the guide cannot
// drift out of sync with the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Geometry, "../../../book/src/geometry.md");
    chapter!(RankMetric, "../../../book/src/rank-metric.md");
    chapter!(OptimalCodes, "../../../book/src/optimal-codes.md");
    chapter!(Bounds, "../../../book/src/bounds.md");
    chapter!(CliqueSearch, "../../../book/src/clique-search.md");
    chapter!(IlpModels, "../../../book/src/ilp-models.md");
    chapter!(Cli, "../../../book/src/cli.md");
}

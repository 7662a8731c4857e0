//! Exact computations around the statement that the plane Cremona group over
//! a perfect field is generated by involutions.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: field towers with Galois actions, polynomials, rational functions, matrices;
//! * [`quadform`]: quadratic spaces in any characteristic, reflections and their factorizations;
//! * [`maps`]: Cremona maps in homogeneous coordinates and affine charts;
//! * [`fibration`]: the standard pencils of lines and conics, and the bridge from
//!   orthogonal groups over `k(t)` to fibre-preserving maps;
//! * [`jonq22`]: the chart maps and Galois-invariance conditions for two-conic pencils;
//! * [`graph`], [`pieces`], [`reducer`]: the combinatorics of Sarkisov link words and
//!   their rewriting into involutions.

pub mod algebra;
pub mod error;
pub mod fibration;
pub mod graph;
pub mod jonq22;
pub mod json;
pub mod maps;
pub mod pieces;
pub mod quadform;
pub mod reducer;
pub mod samples;

pub use error::{Error, Result};

/// The guide's chapters, compiled so that their code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/quadratic-forms.md")]
    mod quadratic_forms {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/fibrations.md")]
    mod fibrations {}
    #[doc = include_str!("../../../book/src/two-conic-pencils.md")]
    mod two_conic_pencils {}
    #[doc = include_str!("../../../book/src/link-graph.md")]
    mod link_graph {}
    #[doc = include_str!("../../../book/src/pieces.md")]
    mod pieces {}
    #[doc = include_str!("../../../book/src/reducer.md")]
    mod reducer {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Workbench for exact completions of categories with weak finite limits.
//!
//! The library is organised around a single finite-category representation
//! ([`fincat::FinCategory`]) that serves both table-presented categories and
//! generated families ([`catprovider`]). On top of it sit weak-limit searches
//! and cone preorders ([`weaklim`]), the exact completion with its certified
//! limits, images, subobject lattices and projectivity analysis ([`excomp`]),
//! the simple-product searchers ([`wsp`]), and the exponential constructions
//! together with the brute-force oracle and the cartesian-closure decision
//! procedure ([`construct`]).
//!
//! Every categorical construction is verified post hoc against its universal
//! property by enumeration; searches over capped families return a
//! distinguished `Undecided` verdict instead of unsound refutations.

pub mod catprovider;
pub mod construct;
pub mod excomp;
pub mod fincat;
pub mod report;
pub mod weaklim;
pub mod wsp;

pub use fincat::{Arr, FinCategory, Obj};
pub use report::{Budget, Completeness, Gas, Search};

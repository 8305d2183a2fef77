//! Gentle algebras through their marked surfaces.
//!
//! A gentle presentation determines a graded marked surface. Objects of the
//! perfect derived category correspond to graded curves on it, and the
//! morphisms between string and band complexes are computed here twice: once
//! combinatorially, once by exact linear algebra over the homotopy category.

pub mod corpus;
pub mod curves;
pub mod error;
pub mod field;
pub mod homalg;
pub mod objects;
pub mod presentation;
pub mod surface;
pub mod selftest;
pub mod tilting;

pub use presentation::{parse_presentation, validate_gentle, GentlePresentation, Path};
pub use surface::{build_disc_model, derived_invariant, DiscModel, Occ};
pub use curves::{graded, CurveWord, GradedCurve};
pub use homalg::{hom_profile, ChainMap, HomProfile, Oracle};
pub use objects::ProjComplex;

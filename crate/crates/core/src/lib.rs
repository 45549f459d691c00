//! Profinite frameworks at finite truncation level.
//!
//! A framework is a countable family of objects together with recognisers,
//! functions from objects into finite value sets. Recognisable languages are
//! preimages of value subsets. Observing objects through finitely many
//! recognisers gives a finite space of truncated points; lattices of
//! languages are exactly the families cut out by implications `u → v`
//! between such points.
//!
//! Two concrete frameworks are provided: [`word::WordFramework`] (finite
//! words, DFAs) and [`fo::FoFramework`] (finite relational structures,
//! first-order sentences).

pub mod equations;
pub mod error;
pub mod fo;
pub mod framework;
pub mod lattice;
pub mod space;
pub mod value;
pub mod word;

pub use error::{Error, Result};
pub use framework::{Cardinality, Framework, Language};
pub use space::{ApproximationSpace, TruncatedPoint};
pub use value::Value;

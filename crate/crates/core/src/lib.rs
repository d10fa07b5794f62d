//! Deciders for the separation and covering problems over
//! polynomial-closure classes of regular languages.
//!
//! Given a finite basis (a quotienting Boolean algebra represented by its
//! class monoid), the library answers whether one regular language can be
//! covered by languages of the polynomial closure of the basis — or of the
//! polynomial closure of its Boolean closure — while avoiding a second
//! language. Decisions come from least-fixpoint saturations over finite
//! monoid/hemiring pairs; an independent subword oracle, stratified-preorder
//! comparators and a forest-based witness synthesizer cross-check them.
//!
//! Module map:
//! - [`lang`]: regexes, automata, Boolean/quotient operations.
//! - [`monoid`]: finite monoids, transition monoids, compatibility products.
//! - [`basis`]: built-in and custom bases, class languages, strata oracle.
//! - [`rating`]: hemirings of powerset tuples and rating maps.
//! - [`pol`] / [`pbpol`]: the two saturation engines and their audits.
//! - [`decide`]: level registry, separation/covering front end.
//! - [`witness`]: factorization forests and cover synthesis.
//! - [`naive`]: materialized reference closures for differential tests.

pub mod basis;
pub mod config;
pub mod decide;
pub mod error;
pub mod gen;
pub mod imprint;
pub mod lang;
pub mod monoid;
pub mod naive;
pub mod pbpol;
pub mod pol;
pub mod rating;
pub mod witness;

pub use config::Caps;
pub use error::{Error, Result};

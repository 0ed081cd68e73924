//! Word calculus for right-angled Artin groups.
//!
//! For a finite simple graph `Γ`, the group `G(Γ)` is generated by the
//! vertices of `Γ`, with two generators commuting exactly when they are
//! *not* adjacent in `Γ` (the "opposite" convention: `G(Γ) = A(Γᶜ)`).
//!
//! The crate provides:
//! * [`graph`] — defining graphs, the commutation relation, vertex orders;
//! * [`words`] — letters, words, free reduction, geodesic prefix
//!   enumeration via the dependence DAG;
//! * [`normalform`] — starting generators, conical / pyramidal /
//!   SD-conical classification, canonical normal forms and conical conjugates;
//! * [`structure`] — cyclic reduction, splitness, powers, root extraction,
//!   primitivity and conjugacy of cyclically reduced elements;
//! * [`seqwords`] — periodicity (Fine–Wilf) and quasi-root matching for
//!   plain letter sequences, independent of any graph;
//! * [`quasiroot`] — (λ,N)-quasi-root decompositions: verification,
//!   exhaustive search at desk scale, and the uniqueness harness;
//! * [`cli`] — the command-line front end.
//!
//! With the default `parallel` feature the quasi-root search fans out over
//! prefix branches with rayon; without it everything runs sequentially.

pub mod cli;
pub mod error;
pub mod graph;
pub mod normalform;
pub mod quasiroot;
pub mod seqwords;
pub mod structure;
pub mod words;

pub use error::Error;
pub use graph::{DefiningGraph, VertexId, VertexOrder};
pub use words::{GroupElement, Letter, Word};

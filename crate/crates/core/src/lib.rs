//! Spectral recognition of distance-biregular graphs.
//!
//! A connected bipartite graph is distance-biregular when it is
//! distance-regular around every vertex and the intersection array only
//! depends on the side of the bipartition the vertex lies in. This crate
//! decides that property two independent ways:
//!
//! * [`excess`] compares the spectral excess (the value at the spectral
//!   radius of the top orthogonal polynomial on a side-weighted eigenvalue
//!   mesh) against the average number of vertices at maximal distance;
//! * [`oracle`] counts intersection numbers directly from BFS layers.
//!
//! The supporting machinery lives in [`graphs`] (structure, generators,
//! graph6 and edge-list I/O, distances, bipartitions), [`spectra`]
//! (symmetric eigensolvers, idempotents, local multiplicities, Perron
//! weights) and [`orthopoly`] (orthogonal polynomials on a finite weighted
//! mesh).
//!
//! Graph families and eigensolvers are pluggable strategies looked up by
//! name through a [`registry::Registry`].

pub mod excess;
pub mod graphs;
pub mod oracle;
pub mod orthopoly;
pub mod registry;
pub mod spectra;

pub use excess::{verdict, Analysis, CaseCVariant, CaseTag, Config, ExcessError, Verdict};
pub use graphs::{Bipartition, Graph, GraphError};
pub use spectra::{SpectraError, Spectrum};

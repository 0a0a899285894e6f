//! Frobenius functionals on parabolic and seaweed subalgebras of sl(n).
//!
//! Everything is computed over exact rationals. The main entry points are
//! [`sln::kirillov_matrix`] for the Kirillov form, the families in
//! [`gallery`], the graph `Γ(S)` in [`form_graph`], the three r-matrix
//! constructions in [`cybe`], admissible triples in [`mcybe`] and the local
//! rings of a graph in [`local_ring`].

pub mod cybe;
pub mod error;
pub mod exact;
pub mod form_graph;
pub mod gallery;
pub mod graph;
pub mod local_ring;
pub mod mcybe;
pub mod sln;

pub use cybe::{WedgeThree, WedgeTwo};
pub use error::{Error, Result};
pub use exact::{Rational, RationalMatrix};
pub use form_graph::{FormGraph, FormVertex};
pub use gallery::{DualBasisElement, Family, PrincipalElement, SmallGraph};
pub use graph::Graph;
pub use local_ring::{Reconstruction, RingPresentation};
pub use mcybe::{AdmissibleTriple, RootProgression};
pub use sln::{BasisElement, Element, Functional, IndexPair, KirillovMatrix, LieSupport};

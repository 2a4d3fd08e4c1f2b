//! Signed graphs whose adjacency matrices have few, symmetric eigenvalues.
//!
//! The central objects are signed rectagraphs with `A² = rI`: their exact
//! certificates, switching classes, the correspondence with weighing matrices
//! of intersection numbers 0 and 2, exhaustive signature searches, and the
//! vertex extension procedures that rebuild such graphs from induced subgraphs.

pub mod catalog;
pub mod constructions;
pub mod extension;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod search;
pub mod spectral;
pub mod switching;
pub mod weighing;

pub use graph::{
    common_neighbour_profile, structure_report, underlying, GraphError, SignedGraph, StructureReport,
    UnderlyingGraph,
};
pub use linalg::{IntMatrix, IntPoly};
pub use spectral::{
    certify_four_sym, certify_three_sym, certify_two_sym, char_poly, filter_sr2se, sum_of_two_squares,
    trace_identities, FilterVerdict, Refusal, SpectralCertificate, SpectrumKind,
};
pub use switching::{
    class_invariants, schem_normal_form, switch, switching_isomorphic, ClassInvariants, SwitchingClass,
    SwitchingWitness,
};
pub use search::{
    search_signatures, search_signatures_with, search_weighing, verify_nonexistence, ProofLog, SearchOptions,
    SearchOutcome, WeighingSearchOutcome,
};

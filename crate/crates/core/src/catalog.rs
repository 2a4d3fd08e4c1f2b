//! Known signed graphs with `A² = rI` for `r ≤ 7`, plus a few named objects.
//!
//! Rows built from weighing matrices that are not reproduced here must be
//! supplied with [`Catalog::with_weighing`]; rows assembled by `⋉ K₂` from such
//! a row need the same data.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::constructions::{
    bibd_incidence, biplane_7_4_2, clebsch, complete, complete_bipartite, folded_cube, hypercube, ltimes_k2,
    signed_cube, signed_tetrahedron,
};
use crate::graph::{structure_report, SignedGraph, UnderlyingGraph};
use crate::search::search_signatures;
use crate::spectral::{certify_two_sym, SpectralCertificate};
use crate::weighing::{intersection_numbers, is_proper, to_bipartite_sr2se, WeighingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSource {
    SignedCube(usize),
    /// Unique signing of the incidence graph of the (7,4,2) biplane.
    BiplaneSearch,
    /// Unique signing of the Clebsch graph.
    ClebschSearch,
    /// Bipartite graph of a user-supplied weighing matrix.
    Weighing,
    LtimesK2(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub id: &'static str,
    pub n: usize,
    pub r: usize,
    pub bipartite: bool,
    pub underlying: &'static str,
    pub source: RowSource,
}

const fn row(id: &'static str, n: usize, r: usize, bipartite: bool, underlying: &'static str, source: RowSource) -> TableRow {
    TableRow { id, n, r, bipartite, underlying, source }
}

use RowSource::*;

pub const TABLE: [TableRow; 23] = [
    row("R1.1", 2, 1, true, "1.1, 2^1", SignedCube(1)),
    row("R2.1", 4, 2, true, "2.1, 2^2", SignedCube(2)),
    row("R3.1", 8, 3, true, "3.1, 2^3", SignedCube(3)),
    row("R4.1", 14, 4, true, "4.1, (7,4,2) incidence", BiplaneSearch),
    row("R4.2", 16, 4, true, "4.2, 2^4", SignedCube(4)),
    row("R5.1", 24, 5, true, "5.2", Weighing),
    row("R5.2", 28, 5, true, "5.3", Weighing),
    row("R5.3", 32, 5, true, "5.4", Weighing),
    row("R5.4", 16, 5, false, "N5.2, Clebsch", ClebschSearch),
    row("R6.1", 40, 6, true, "6.8", Weighing),
    row("R6.2", 40, 6, true, "6.7", Weighing),
    row("R6.3", 48, 6, true, "6.11", Weighing),
    row("R6.4", 48, 6, true, "6.10", Weighing),
    row("R6.5", 56, 6, true, "6.12, 5.3 x K2", LtimesK2("R5.2")),
    row("R6.6", 64, 6, true, "6.13, 2^6", SignedCube(6)),
    row("R6.7", 32, 6, false, "N6.9, N5.2 x K2", LtimesK2("R5.4")),
    row("R7.1", 80, 7, true, "7.34, 6.7 x K2", LtimesK2("R6.2")),
    row("R7.2", 80, 7, true, "7.35, 6.8 x K2", LtimesK2("R6.1")),
    row("R7.3", 96, 7, true, "7.37, 6.10 x K2", LtimesK2("R6.4")),
    row("R7.4", 96, 7, true, "7.38, 6.11 x K2", LtimesK2("R6.3")),
    row("R7.5", 112, 7, true, "7.39, 6.12 x K2", LtimesK2("R6.5")),
    row("R7.6", 128, 7, true, "7.40, 2^7", SignedCube(7)),
    row("R7.7", 64, 7, false, "N7.52, N6.9 x K2", LtimesK2("R6.7")),
];

pub fn table_row(id: &str) -> Option<&'static TableRow> {
    TABLE.iter().find(|r| r.id == id)
}

/// Rows buildable without external data.
pub fn constructible_rows() -> Vec<&'static TableRow> {
    TABLE.iter().filter(|r| needs_weighing(r).is_none()).collect()
}

/// The row whose weighing matrix `row` ultimately depends on, if any.
fn needs_weighing(row: &TableRow) -> Option<&'static str> {
    match row.source {
        Weighing => Some(row.id),
        LtimesK2(base) => needs_weighing(table_row(base).expect("base row exists")),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogObject {
    Signed(SignedGraph),
    Underlying(UnderlyingGraph),
}

impl CatalogObject {
    pub fn underlying(&self) -> UnderlyingGraph {
        match self {
            CatalogObject::Signed(g) => g.support().clone(),
            CatalogObject::Underlying(g) => g.clone(),
        }
    }

    pub fn into_signed(self) -> SignedGraph {
        match self {
            CatalogObject::Signed(g) => g,
            CatalogObject::Underlying(g) => g.to_signed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("{id} is built from a weighing matrix; supply the ({n}, {r}) matrix for {source_row}")]
    NeedsWeighing { id: String, source_row: String, n: usize, r: usize },
    #[error("weighing matrix for {id} rejected: {reason}")]
    BadWeighing { id: String, reason: String },
    #[error("{id} failed its table check: {reason}")]
    Check { id: String, reason: String },
}

/// Catalog lookups with optional user-supplied weighing matrices.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    weighing: HashMap<&'static str, WeighingMatrix>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    /// Registers the weighing matrix behind an ingest row (R5.1–R5.3, R6.1–R6.4).
    pub fn with_weighing(mut self, id: &str, w: WeighingMatrix) -> Result<Self, CatalogError> {
        let row = table_row(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
        let bad = |reason: String| CatalogError::BadWeighing { id: id.to_string(), reason };
        if row.source != Weighing {
            return Err(bad(format!("{id} is not built from a weighing matrix")));
        }
        if w.n() * 2 != row.n || w.weight() != row.r {
            return Err(bad(format!("expected order {} and weight {}, got ({}, {})", row.n / 2, row.r, w.n(), w.weight())));
        }
        let ints = intersection_numbers(&w);
        if ints.iter().any(|&k| k != 0 && k != 2) {
            return Err(bad(format!("intersection numbers {ints:?} are not within {{0, 2}}")));
        }
        if !is_proper(&w) {
            return Err(bad("matrix is not proper".into()));
        }
        self.weighing.insert(row.id, w);
        Ok(self)
    }

    pub fn get(&self, id: &str) -> Result<CatalogObject, CatalogError> {
        if let Some(row) = table_row(id) {
            return self.row_graph(row).map(CatalogObject::Signed);
        }
        named(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn signed(&self, id: &str) -> Result<SignedGraph, CatalogError> {
        self.get(id).map(CatalogObject::into_signed)
    }

    fn row_graph(&self, row: &TableRow) -> Result<SignedGraph, CatalogError> {
        match row.source {
            SignedCube(r) => Ok(signed_cube(r).expect("r >= 1")),
            BiplaneSearch => Ok(r41().clone()),
            ClebschSearch => Ok(r54().clone()),
            Weighing => {
                let w = self.weighing.get(row.id).ok_or_else(|| CatalogError::NeedsWeighing {
                    id: row.id.to_string(),
                    source_row: row.id.to_string(),
                    n: row.n / 2,
                    r: row.r,
                })?;
                to_bipartite_sr2se(w).map_err(|e| CatalogError::BadWeighing { id: row.id.to_string(), reason: e.to_string() })
            }
            LtimesK2(base) => {
                let base_row = table_row(base).expect("base row exists");
                match self.row_graph(base_row) {
                    Ok(g) => Ok(ltimes_k2(&g)),
                    Err(CatalogError::NeedsWeighing { source_row, n, r, .. }) => {
                        Err(CatalogError::NeedsWeighing { id: row.id.to_string(), source_row, n, r })
                    }
                    Err(e) => Err(e),
                }
            }
        }
    }
}

/// Catalog lookup without ingested data.
pub fn catalog(id: &str) -> Result<CatalogObject, CatalogError> {
    Catalog::new().get(id)
}

fn r41() -> &'static SignedGraph {
    static CELL: OnceLock<SignedGraph> = OnceLock::new();
    CELL.get_or_init(|| unique_signing(&biplane_incidence()))
}

fn r54() -> &'static SignedGraph {
    static CELL: OnceLock<SignedGraph> = OnceLock::new();
    CELL.get_or_init(|| unique_signing(&clebsch()))
}

fn unique_signing(g: &UnderlyingGraph) -> SignedGraph {
    let out = search_signatures(g, None).expect("rectagraph");
    assert!(out.exhausted && out.solutions.len() == 1, "expected a unique signing");
    out.solutions.into_iter().next().expect("one solution")
}

pub fn biplane_incidence() -> UnderlyingGraph {
    bibd_incidence(7, &biplane_7_4_2()).expect("valid biplane").0
}

/// Named non-table objects: `G<r>` signed cube, `Q<r>` cube, `FQ<r>` folded
/// cube, `Clebsch`, `T` signed tetrahedron, `K22`, `K4`, `B742` biplane incidence.
fn named(id: &str) -> Option<CatalogObject> {
    let num = |prefix: &str| id.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    use CatalogObject::*;
    match id {
        "Clebsch" => return Some(Underlying(clebsch())),
        "T" => return Some(Signed(signed_tetrahedron())),
        "K22" => return Some(Underlying(complete_bipartite(2, 2))),
        "K4" => return Some(Underlying(complete(4))),
        "B742" => return Some(Underlying(biplane_incidence())),
        _ => {}
    }
    if let Some(r) = num("FQ") {
        return folded_cube(r).ok().map(Underlying);
    }
    if let Some(r) = num("Q").filter(|&r| r <= 16) {
        return Some(Underlying(hypercube(r)));
    }
    if let Some(r) = num("G").filter(|&r| (1..=16).contains(&r)) {
        return signed_cube(r).ok().map(Signed);
    }
    None
}

/// Checks order, degree, bipartiteness and `A² = rI` against the table row.
pub fn check_row(row: &TableRow, g: &SignedGraph) -> Result<SpectralCertificate, CatalogError> {
    let fail = |reason: String| CatalogError::Check { id: row.id.to_string(), reason };
    let report = structure_report(g);
    if g.n() != row.n {
        return Err(fail(format!("order {} instead of {}", g.n(), row.n)));
    }
    if report.degree != Some(row.r) {
        return Err(fail(format!("degree {:?} instead of {}", report.degree, row.r)));
    }
    if report.bipartite != row.bipartite {
        return Err(fail(format!("bipartite = {}", report.bipartite)));
    }
    if !report.connected {
        return Err(fail("disconnected".into()));
    }
    let cert = certify_two_sym(g).map_err(|e| fail(e.to_string()))?;
    if cert.lambda_sq != row.r as i64 {
        return Err(fail(format!("λ² = {} instead of {}", cert.lambda_sq, row.r)));
    }
    Ok(cert)
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.bipartite { "bip." } else { "non-bip." };
        let how = match self.source {
            SignedCube(r) => format!("signed cube G{r}"),
            BiplaneSearch => "search on (7,4,2) incidence graph".into(),
            ClebschSearch => "search on Clebsch graph".into(),
            Weighing => format!("weighing matrix ({}, {})", self.n / 2, self.r),
            LtimesK2(b) => format!("{b} ltimes K2"),
        };
        write!(f, "{} n={} r={} {} [{}] {}", self.id, self.n, self.r, kind, self.underlying, how)
    }
}

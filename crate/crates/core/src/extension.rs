//! Induced subgraphs of signed graphs with spectrum `{±λ}` and the vertex
//! extensions that rebuild them.
//!
//! Deleting a vertex from a graph with `A² = λ²I` leaves spectrum
//! `{±λ, 0¹}`; deleting two leaves `{±λ, 0²}` (non-adjacent) or `{±λ, ±1}`
//! (adjacent). Each extension borders `A` with a `{0,±1}` vector read off the
//! Gram residual `M = λ²I − A²`, and every result is re-certified.

use std::fmt;

use rayon::prelude::*;

use crate::graph::{structure_report, GraphError, SignedGraph, UnderlyingGraph};
use crate::linalg::IntMatrix;
use crate::spectral::{
    certify_four_sym, certify_three_sym, certify_three_sym_with, certify_two_sym, Refusal, SpectralCertificate,
};
use crate::switching::{signed_permutation, switching_isomorphic, SwitchingWitness};

/// Removes the vertices in `s`.
pub fn delete_vertices(g: &SignedGraph, s: &[usize]) -> Result<SignedGraph, GraphError> {
    let n = g.n();
    let mut keep = vec![true; n];
    for &v in s {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
        keep[v] = false;
    }
    if !keep.iter().any(|&k| k) {
        return Err(GraphError::Precondition("cannot delete every vertex".into()));
    }
    let kept: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    Ok(g.induced(&kept))
}

/// The five shapes a rank-2 Gram residual can take up to switching isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GramCase {
    /// `O ⊕ J_λ ⊕ J_λ`
    A,
    /// `O ⊕ J_λ ⊕ 2J_{λ/2}`
    B,
    /// `O ⊕ 2J_{λ/2} ⊕ 2J_{λ/2}`
    C,
    /// `O ⊕ [[2,1,1],[1,2,−1],[1,−1,2]] ⊗ J_{λ/3}`
    D,
    /// `O ⊕` the four-block form mixing `2J` and `J` blocks.
    E,
}

impl fmt::Display for GramCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            GramCase::A => 'a',
            GramCase::B => 'b',
            GramCase::C => 'c',
            GramCase::D => 'd',
            GramCase::E => 'e',
        };
        write!(f, "({c})")
    }
}

/// `M = λ²I − A²` with its diagonal statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramResidual {
    pub matrix: IntMatrix,
    pub lambda_sq: i64,
    pub d0: usize,
    pub d1: usize,
    pub d2: usize,
    pub rank: usize,
    /// Set when the residual has rank 2, spectrum `{[c]², 0}` and a diagonal in {0,1,2}.
    pub case_label: Option<GramCase>,
}

impl GramResidual {
    /// Whether every diagonal entry lies in {0, 1, 2}.
    pub fn diagonal_in_range(&self) -> bool {
        self.d0 + self.d1 + self.d2 == self.matrix.n()
    }

    /// The nonzero eigenvalue when `M² = cM` with `tr M = 2c`.
    pub fn rank_two_eigenvalue(&self) -> Option<i64> {
        let tr = self.matrix.trace();
        if self.rank != 2 || tr <= 0 || tr % 2 != 0 {
            return None;
        }
        let c = tr / 2;
        (self.matrix.mul(&self.matrix) == self.matrix.scale(c)).then_some(c)
    }
}

pub fn gram_residual(g: &SignedGraph, lambda_sq: i64) -> GramResidual {
    let a = g.adjacency();
    let m = IntMatrix::scalar(g.n(), lambda_sq).sub(&a.mul(&a));
    let diag = m.diagonal();
    let count = |k: i64| diag.iter().filter(|&&x| x == k).count();
    let mut res = GramResidual {
        rank: m.rank(),
        matrix: m,
        lambda_sq,
        d0: count(0),
        d1: count(1),
        d2: count(2),
        case_label: None,
    };
    if res.diagonal_in_range() {
        res.case_label = classify_gram(&res).ok().map(|c| c.case);
    }
    res
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramClassification {
    pub case: GramCase,
    /// Nonzero eigenvalue `c` of the residual.
    pub eigenvalue: i64,
    pub canonical: IntMatrix,
    /// `witness.apply_matrix(residual) == canonical`.
    pub witness: SwitchingWitness,
}

fn place_block(out: &mut IntMatrix, at: usize, block: &[Vec<i64>], sizes: &[usize]) {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut s = at;
    for &k in sizes {
        starts.push(s);
        s += k;
    }
    for (bi, row) in block.iter().enumerate() {
        for (bj, &v) in row.iter().enumerate() {
            for i in 0..sizes[bi] {
                for j in 0..sizes[bj] {
                    out[(starts[bi] + i, starts[bj] + j)] = v;
                }
            }
        }
    }
}

/// The canonical matrix of `case` with zero block first.
pub fn gram_canonical(case: GramCase, n: usize, c: i64, d1: usize, d2: usize) -> Option<IntMatrix> {
    let c = usize::try_from(c).ok()?;
    let (block, sizes): (Vec<Vec<i64>>, Vec<usize>) = match case {
        GramCase::A => (vec![vec![1, 0], vec![0, 1]], vec![c, c]),
        GramCase::B => {
            if c % 2 != 0 {
                return None;
            }
            (vec![vec![1, 0], vec![0, 2]], vec![c, c / 2])
        }
        GramCase::C => {
            if c % 2 != 0 {
                return None;
            }
            (vec![vec![2, 0], vec![0, 2]], vec![c / 2, c / 2])
        }
        GramCase::D => {
            if c % 3 != 0 {
                return None;
            }
            (vec![vec![2, 1, 1], vec![1, 2, -1], vec![1, -1, 2]], vec![c / 3; 3])
        }
        GramCase::E => {
            if d1 % 2 != 0 || d2 % 2 != 0 {
                return None;
            }
            (
                vec![vec![2, 0, 1, 1], vec![0, 2, 1, -1], vec![1, 1, 1, 0], vec![1, -1, 0, 1]],
                vec![d2 / 2, d2 / 2, d1 / 2, d1 / 2],
            )
        }
    };
    let used: usize = sizes.iter().sum();
    if used > n {
        return None;
    }
    let mut out = IntMatrix::zeros(n);
    place_block(&mut out, n - used, &block, &sizes);
    Some(out)
}

/// Identifies which canonical form a rank-2 residual is switching isomorphic
/// to, with a witness.
pub fn classify_gram(res: &GramResidual) -> Result<GramClassification, ExtensionError> {
    let m = &res.matrix;
    let n = m.n();
    if !res.diagonal_in_range() {
        return Err(ExtensionError::Hypothesis("residual diagonal leaves {0, 1, 2}".into()));
    }
    let c = res.rank_two_eigenvalue().ok_or_else(|| {
        ExtensionError::Hypothesis(format!("residual spectrum is not {{[c]², 0}} (rank {})", res.rank))
    })?;
    let diag = m.diagonal();
    let in_class = |k: i64| -> Vec<usize> { (0..n).filter(|&i| diag[i] == k).collect() };
    let v1 = in_class(1);
    let v2 = in_class(2);
    let case = if v2.iter().any(|&x| v2.iter().any(|&y| m[(x, y)].abs() == 1)) {
        GramCase::D
    } else if v1.iter().any(|&x| v2.iter().any(|&y| m[(x, y)] != 0)) {
        GramCase::E
    } else if v2.is_empty() {
        GramCase::A
    } else if v1.is_empty() {
        GramCase::C
    } else {
        GramCase::B
    };
    let canonical = gram_canonical(case, n, c, res.d1, res.d2)
        .ok_or_else(|| ExtensionError::Internal(format!("case {case} block sizes do not fit c = {c}")))?;
    let witness = signed_permutation(m, &canonical, None)
        .ok_or_else(|| ExtensionError::Internal(format!("residual does not match canonical case {case}")))?;
    debug_assert_eq!(witness.apply_matrix(m), canonical);
    Ok(GramClassification { case, eigenvalue: c, canonical, witness })
}

/// A `{0,±1}` vector used to border an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtensionVector {
    pub x: Vec<i8>,
    pub norm_sq: i64,
}

impl ExtensionVector {
    fn new(x: Vec<i8>) -> Self {
        let norm_sq = x.iter().map(|&v| (v as i64).abs()).sum();
        ExtensionVector { x, norm_sq }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i)
    }
}

/// All nonzero `{0,±1}` vectors in the column space of a rank-2 `M` with
/// `M² = cM`, in increasing order.
pub fn eigenspace_vectors(m: &IntMatrix) -> Vec<ExtensionVector> {
    let n = m.n();
    let col = |j: usize| -> Vec<i128> { (0..n).map(|i| m[(i, j)] as i128).collect() };
    let Some(i) = (0..n).find(|&j| (0..n).any(|k| m[(k, j)] != 0)) else {
        return Vec::new();
    };
    let u = col(i);
    // A second column independent of `u`, with rows p, q making the 2×2 minor nonzero.
    let mut basis = None;
    'outer: for j in i + 1..n {
        let v = col(j);
        for p in 0..n {
            for q in p + 1..n {
                let det = u[p] * v[q] - u[q] * v[p];
                if det != 0 {
                    basis = Some((v, p, q, det));
                    break 'outer;
                }
            }
        }
    }
    let Some((v, p, q, det)) = basis else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for zp in -1i128..=1 {
        for zq in -1i128..=1 {
            if zp == 0 && zq == 0 {
                continue;
            }
            let a = zp * v[q] - zq * v[p];
            let b = u[p] * zq - u[q] * zp;
            let mut z = Vec::with_capacity(n);
            let mut ok = true;
            for k in 0..n {
                let num = a * u[k] + b * v[k];
                if num % det != 0 {
                    ok = false;
                    break;
                }
                let val = num / det;
                if !(-1..=1).contains(&val) {
                    ok = false;
                    break;
                }
                z.push(val as i8);
            }
            if ok {
                out.push(ExtensionVector::new(z));
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("spectrum not certified: {0}")]
    Certificate(Refusal),
    #[error("gram residual is case {0}, which this extension excludes")]
    ExcludedCase(GramCase),
    #[error("gram residual is case {0}, an open case for this extension")]
    OpenCase(GramCase),
    #[error("no admissible extension vector: {0}")]
    NoVector(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<Refusal> for ExtensionError {
    fn from(r: Refusal) -> Self {
        ExtensionError::Certificate(r)
    }
}

/// `[[0, xᵀ], [x, A]]`: the new vertex is 0 and old vertex `v` becomes `v + 1`.
pub fn border(g: &SignedGraph, x: &[i8]) -> SignedGraph {
    let n = g.n();
    assert_eq!(x.len(), n);
    let mut edges: Vec<(usize, usize, i8)> = g.edges().into_iter().map(|(u, v, s)| (u + 1, v + 1, s)).collect();
    edges.extend(x.iter().enumerate().filter(|(_, &s)| s != 0).map(|(v, &s)| (0, v + 1, s)));
    SignedGraph::from_edges(n + 1, &edges).expect("bordering keeps the graph simple")
}

fn check_degrees(g: &SignedGraph, lambda_sq: i64, allowed: &[i64]) -> Result<Vec<usize>, ExtensionError> {
    let degs = g.degrees();
    let ok: Vec<i64> = allowed.iter().map(|&k| lambda_sq - k).collect();
    if let Some((v, d)) = degs.iter().enumerate().find(|(_, &d)| !ok.contains(&(d as i64))) {
        let set: Vec<String> = ok.iter().map(|k| k.to_string()).collect();
        return Err(ExtensionError::Hypothesis(format!(
            "degree condition fails: vertex {v} has degree {d}, allowed {{{}}}",
            set.join(", ")
        )));
    }
    Ok(degs)
}

/// Extends a graph with spectrum `{±λ, 0¹}` and degrees in `{λ², λ²−1}` to
/// one with `A² = λ²I`.
pub fn extend_one_vertex(g: &SignedGraph) -> Result<SignedGraph, ExtensionError> {
    let cert = certify_three_sym(g)?;
    if cert.d != 1 {
        return Err(ExtensionError::Hypothesis(format!("nullity is {}, need 1", cert.d)));
    }
    extend_one_vertex_with(g, cert.lambda_sq)
}

/// As [`extend_one_vertex`] with `λ²` given; admits graphs without eigenvalues `±λ`.
pub fn extend_one_vertex_with(g: &SignedGraph, lambda_sq: i64) -> Result<SignedGraph, ExtensionError> {
    let cert = certify_three_sym_with(g, lambda_sq)?;
    if cert.d != 1 {
        return Err(ExtensionError::Hypothesis(format!("nullity is {}, need 1", cert.d)));
    }
    check_degrees(g, lambda_sq, &[0, 1])?;
    let res = gram_residual(g, lambda_sq);
    let m = &res.matrix;
    if res.d0 + res.d1 != g.n() {
        return Err(ExtensionError::Hypothesis("residual diagonal leaves {0, 1}".into()));
    }
    if res.rank != 1 {
        return Err(ExtensionError::Hypothesis(format!("residual has rank {}, need 1", res.rank)));
    }
    let n = g.n();
    let i0 = (0..n).find(|&i| m[(i, i)] == 1).expect("rank 1 with diagonal in {0,1}");
    let x: Vec<i8> = (0..n).map(|j| m[(i0, j)] as i8).collect();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != (x[i] as i64) * (x[j] as i64) {
                return Err(ExtensionError::Internal(format!("residual is not x·xᵀ at ({i}, {j})")));
            }
        }
    }
    let h = border(g, &x);
    let out = certify_two_sym(&h)?;
    if out.lambda_sq != lambda_sq {
        return Err(ExtensionError::Internal(format!("extension has λ² = {}", out.lambda_sq)));
    }
    Ok(h)
}

fn degree_classes(g: &SignedGraph, lambda_sq: i64) -> [usize; 3] {
    let mut k = [0usize; 3];
    for d in g.degrees() {
        let gap = lambda_sq - d as i64;
        if (0..3).contains(&gap) {
            k[gap as usize] += 1;
        }
    }
    k
}

fn verify_one_zero(h: &SignedGraph, lambda_sq: i64) -> Result<SpectralCertificate, ExtensionError> {
    let cert = certify_three_sym_with(h, lambda_sq)?;
    if cert.d != 1 {
        return Err(ExtensionError::Internal(format!("extension has nullity {}", cert.d)));
    }
    check_degrees(h, lambda_sq, &[0, 1])?;
    Ok(cert)
}

/// Extends a graph with spectrum `{±λ, ±1}` and degrees in
/// `{λ², λ²−1, λ²−2}`, at least one `λ²−1`, to spectrum `{±λ, 0¹}`.
pub fn extend_four_to_three(g: &SignedGraph) -> Result<SignedGraph, ExtensionError> {
    let cert = certify_four_sym(g)?;
    if cert.mu_sq != Some(1) {
        return Err(ExtensionError::Hypothesis(format!("μ² = {:?}, need 1", cert.mu_sq)));
    }
    extend_four_to_three_with(g, cert.lambda_sq)
}

/// As [`extend_four_to_three`] with `λ²` given.
pub fn extend_four_to_three_with(g: &SignedGraph, lambda_sq: i64) -> Result<SignedGraph, ExtensionError> {
    check_degrees(g, lambda_sq, &[0, 1, 2])?;
    if degree_classes(g, lambda_sq)[1] == 0 {
        return Err(ExtensionError::Hypothesis(format!("no vertex of degree λ²−1 = {}", lambda_sq - 1)));
    }
    let res = gram_residual(g, lambda_sq);
    let target = lambda_sq - 1;
    if res.rank_two_eigenvalue() != Some(target) {
        return Err(ExtensionError::Hypothesis(format!("residual spectrum is not {{[{target}]², 0}}")));
    }
    let class = classify_gram(&res)?;
    match class.case {
        GramCase::D => return Err(ExtensionError::OpenCase(GramCase::D)),
        GramCase::B | GramCase::C => return Err(ExtensionError::ExcludedCase(class.case)),
        GramCase::A | GramCase::E => {}
    }
    let a = g.adjacency();
    let space = eigenspace_vectors(&res.matrix);
    for x in space.iter().filter(|v| v.norm_sq == target) {
        let ax: Vec<i64> = a.mul_vec(&x.x.iter().map(|&v| v as i64).collect::<Vec<_>>());
        if ax.iter().any(|v| v.abs() > 1) || ax.iter().all(|&v| v == 0) {
            continue;
        }
        let y: Vec<i8> = ax.iter().map(|&v| v as i8).collect();
        let dot: i64 = x.x.iter().zip(&y).map(|(&p, &q)| (p * q) as i64).sum();
        if dot != 0 || !space.iter().any(|s| s.x == y) {
            continue;
        }
        let h = border(g, &x.x);
        if verify_one_zero(&h, lambda_sq).is_ok() {
            return Ok(h);
        }
    }
    Err(ExtensionError::NoVector(format!("case {} has no x with xᵀx = {target} and Ax ⟂ x", class.case)))
}

/// Extends a graph with spectrum `{±λ, 0²}` and degrees in
/// `{λ², λ²−1, λ²−2}`, at least `λ²+1` of degree `λ²−1`, to spectrum `{±λ, 0¹}`.
pub fn extend_zero_pair(g: &SignedGraph) -> Result<SignedGraph, ExtensionError> {
    let cert = certify_three_sym(g)?;
    if cert.d != 2 {
        return Err(ExtensionError::Hypothesis(format!("nullity is {}, need 2", cert.d)));
    }
    extend_zero_pair_with(g, cert.lambda_sq)
}

/// As [`extend_zero_pair`] with `λ²` given.
pub fn extend_zero_pair_with(g: &SignedGraph, lambda_sq: i64) -> Result<SignedGraph, ExtensionError> {
    zero_pair(g, lambda_sq, true)
}

/// Zero-pair extension without the degree-count hypothesis and without
/// excluding any residual case: succeeds whenever some `x` with `xᵀx = λ²`
/// covering the degree-(λ²−2) vertices yields a certified result.
pub fn extend_zero_pair_relaxed_with(g: &SignedGraph, lambda_sq: i64) -> Result<SignedGraph, ExtensionError> {
    zero_pair(g, lambda_sq, false)
}

fn zero_pair(g: &SignedGraph, lambda_sq: i64, strict: bool) -> Result<SignedGraph, ExtensionError> {
    let cert = certify_three_sym_with(g, lambda_sq)?;
    if cert.d != 2 {
        return Err(ExtensionError::Hypothesis(format!("nullity is {}, need 2", cert.d)));
    }
    check_degrees(g, lambda_sq, &[0, 1, 2])?;
    let res = gram_residual(g, lambda_sq);
    if res.rank_two_eigenvalue() != Some(lambda_sq) {
        return Err(ExtensionError::Hypothesis(format!("residual spectrum is not {{[{lambda_sq}]², 0}}")));
    }
    let class = classify_gram(&res)?;
    if strict {
        match class.case {
            GramCase::D => return Err(ExtensionError::ExcludedCase(GramCase::D)),
            GramCase::B => return Err(ExtensionError::ExcludedCase(GramCase::B)),
            _ => {}
        }
        let k = degree_classes(g, lambda_sq)[1];
        if (k as i64) < lambda_sq + 1 {
            return Err(ExtensionError::Hypothesis(format!(
                "{k} vertices of degree λ²−1, need at least λ²+1 = {}",
                lambda_sq + 1
            )));
        }
    }
    let diag = res.matrix.diagonal();
    let v2: Vec<usize> = (0..g.n()).filter(|&i| diag[i] == 2).collect();
    for x in eigenspace_vectors(&res.matrix).iter().filter(|v| v.norm_sq == lambda_sq) {
        if v2.iter().any(|&i| x.x[i] == 0) {
            continue;
        }
        let h = border(g, &x.x);
        if verify_one_zero(&h, lambda_sq).is_ok() {
            return Ok(h);
        }
    }
    Err(ExtensionError::NoVector(format!(
        "case {} has no x with xᵀx = {lambda_sq} covering the degree-{} vertices",
        class.case,
        lambda_sq - 2
    )))
}

/// For a constant-diagonal matrix with off-diagonal entries in {0, ±2} and
/// spectrum `{[c]², 0}`: confirms it is switching isomorphic to
/// `2J_{n/2} ⊕ 2J_{n/2}` with `c = n`.
pub fn classify_constant_diag_gram(m: &IntMatrix) -> Result<(i64, SwitchingWitness), ExtensionError> {
    let n = m.n();
    let hyp = |s: String| Err(ExtensionError::Hypothesis(s));
    if n < 3 {
        return hyp(format!("order {n} < 3"));
    }
    if !m.is_symmetric() {
        return hyp("matrix is not symmetric".into());
    }
    let d = m[(0, 0)];
    if m.diagonal().iter().any(|&x| x != d) {
        return hyp("diagonal is not constant".into());
    }
    if let Some((i, j)) =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && ![0, 2, -2].contains(&m[(i, j)]))
    {
        return hyp(format!("off-diagonal entry {} at ({i}, {j}) is not 0 or ±2", m[(i, j)]));
    }
    if d != 2 {
        return hyp(format!("diagonal entries are {d}; a singular 3×3 principal submatrix forces 2"));
    }
    let res = GramResidual {
        matrix: m.clone(),
        lambda_sq: 0,
        d0: 0,
        d1: 0,
        d2: n,
        rank: m.rank(),
        case_label: None,
    };
    let Some(c) = res.rank_two_eigenvalue() else {
        return hyp(format!("spectrum is not {{[c]², 0}} (rank {})", res.rank));
    };
    let class = classify_gram(&res)?;
    if class.case != GramCase::C || c != n as i64 {
        return Err(ExtensionError::Internal(format!("classified as case {} with c = {c}", class.case)));
    }
    Ok((c, class.witness))
}

/// Outcome of checking a signed (0,2)-graph against the small-spectrum classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallSpectrumVerdict {
    /// Spectrum `{±λ, 0^d}`, `d > 0`; `holds` is whether the underlying graph is `K₂,₂`.
    ThreeSym { holds: bool, certificate: SpectralCertificate },
    /// Spectrum `{±λ^m, ±μ^1}`, `1 ≤ μ < λ`; `holds` is whether the underlying graph is `K₄`.
    FourSym { holds: bool, certificate: SpectralCertificate },
    /// Spectrum `{±λ, ±μ}` with `μ` of multiplicity above 1 (the 3-cube, for one).
    /// No classification covers these.
    FourSymHighMultiplicity(SpectralCertificate),
    OutOfScope,
}

impl SmallSpectrumVerdict {
    pub fn is_falsification(&self) -> bool {
        matches!(
            self,
            SmallSpectrumVerdict::ThreeSym { holds: false, .. } | SmallSpectrumVerdict::FourSym { holds: false, .. }
        )
    }
}

impl fmt::Display for SmallSpectrumVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallSpectrumVerdict::ThreeSym { holds, certificate } => {
                write!(f, "{certificate}: underlying K2,2 {}", if *holds { "holds" } else { "FAILS" })
            }
            SmallSpectrumVerdict::FourSym { holds, certificate } => {
                write!(f, "{certificate}: underlying K4 {}", if *holds { "holds" } else { "FAILS" })
            }
            SmallSpectrumVerdict::FourSymHighMultiplicity(c) => write!(f, "{c}: ±μ not simple, out of scope"),
            SmallSpectrumVerdict::OutOfScope => write!(f, "outside the classification"),
        }
    }
}

pub fn classify_small_spectrum_02graph(g: &SignedGraph) -> Result<SmallSpectrumVerdict, GraphError> {
    let report = structure_report(g);
    if !report.zero_two {
        return Err(GraphError::Precondition("not a connected (0,2)-graph".into()));
    }
    let n = g.n();
    if let Ok(certificate) = certify_three_sym(g) {
        let holds = n == 4 && report.degree == Some(2) && report.bipartite;
        return Ok(SmallSpectrumVerdict::ThreeSym { holds, certificate });
    }
    if let Ok(certificate) = certify_four_sym(g) {
        if certificate.m_mu != 1 {
            return Ok(SmallSpectrumVerdict::FourSymHighMultiplicity(certificate));
        }
        let holds = n == 4 && report.degree == Some(3);
        return Ok(SmallSpectrumVerdict::FourSym { holds, certificate });
    }
    Ok(SmallSpectrumVerdict::OutOfScope)
}

/// Connected graphs on `n` vertices in which every pair of distinct vertices
/// has 0 or 2 common neighbours, one per isomorphism class.
pub fn zero_two_graphs(n: usize) -> Vec<UnderlyingGraph> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![UnderlyingGraph::empty(1)];
    }
    let mut found: Vec<UnderlyingGraph> = Vec::new();
    for d in 1..n {
        let mut adj = vec![vec![false; n]; n];
        for v in 1..=d {
            adj[0][v] = true;
            adj[v][0] = true;
        }
        let mut codeg = vec![vec![0u8; n]; n];
        for a in 1..=d {
            for b in 1..=d {
                if a != b {
                    codeg[a][b] += 1;
                }
            }
        }
        let mut deg = vec![0usize; n];
        deg[0] = d;
        for v in deg.iter_mut().take(d + 1).skip(1) {
            *v = 1;
        }
        let mut gen = ZeroTwoGen { n, d, adj, codeg, deg, out: &mut found };
        gen.fill(1, 2);
    }
    let mut classes: Vec<UnderlyingGraph> = Vec::new();
    for g in found {
        let s = g.to_signed();
        let dup = classes.iter().any(|h| {
            h.edge_count() == g.edge_count()
                && sorted(h.degrees()) == sorted(g.degrees())
                && switching_isomorphic(&h.to_signed(), &s).ok().flatten().is_some()
        });
        if !dup {
            classes.push(g);
        }
    }
    classes
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

struct ZeroTwoGen<'a> {
    n: usize,
    d: usize,
    adj: Vec<Vec<bool>>,
    codeg: Vec<Vec<u8>>,
    deg: Vec<usize>,
    out: &'a mut Vec<UnderlyingGraph>,
}

impl ZeroTwoGen<'_> {
    /// Decides entry `(i, j)`, `i < j`, row-major over rows `1..n`.
    fn fill(&mut self, i: usize, j: usize) {
        let n = self.n;
        if j == n {
            // Row i is final: codegrees with every earlier vertex are settled.
            if (0..i).any(|k| !matches!(self.codeg[i][k], 0 | 2)) {
                return;
            }
            if i + 1 == n {
                self.emit();
            } else {
                self.fill(i + 1, i + 2);
            }
            return;
        }
        self.fill(i, j + 1);
        if self.deg[i] < self.d && self.deg[j] < self.d {
            if self.add_edge(i, j) {
                self.fill(i, j + 1);
            }
            self.remove_edge(i, j);
        }
    }

    fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.adj[u][v] = true;
        self.adj[v][u] = true;
        self.deg[u] += 1;
        self.deg[v] += 1;
        let mut ok = true;
        for w in 0..self.n {
            if w != u && self.adj[v][w] {
                self.codeg[u][w] += 1;
                self.codeg[w][u] += 1;
                ok &= self.codeg[u][w] <= 2;
            }
            if w != v && self.adj[u][w] {
                self.codeg[v][w] += 1;
                self.codeg[w][v] += 1;
                ok &= self.codeg[v][w] <= 2;
            }
        }
        ok
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        for w in 0..self.n {
            if w != u && self.adj[v][w] {
                self.codeg[u][w] -= 1;
                self.codeg[w][u] -= 1;
            }
            if w != v && self.adj[u][w] {
                self.codeg[v][w] -= 1;
                self.codeg[w][v] -= 1;
            }
        }
        self.adj[u][v] = false;
        self.adj[v][u] = false;
        self.deg[u] -= 1;
        self.deg[v] -= 1;
    }

    fn emit(&mut self) {
        let n = self.n;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.adj[u][v] {
                    edges.push((u, v));
                }
            }
        }
        let g = UnderlyingGraph::from_edges(n, &edges).expect("simple");
        if g.is_connected() {
            self.out.push(g);
        }
    }
}

/// One switching class representative per signing of `g`: a BFS tree is
/// kept positive and the remaining edges take every sign pattern.
pub fn signings_up_to_switching(g: &UnderlyingGraph) -> Vec<SignedGraph> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let order = g.bfs_order(0);
    let mut seen = vec![false; n];
    seen[0] = true;
    for &u in &order {
        for v in g.neighbours(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
            }
        }
    }
    let edges = g.edges();
    let is_tree = |&(u, v): &(usize, usize)| parent[v] == u || parent[u] == v;
    let free: Vec<usize> = (0..edges.len()).filter(|&e| !is_tree(&edges[e])).collect();
    assert!(free.len() < 40, "too many signings to enumerate");
    (0u64..1 << free.len())
        .map(|mask| {
            let mut signs = vec![1i8; edges.len()];
            for (b, &e) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    signs[e] = -1;
                }
            }
            let es: Vec<(usize, usize, i8)> = edges.iter().zip(&signs).map(|(&(u, v), &s)| (u, v, s)).collect();
            SignedGraph::from_edges(n, &es).expect("simple")
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct FalsificationReport {
    pub graphs: usize,
    pub signings: usize,
    pub three_sym: usize,
    pub four_sym: usize,
    /// `{±λ, ±μ}` spectra where `±μ` is not simple; outside the classification.
    pub four_sym_high_multiplicity: usize,
    /// Signed graphs whose verdict contradicts the classification.
    pub events: Vec<SignedGraph>,
}

/// Checks every signing (up to switching) of every connected (0,2)-graph on
/// at most `max_n` vertices.
pub fn falsification_suite(max_n: usize) -> FalsificationReport {
    let mut report = FalsificationReport::default();
    for n in 1..=max_n {
        for g in zero_two_graphs(n) {
            report.graphs += 1;
            let signings = signings_up_to_switching(&g);
            report.signings += signings.len();
            let verdicts: Vec<(SignedGraph, SmallSpectrumVerdict)> = signings
                .into_par_iter()
                .map(|s| {
                    let v = classify_small_spectrum_02graph(&s).expect("(0,2)-graph by construction");
                    (s, v)
                })
                .collect();
            for (s, v) in verdicts {
                match v {
                    SmallSpectrumVerdict::ThreeSym { .. } => report.three_sym += 1,
                    SmallSpectrumVerdict::FourSym { .. } => report.four_sym += 1,
                    SmallSpectrumVerdict::FourSymHighMultiplicity(_) => report.four_sym_high_multiplicity += 1,
                    SmallSpectrumVerdict::OutOfScope => {}
                }
                if v.is_falsification() {
                    report.events.push(s);
                }
            }
        }
    }
    report
}

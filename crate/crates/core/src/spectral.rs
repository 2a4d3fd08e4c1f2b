//! Exact spectral certificates and necessary-condition filters.
//!
//! Every certificate is backed by an exact matrix identity (`A^2 = λ²I`,
//! `A^3 = λ²A` or `(A^2 - λ²I)(A^2 - μ²I) = 0`) together with exact ranks for
//! the multiplicities. The characteristic polynomial stored in a certificate
//! follows from that identity and the multiplicities, so large graphs do not
//! pay for a full characteristic polynomial computation.

use std::fmt;

use num_integer::Roots;

use crate::graph::{structure_report, SignedGraph};
use crate::linalg::{IntMatrix, IntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    TwoSym,
    ThreeSym,
    FourSym,
    Other,
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpectrumKind::TwoSym => "TwoSym",
            SpectrumKind::ThreeSym => "ThreeSym",
            SpectrumKind::FourSym => "FourSym",
            SpectrumKind::Other => "Other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralCertificate {
    pub kind: SpectrumKind,
    pub lambda_sq: i64,
    /// Only for `FourSym`.
    pub mu_sq: Option<i64>,
    /// Multiplicity of each of `λ` and `-λ`.
    pub m: usize,
    /// Multiplicity of each of `μ` and `-μ` (`FourSym` only, else 0).
    pub m_mu: usize,
    /// Nullity of the adjacency matrix.
    pub d: usize,
    pub charpoly: IntPoly,
}

impl fmt::Display for SpectralCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpectrumKind::TwoSym => write!(f, "TwoSym λ²={} m={}", self.lambda_sq, self.m),
            SpectrumKind::ThreeSym => {
                write!(f, "ThreeSym λ²={} m={} d={}", self.lambda_sq, self.m, self.d)
            }
            SpectrumKind::FourSym => write!(
                f,
                "FourSym λ²={} μ²={} m={} m_μ={}",
                self.lambda_sq,
                self.mu_sq.unwrap_or(0),
                self.m,
                self.m_mu
            ),
            SpectrumKind::Other => write!(f, "Other charpoly={}", self.charpoly),
        }
    }
}

/// Why a certificate could not be issued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refusal {
    pub reason: String,
    /// First matrix entry violating the tested identity, when there is one.
    pub entry: Option<(usize, usize)>,
}

impl Refusal {
    fn new(reason: impl Into<String>) -> Self {
        Refusal { reason: reason.into(), entry: None }
    }

    fn at(reason: impl Into<String>, entry: (usize, usize)) -> Self {
        Refusal { reason: reason.into(), entry: Some(entry) }
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.entry {
            Some((i, j)) => write!(f, "{} (entry {},{})", self.reason, i, j),
            None => f.write_str(&self.reason),
        }
    }
}

impl std::error::Error for Refusal {}

/// Exact characteristic polynomial of the adjacency matrix.
pub fn char_poly(g: &SignedGraph) -> IntPoly {
    g.adjacency().charpoly()
}

fn sym_poly(lambda_sq: i64, m: usize, mu_sq: i64, m_mu: usize, d: usize) -> IntPoly {
    IntPoly::x2_minus(lambda_sq)
        .pow(m)
        .mul(&IntPoly::x2_minus(mu_sq).pow(m_mu))
        .mul(&IntPoly::x().pow(d))
}

/// Certificate for spectrum `{[-λ]^m, [λ]^m}` with `λ² = r`.
pub fn certify_two_sym(g: &SignedGraph) -> Result<SpectralCertificate, Refusal> {
    let report = structure_report(g);
    let Some(r) = report.degree else {
        return Err(Refusal::new(
            "not regular: a graph with A² = λ²I has every degree equal to λ²",
        ));
    };
    let a = g.adjacency();
    let a2 = a.mul(&a);
    let target = IntMatrix::scalar(g.n(), r as i64);
    if let Some(e) = a2.first_difference(&target) {
        return Err(Refusal::at(format!("A² ≠ {r}I"), e));
    }
    let n = g.n();
    if n > 0 && r == 0 {
        return Err(Refusal::new("edgeless graph: A = 0"));
    }
    Ok(SpectralCertificate {
        kind: SpectrumKind::TwoSym,
        lambda_sq: r as i64,
        mu_sq: None,
        m: n / 2,
        m_mu: 0,
        d: 0,
        charpoly: sym_poly(r as i64, n / 2, 0, 0, 0),
    })
}

/// Certificate for spectrum `{[-λ]^m, [0]^d, [λ]^m}` with `d ≥ 1`, `m ≥ 1`.
///
/// `λ²` is recovered as `tr(A⁴) / tr(A²)`.
pub fn certify_three_sym(g: &SignedGraph) -> Result<SpectralCertificate, Refusal> {
    let a = g.adjacency();
    let a2 = a.mul(&a);
    let tr2 = a2.trace();
    if tr2 == 0 {
        return Err(Refusal::new("no edges: spectrum is {0}"));
    }
    let tr4: i64 = a2.as_slice().iter().map(|x| x * x).sum();
    if tr4 % tr2 != 0 {
        return Err(Refusal::new(format!("tr(A⁴)/tr(A²) = {tr4}/{tr2} is not an integer")));
    }
    let cert = three_sym_identity(g, &a, &a2, tr4 / tr2)?;
    if cert.m == 0 {
        return Err(Refusal::new("no eigenvalue ±λ"));
    }
    Ok(cert)
}

/// Like [`certify_three_sym`] but with `λ²` supplied, so that degenerate
/// graphs (for instance edgeless ones, `m = 0`) can be certified.
pub fn certify_three_sym_with(g: &SignedGraph, lambda_sq: i64) -> Result<SpectralCertificate, Refusal> {
    if lambda_sq < 1 {
        return Err(Refusal::new("λ² must be positive"));
    }
    let a = g.adjacency();
    let a2 = a.mul(&a);
    three_sym_identity(g, &a, &a2, lambda_sq)
}

fn three_sym_identity(
    g: &SignedGraph,
    a: &IntMatrix,
    a2: &IntMatrix,
    lambda_sq: i64,
) -> Result<SpectralCertificate, Refusal> {
    let n = g.n();
    if a2.as_scalar() == Some(lambda_sq) {
        return Err(Refusal::new(format!("A² = {lambda_sq}I: two eigenvalues, not three")));
    }
    let a3 = a2.mul(a);
    if let Some(e) = a3.first_difference(&a.scale(lambda_sq)) {
        return Err(Refusal::at(format!("A³ ≠ {lambda_sq}A"), e));
    }
    let rank = a.rank();
    debug_assert_eq!(rank % 2, 0, "trace zero forces ±λ to pair up");
    let m = rank / 2;
    let d = n - rank;
    Ok(SpectralCertificate {
        kind: SpectrumKind::ThreeSym,
        lambda_sq,
        mu_sq: None,
        m,
        m_mu: 0,
        d,
        charpoly: sym_poly(lambda_sq, m, 0, 0, d),
    })
}

/// Certificate for spectrum `{[±λ]^m, [±μ]^{m_μ}}` with `λ² > μ² ≥ 1`, both
/// multiplicities positive.
pub fn certify_four_sym(g: &SignedGraph) -> Result<SpectralCertificate, Refusal> {
    let n = g.n();
    if n == 0 {
        return Err(Refusal::new("empty graph"));
    }
    let a = g.adjacency();
    let b = a.mul(&a);
    let b2 = b.mul(&b);

    // B² = sB - pI: read s off a nonzero off-diagonal entry of B.
    let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && b[(i, j)] != 0);
    let (s, p) = match off {
        Some((i, j)) => {
            if b2[(i, j)] % b[(i, j)] != 0 {
                return Err(Refusal::at("A⁴ is not a combination of A² and I", (i, j)));
            }
            let s = b2[(i, j)] / b[(i, j)];
            (s, s * b[(0, 0)] - b2[(0, 0)])
        }
        None => {
            let mut diag = b.diagonal();
            diag.sort_unstable();
            diag.dedup();
            if diag.len() != 2 {
                return Err(Refusal::new(format!(
                    "A² is diagonal with {} distinct values, need 2",
                    diag.len()
                )));
            }
            (diag[0] + diag[1], diag[0] * diag[1])
        }
    };
    let target = b.scale(s).sub(&IntMatrix::scalar(n, p));
    if let Some(e) = b2.first_difference(&target) {
        return Err(Refusal::at(format!("A⁴ ≠ {s}A² - {p}I"), e));
    }
    let disc = s * s - 4 * p;
    if disc <= 0 {
        return Err(Refusal::new("A² has a single eigenvalue"));
    }
    let root = disc.sqrt();
    if root * root != disc || (s + root) % 2 != 0 {
        return Err(Refusal::new(format!("roots of t² - {s}t + {p} are not integers")));
    }
    let (l, u) = ((s + root) / 2, (s - root) / 2);
    if u < 1 {
        return Err(Refusal::new("μ² = 0: use the three-eigenvalue certificate"));
    }
    let cert = four_sym_multiplicities(&a, &b, l, u)?;
    if cert.m == 0 || cert.m_mu == 0 {
        return Err(Refusal::new("one of the eigenvalue pairs is absent"));
    }
    Ok(cert)
}

/// Like [`certify_four_sym`] with `λ²` and `μ²` supplied; multiplicities may be 0.
pub fn certify_four_sym_with(
    g: &SignedGraph,
    lambda_sq: i64,
    mu_sq: i64,
) -> Result<SpectralCertificate, Refusal> {
    if !(lambda_sq > mu_sq && mu_sq >= 1) {
        return Err(Refusal::new("need λ² > μ² ≥ 1"));
    }
    let a = g.adjacency();
    let b = a.mul(&a);
    let n = g.n();
    let lhs = b.sub(&IntMatrix::scalar(n, lambda_sq)).mul(&b.sub(&IntMatrix::scalar(n, mu_sq)));
    if let Some(e) = lhs.first_difference(&IntMatrix::zeros(n)) {
        return Err(Refusal::at(format!("(A² - {lambda_sq}I)(A² - {mu_sq}I) ≠ 0"), e));
    }
    four_sym_multiplicities(&a, &b, lambda_sq, mu_sq)
}

fn four_sym_multiplicities(
    a: &IntMatrix,
    b: &IntMatrix,
    l: i64,
    u: i64,
) -> Result<SpectralCertificate, Refusal> {
    let n = a.n();
    // With tr A = 0 and tr A³ = 0 the signed multiplicity differences vanish.
    let tr3: i64 = (0..n).map(|i| (0..n).map(|k| b[(i, k)] * a[(k, i)]).sum::<i64>()).sum();
    if tr3 != 0 {
        return Err(Refusal::new(format!("tr(A³) = {tr3}: spectrum is not symmetric")));
    }
    let mult_l = n - b.sub(&IntMatrix::scalar(n, l)).rank();
    let mult_u = n - b.sub(&IntMatrix::scalar(n, u)).rank();
    if mult_l % 2 != 0 || mult_u % 2 != 0 || mult_l + mult_u != n {
        return Err(Refusal::new("eigenvalue multiplicities are inconsistent with a symmetric spectrum"));
    }
    Ok(SpectralCertificate {
        kind: SpectrumKind::FourSym,
        lambda_sq: l,
        mu_sq: Some(u),
        m: mult_l / 2,
        m_mu: mult_u / 2,
        d: 0,
        charpoly: sym_poly(l, mult_l / 2, u, mult_u / 2, 0),
    })
}

/// Strongest certificate that applies, falling back to `Other` with the
/// computed characteristic polynomial.
pub fn best_certificate(g: &SignedGraph) -> SpectralCertificate {
    if let Ok(c) = certify_two_sym(g) {
        return c;
    }
    if let Ok(c) = certify_three_sym(g) {
        return c;
    }
    if let Ok(c) = certify_four_sym(g) {
        return c;
    }
    SpectralCertificate {
        kind: SpectrumKind::Other,
        lambda_sq: 0,
        mu_sq: None,
        m: 0,
        m_mu: 0,
        d: g.n() - g.adjacency().rank(),
        charpoly: char_poly(g),
    }
}

pub fn sum_of_two_squares(k: u64) -> bool {
    let mut a = 0u64;
    while a * a <= k {
        let rest = k - a * a;
        let b = rest.sqrt();
        if b * b == rest {
            return true;
        }
        a += 1;
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterCondition {
    Bound,
    QuadrangleIntegrality,
    SumOfTwoSquares,
    Mod4,
    /// Bipartite halves of odd order need the weight to be a square.
    Square,
    /// Bipartite halves of odd order `h` need `h ≤ (h - r)² + h - r + 1`.
    OddOrderBound,
    /// Bipartite graphs have an even number of vertices.
    Parity,
    TraceCube,
    TraceFourth,
    QuadrangleCount,
}

impl FilterCondition {
    pub fn name(self) -> &'static str {
        match self {
            FilterCondition::Bound => "bound",
            FilterCondition::QuadrangleIntegrality => "quadrangle-integrality",
            FilterCondition::SumOfTwoSquares => "sum-of-two-squares",
            FilterCondition::Mod4 => "mod-4",
            FilterCondition::Square => "square",
            FilterCondition::OddOrderBound => "odd-order-bound",
            FilterCondition::Parity => "parity",
            FilterCondition::TraceCube => "trace-cube",
            FilterCondition::TraceFourth => "trace-fourth",
            FilterCondition::QuadrangleCount => "quadrangle-count",
        }
    }
}

impl fmt::Display for FilterCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterVerdict {
    pub passed: bool,
    pub failures: Vec<FilterCondition>,
}

impl FilterVerdict {
    fn from_failures(mut failures: Vec<FilterCondition>) -> Self {
        failures.dedup();
        FilterVerdict { passed: failures.is_empty(), failures }
    }
}

impl fmt::Display for FilterVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return f.write_str("PASS");
        }
        let names: Vec<_> = self.failures.iter().map(|c| c.name()).collect();
        write!(f, "FAIL {}", names.join(" "))
    }
}

fn binom2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Necessary conditions for an `(n, r)` signed rectagraph with `A² = rI`.
pub fn filter_sr2se(n: u64, r: u64, bipartite: bool) -> FilterVerdict {
    let mut failures = Vec::new();
    if n < binom2(r + 1) + 1 {
        failures.push(FilterCondition::Bound);
    }
    if (n * binom2(r)) % 4 != 0 {
        failures.push(FilterCondition::QuadrangleIntegrality);
    }
    if n % 4 == 2 {
        if !sum_of_two_squares(r) {
            failures.push(FilterCondition::SumOfTwoSquares);
        }
        if (r * r.saturating_sub(1)) % 4 != 0 {
            failures.push(FilterCondition::Mod4);
        }
    }
    if bipartite {
        if n % 2 != 0 {
            failures.push(FilterCondition::Parity);
        } else {
            let h = n / 2;
            if h < binom2(r) + 1 {
                failures.push(FilterCondition::Bound);
            }
            if h % 2 == 1 {
                let s = r.sqrt();
                if s * s != r {
                    failures.push(FilterCondition::Square);
                }
                let t = h.saturating_sub(r);
                if h > t * t + t + 1 {
                    failures.push(FilterCondition::OddOrderBound);
                }
                if (r * r.saturating_sub(1)) % 4 != 0 {
                    failures.push(FilterCondition::Mod4);
                }
            }
            if h % 4 == 2 && !sum_of_two_squares(r) {
                failures.push(FilterCondition::SumOfTwoSquares);
            }
        }
    }
    let mut seen = Vec::new();
    failures.retain(|c| {
        let fresh = !seen.contains(c);
        seen.push(*c);
        fresh
    });
    FilterVerdict::from_failures(failures)
}

/// `tr(A_G³)`, `tr(A_G⁴)` of the underlying graph and the value `nr(3r - 2)`
/// that `tr(A_G⁴)` takes for the underlying graph of a signed rectagraph
/// with `A² = rI`.
pub fn trace_identities(g: &SignedGraph) -> Result<(i64, i64, i64), Refusal> {
    let Some(r) = structure_report(g).degree else {
        return Err(Refusal::new("trace identities need a regular graph"));
    };
    let a = g.support().adjacency();
    let a2 = a.mul(&a);
    let tr3: i64 = (0..a.n()).map(|i| (0..a.n()).map(|k| a2[(i, k)] * a[(k, i)]).sum::<i64>()).sum();
    let tr4: i64 = a2.as_slice().iter().map(|x| x * x).sum();
    let (n, r) = (g.n() as i64, r as i64);
    Ok((tr3, tr4, n * r * (3 * r - 2)))
}

/// [`filter_sr2se`] plus the trace and quadrangle conditions evaluated on an
/// actual underlying graph.
pub fn filter_graph(g: &SignedGraph) -> FilterVerdict {
    let report = structure_report(g);
    let Some(r) = report.degree else {
        return FilterVerdict::from_failures(vec![FilterCondition::Bound]);
    };
    let n = g.n() as u64;
    let mut failures = filter_sr2se(n, r as u64, report.bipartite).failures;
    if let Ok((tr3, tr4, expected)) = trace_identities(g) {
        if tr3 != 0 {
            failures.push(FilterCondition::TraceCube);
        }
        if tr4 != expected {
            failures.push(FilterCondition::TraceFourth);
        }
    }
    if 4 * report.quadrangle_count != n * binom2(r as u64) {
        failures.push(FilterCondition::QuadrangleCount);
    }
    FilterVerdict::from_failures(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UnderlyingGraph;

    fn c4(neg: bool) -> SignedGraph {
        SignedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, if neg { -1 } else { 1 }), (0, 3, 1)])
            .unwrap()
    }

    fn tetrahedron() -> SignedGraph {
        let e = [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, -1)];
        SignedGraph::from_edges(4, &e).unwrap()
    }

    #[test]
    fn two_sym_on_4_cycles() {
        let c = certify_two_sym(&c4(true)).unwrap();
        assert_eq!((c.lambda_sq, c.m), (2, 2));
        assert_eq!(c.charpoly, char_poly(&c4(true)));
        let refused = certify_two_sym(&c4(false)).unwrap_err();
        assert_eq!(refused.entry, Some((0, 2)));
    }

    #[test]
    fn three_sym_on_positive_4_cycle() {
        let c = certify_three_sym(&c4(false)).unwrap();
        assert_eq!((c.lambda_sq, c.m, c.d), (4, 1, 2));
        assert_eq!(c.charpoly, char_poly(&c4(false)));
        assert!(certify_three_sym(&c4(true)).is_err());
    }

    #[test]
    fn four_sym_on_tetrahedron() {
        let t = tetrahedron();
        let c = certify_four_sym(&t).unwrap();
        assert_eq!((c.lambda_sq, c.mu_sq, c.m, c.m_mu), (5, Some(1), 1, 1));
        assert_eq!(char_poly(&t), IntPoly::x2_minus(1).mul(&IntPoly::x2_minus(5)));
        assert_eq!(c.charpoly, char_poly(&t));
    }

    #[test]
    fn four_sym_refuses_asymmetric_spectrum() {
        // All-positive K4 has spectrum {3, -1, -1, -1}.
        let k4 = UnderlyingGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap()
            .to_signed();
        assert!(certify_four_sym(&k4).is_err());
        assert_eq!(best_certificate(&k4).kind, SpectrumKind::Other);
    }

    #[test]
    fn char_poly_small() {
        let k2 = SignedGraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(char_poly(&k2), IntPoly::x2_minus(1));
        assert_eq!(char_poly(&SignedGraph::empty(3)), IntPoly::x().pow(3));
    }

    #[test]
    fn sums_of_two_squares() {
        let expect = [0, 1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25];
        for k in 0..=25 {
            assert_eq!(sum_of_two_squares(k), expect.contains(&k), "k = {k}");
        }
    }

    #[test]
    fn filter_examples() {
        let v = filter_sr2se(36, 6, true);
        assert!(v.failures.contains(&FilterCondition::SumOfTwoSquares));
        assert!(filter_sr2se(16, 5, false).passed);
        assert_eq!(filter_sr2se(10, 5, false).failures, vec![FilterCondition::Bound]);
        assert_eq!(filter_sr2se(36, 6, true).to_string(), "FAIL sum-of-two-squares");
    }

    #[test]
    fn trace_identities_small() {
        let k22 = c4(false);
        assert_eq!(trace_identities(&k22).unwrap(), (0, 32, 32));
        let k4 = tetrahedron();
        assert_eq!(trace_identities(&k4).unwrap().0, 24);
        let p3 = SignedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(trace_identities(&p3).is_err());
    }
}

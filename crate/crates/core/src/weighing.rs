//! Weighing matrices `MᵀM = rI` and their link to bipartite signed graphs.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{structure_report, GraphError, SignedGraph};
use crate::linalg::IntMatrix;
use crate::spectral::{certify_two_sym, Refusal};
use crate::switching::{signed_permutation, SwitchingError, DEFAULT_ISOMORPHISM_CAP};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeighingMatrix {
    r: usize,
    m: IntMatrix,
}

impl WeighingMatrix {
    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn weight(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[(i, j)]
    }

    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.m[(i, j)] != 0).collect()
    }
}

impl fmt::Debug for WeighingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WeighingMatrix(n={}, r={})", self.n(), self.r)?;
        for row in self.m.rows() {
            let line: String = row
                .iter()
                .map(|&a| match a {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Accepts `m` if it is a {0,±1}-matrix with `MᵀM = rI`, inferring `r ≥ 1`.
pub fn verify_weighing(m: &IntMatrix) -> Result<WeighingMatrix, Refusal> {
    let n = m.n();
    if n == 0 {
        return Err(Refusal { reason: "empty matrix".into(), entry: None });
    }
    for i in 0..n {
        for j in 0..n {
            if !(-1..=1).contains(&m[(i, j)]) {
                return Err(Refusal { reason: format!("entry {} is not in {{0,±1}}", m[(i, j)]), entry: Some((i, j)) });
            }
        }
    }
    let gram = m.transpose().mul(m);
    let r = gram[(0, 0)];
    if r == 0 {
        return Err(Refusal { reason: "column 0 is zero".into(), entry: Some((0, 0)) });
    }
    if let Some((i, j)) = gram.first_difference(&IntMatrix::scalar(n, r)) {
        let reason = if i == j {
            format!("column {i} has weight {}, column 0 has weight {r}", gram[(i, i)])
        } else {
            format!("columns {i} and {j} have inner product {}", gram[(i, j)])
        };
        return Err(Refusal { reason, entry: Some((i, j)) });
    }
    Ok(WeighingMatrix { r: r as usize, m: m.clone() })
}

/// Pairwise row intersection sizes.
pub fn intersection_numbers(w: &WeighingMatrix) -> BTreeSet<usize> {
    let n = w.n();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for k in i + 1..n {
            out.insert((0..n).filter(|&j| w.m[(i, j)] != 0 && w.m[(k, j)] != 0).count());
        }
    }
    out
}

fn zero_two_intersections(w: &WeighingMatrix) -> bool {
    intersection_numbers(w).iter().all(|&k| k == 0 || k == 2)
}

/// Not equivalent to a direct sum: the bipartite row/column support graph is connected.
pub fn is_proper(w: &WeighingMatrix) -> bool {
    let n = w.n();
    // vertices 0..n are columns, n..2n rows
    let mut seen = vec![false; 2 * n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        let next: Vec<usize> = if v < n {
            (0..n).filter(|&i| w.m[(i, v)] != 0).map(|i| n + i).collect()
        } else {
            (0..n).filter(|&j| w.m[(v - n, j)] != 0).collect()
        };
        for u in next {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == 2 * n
}

/// `M = P·N·Q`: `M[i][j] = row_sign[i] · col_sign[j] · N[row_perm[i]][col_perm[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub row_perm: Vec<usize>,
    pub row_sign: Vec<i8>,
    pub col_perm: Vec<usize>,
    pub col_sign: Vec<i8>,
}

impl EquivalenceWitness {
    pub fn identity(n: usize) -> Self {
        EquivalenceWitness {
            row_perm: (0..n).collect(),
            row_sign: vec![1; n],
            col_perm: (0..n).collect(),
            col_sign: vec![1; n],
        }
    }

    pub fn apply(&self, w: &WeighingMatrix) -> WeighingMatrix {
        let n = w.n();
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (self.row_sign[i] * self.col_sign[j]) as i64
                    * w.m[(self.row_perm[i], self.col_perm[j])];
            }
        }
        WeighingMatrix { r: w.r, m }
    }
}

/// The first `r` rows of the normal form for weight `r` on `n` columns.
pub fn scheme_two_prefix(n: usize, r: usize) -> Option<Vec<Vec<i64>>> {
    let used = 1 + r * r.saturating_sub(1) / 2;
    if r == 0 || used > n {
        return None;
    }
    let mut rows = vec![vec![0i64; n]; r];
    for j in 0..r {
        rows[0][j] = 1;
    }
    // Block owned by row i (1-based i in 2..r) has r - i columns.
    let mut block_start = vec![0usize; r + 1];
    let mut next_col = r;
    for i in 2..=r {
        block_start[i] = next_col;
        next_col += r - i;
    }
    for i in 2..=r {
        let row = &mut rows[i - 1];
        row[0] = 1;
        row[i - 1] = -1;
        for j in 2..i {
            // row i hits the (i - j - 1)-th column of block j
            row[block_start[j] + (i - j - 1)] = -1;
        }
        for c in 0..r - i {
            row[block_start[i] + c] = 1;
        }
    }
    Some(rows)
}

/// Brings `w` into the normal form whose first `r` rows are
/// [`scheme_two_prefix`]. Needs row intersection numbers in {0, 2}.
pub fn schem2_normal_form(w: &WeighingMatrix) -> Result<(WeighingMatrix, EquivalenceWitness), GraphError> {
    if !zero_two_intersections(w) {
        return Err(GraphError::Precondition(format!(
            "row intersection numbers {:?} are not within {{0, 2}}",
            intersection_numbers(w)
        )));
    }
    let n = w.n();
    let r = w.r;
    let m = &w.m;
    let support0 = w.row_support(0);
    let c1 = support0[0];

    let mut row_perm = vec![0usize];
    let mut col_perm = vec![c1];
    // Rows through c1, ascending; each meets row 0 in one further column.
    let through: Vec<usize> = (1..n).filter(|&i| m[(i, c1)] != 0).collect();
    for &i in &through {
        let other = support0
            .iter()
            .copied()
            .find(|&c| c != c1 && m[(i, c)] != 0)
            .expect("intersection 2 with row 0");
        row_perm.push(i);
        col_perm.push(other);
    }
    // Blocks: row number b (0-based position in row_perm, b ≥ 1) owns the
    // columns it does not share with earlier rows, ordered by the later row hitting them.
    for b in 1..r {
        let owner = row_perm[b];
        let mut block: Vec<(usize, usize)> = Vec::new();
        for c in w.row_support(owner) {
            if col_perm.contains(&c) {
                continue;
            }
            let hitter = (b + 1..r)
                .find(|&later| m[(row_perm[later], c)] != 0)
                .ok_or_else(|| GraphError::Precondition("block column not met by a later row".into()))?;
            block.push((hitter, c));
        }
        block.sort_unstable();
        col_perm.extend(block.into_iter().map(|(_, c)| c));
    }
    let mut row_in = vec![false; n];
    for &i in &row_perm {
        row_in[i] = true;
    }
    row_perm.extend((0..n).filter(|&i| !row_in[i]));
    let mut col_in = vec![false; n];
    for &c in &col_perm {
        col_in[c] = true;
    }
    let head_cols = col_perm.len();
    col_perm.extend((0..n).filter(|&c| !col_in[c]));

    // Signs: row 0 positive on its support; rows 2..r positive in column 0;
    // block columns positive in their owner's row.
    let mut col_sign = vec![1i8; n];
    let mut row_sign = vec![1i8; n];
    for j in 0..r {
        col_sign[j] = m[(row_perm[0], col_perm[j])] as i8;
    }
    for b in 1..r {
        row_sign[b] = (m[(row_perm[b], col_perm[0])] as i8) * col_sign[0];
    }
    let mut col = r;
    for b in 1..r {
        let size = r - 1 - b;
        for _ in 0..size {
            col_sign[col] = (m[(row_perm[b], col_perm[col])] as i8) * row_sign[b];
            col += 1;
        }
    }
    debug_assert_eq!(col, head_cols);

    let wit = EquivalenceWitness { row_perm, row_sign, col_perm, col_sign };
    let out = wit.apply(w);
    let prefix = scheme_two_prefix(n, r).expect("weight fits");
    for (i, want) in prefix.iter().enumerate() {
        if out.m.row(i) != want.as_slice() {
            return Err(GraphError::Precondition(format!("row {i} does not follow the normal form")));
        }
    }
    Ok((out, wit))
}

/// Checks that the first `r` rows equal [`scheme_two_prefix`].
pub fn matches_scheme_two(w: &WeighingMatrix) -> bool {
    match scheme_two_prefix(w.n(), w.r) {
        Some(p) => p.iter().enumerate().all(|(i, row)| w.m.row(i) == row.as_slice()),
        None => false,
    }
}

/// `[[O, Mᵀ], [M, O]]`: columns of `M` take vertices `0..n`, rows `n..2n`.
pub fn to_bipartite_sr2se(w: &WeighingMatrix) -> Result<SignedGraph, GraphError> {
    if !is_proper(w) {
        return Err(GraphError::Precondition("weighing matrix is not proper; the graph would be disconnected".into()));
    }
    if !zero_two_intersections(w) {
        return Err(GraphError::Precondition(format!(
            "row intersection numbers {:?} are not within {{0, 2}}",
            intersection_numbers(w)
        )));
    }
    Ok(bipartite_graph(&w.m))
}

pub(crate) fn bipartite_graph(m: &IntMatrix) -> SignedGraph {
    let n = m.n();
    let mut a = IntMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            a[(n + i, j)] = m[(i, j)];
            a[(j, n + i)] = m[(i, j)];
        }
    }
    SignedGraph::from_matrix(&a).expect("entries in {-1,0,1}")
}

/// Extracts `B` from `A = [[O, Bᵀ], [B, O]]` after ordering the colour class
/// containing vertex 0 first. Returns the matrix and that vertex order.
pub fn from_bipartite_sr2se(g: &SignedGraph) -> Result<(WeighingMatrix, Vec<usize>), GraphError> {
    let report = structure_report(g);
    if !report.connected {
        return Err(GraphError::Precondition("graph is not connected".into()));
    }
    let Some(colour) = g.support().bipartition() else {
        return Err(GraphError::Precondition("graph is not bipartite".into()));
    };
    let xs: Vec<usize> = (0..g.n()).filter(|&v| !colour[v]).collect();
    let ys: Vec<usize> = (0..g.n()).filter(|&v| colour[v]).collect();
    if xs.len() != ys.len() {
        return Err(GraphError::Precondition(format!(
            "colour classes have sizes {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    certify_two_sym(g).map_err(|e| GraphError::Precondition(format!("not A² = rI: {e}")))?;
    let n = xs.len();
    let mut b = IntMatrix::zeros(n);
    for (i, &y) in ys.iter().enumerate() {
        for (j, &x) in xs.iter().enumerate() {
            b[(i, j)] = g.entry(y, x) as i64;
        }
    }
    let w = verify_weighing(&b).map_err(|e| GraphError::Precondition(e.to_string()))?;
    let order = xs.into_iter().chain(ys).collect();
    Ok((w, order))
}

/// Decides `w2 = P·w1·Q` for signed permutation matrices `P`, `Q`.
pub fn equivalent(w1: &WeighingMatrix, w2: &WeighingMatrix) -> Result<Option<EquivalenceWitness>, SwitchingError> {
    equivalent_capped(w1, w2, DEFAULT_ISOMORPHISM_CAP)
}

pub fn equivalent_capped(
    w1: &WeighingMatrix,
    w2: &WeighingMatrix,
    cap: usize,
) -> Result<Option<EquivalenceWitness>, SwitchingError> {
    let n = w1.n();
    for k in [w1.n(), w2.n()] {
        if k > cap {
            return Err(SwitchingError::TooLarge { n: k, cap });
        }
    }
    if w2.n() != n || w1.r != w2.r {
        return Ok(None);
    }
    let g1 = bipartite_graph(&w1.m).adjacency();
    let g2 = bipartite_graph(&w2.m).adjacency();
    let colours: Vec<u64> = (0..2 * n).map(|v| (v >= n) as u64).collect();
    let Some(sw) = signed_permutation(&g1, &g2, Some((&colours, &colours))) else {
        return Ok(None);
    };
    let sign = sw.signs(2 * n);
    let wit = EquivalenceWitness {
        row_perm: (0..n).map(|i| sw.permutation[n + i] - n).collect(),
        row_sign: (0..n).map(|i| sign[n + i]).collect(),
        col_perm: (0..n).map(|j| sw.permutation[j]).collect(),
        col_sign: (0..n).map(|j| sign[j]).collect(),
    };
    assert_eq!(&wit.apply(w1), w2, "equivalence witness failed verification");
    Ok(Some(wit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard4() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]])
    }

    #[test]
    fn verification() {
        assert_eq!(verify_weighing(&IntMatrix::identity(5)).unwrap().weight(), 1);
        assert_eq!(verify_weighing(&hadamard4()).unwrap().weight(), 4);
        let j2 = IntMatrix::from_rows(&[[1, 1], [1, 1]]);
        let e = verify_weighing(&j2).unwrap_err();
        assert_eq!(e.entry, Some((0, 1)));
    }

    #[test]
    fn intersections_and_properness() {
        let i5 = verify_weighing(&IntMatrix::identity(5)).unwrap();
        assert_eq!(intersection_numbers(&i5), BTreeSet::from([0]));
        let h = verify_weighing(&hadamard4()).unwrap();
        assert_eq!(intersection_numbers(&h), BTreeSet::from([4]));
        assert!(is_proper(&h));
        assert!(!is_proper(&verify_weighing(&IntMatrix::identity(2)).unwrap()));
        let hh = verify_weighing(&hadamard4().direct_sum(&hadamard4())).unwrap();
        assert!(!is_proper(&hh));
    }

    #[test]
    fn normal_form_rejects_hadamard() {
        let h = verify_weighing(&hadamard4()).unwrap();
        assert!(schem2_normal_form(&h).is_err());
    }

    #[test]
    fn normal_form_of_prefix_is_identity() {
        // weight 2 order 2: [[1,1],[1,-1]]
        let m = IntMatrix::from_rows(&[[1, 1], [1, -1]]);
        let w = verify_weighing(&m).unwrap();
        assert!(matches_scheme_two(&w));
        let (out, wit) = schem2_normal_form(&w).unwrap();
        assert_eq!(out, w);
        assert_eq!(wit, EquivalenceWitness::identity(2));
    }

    #[test]
    fn equivalence_under_row_negation() {
        let h = verify_weighing(&hadamard4()).unwrap();
        let mut neg = hadamard4();
        for j in 0..4 {
            neg[(2, j)] = -neg[(2, j)];
        }
        let hn = verify_weighing(&neg).unwrap();
        assert!(equivalent(&h, &hn).unwrap().is_some());
        let p = IntMatrix::from_rows(&[[0, -1, 0], [0, 0, 1], [1, 0, 0]]);
        let wp = verify_weighing(&p).unwrap();
        let i3 = verify_weighing(&IntMatrix::identity(3)).unwrap();
        assert!(equivalent(&i3, &wp).unwrap().is_some());
    }

    #[test]
    fn bipartite_round_trip() {
        let m = IntMatrix::from_rows(&[[1, 1], [1, -1]]);
        let w = verify_weighing(&m).unwrap();
        let g = to_bipartite_sr2se(&w).unwrap();
        assert_eq!(certify_two_sym(&g).unwrap().lambda_sq, 2);
        let (back, order) = from_bipartite_sr2se(&g).unwrap();
        assert_eq!(to_bipartite_sr2se(&back).unwrap(), g.permuted(&order));
        assert!(to_bipartite_sr2se(&verify_weighing(&IntMatrix::identity(2)).unwrap()).is_err());
    }
}

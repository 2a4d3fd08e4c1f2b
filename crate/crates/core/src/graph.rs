//! Signed graphs, their underlying graphs and structural predicates.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("row {row} has length {len}, expected {n}")]
    Ragged { row: usize, len: usize, n: usize },
    #[error("entry ({u},{v}) is {value}, expected -1, 0 or 1")]
    EntryOutOfRange { u: usize, v: usize, value: i64 },
    #[error("matrix is not symmetric at ({u},{v})")]
    NotSymmetric { u: usize, v: usize },
    #[error("nonzero diagonal entry at vertex {0}")]
    NonZeroDiagonal(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("{0}")]
    Precondition(String),
}

/// Simple undirected graph stored as one neighbour bitset per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnderlyingGraph {
    rows: Vec<FixedBitSet>,
}

impl UnderlyingGraph {
    pub fn empty(n: usize) -> Self {
        UnderlyingGraph { rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge { u: u.min(v), v: u.max(v) });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds from a 0/1 matrix; any nonzero entry counts as an edge.
    pub fn from_matrix(m: &IntMatrix) -> Result<Self, GraphError> {
        let n = m.n();
        let mut g = Self::empty(n);
        for u in 0..n {
            if m[(u, u)] != 0 {
                return Err(GraphError::NonZeroDiagonal(u));
            }
            for v in u + 1..n {
                if (m[(u, v)] != 0) != (m[(v, u)] != 0) {
                    return Err(GraphError::NotSymmetric { u, v });
                }
                if m[(u, v)] != 0 {
                    g.add_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].ones()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones(..)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    pub fn common_neighbours(&self, u: usize, v: usize) -> usize {
        self.rows[u].intersection_count(&self.rows[v])
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            out.extend(self.rows[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn adjacency(&self) -> IntMatrix {
        let n = self.n();
        let mut m = IntMatrix::zeros(n);
        for u in 0..n {
            for v in self.rows[u].ones() {
                m[(u, v)] = 1;
            }
        }
        m
    }

    /// All-positive signing.
    pub fn to_signed(&self) -> SignedGraph {
        SignedGraph::from_underlying_signs(self, |_, _| 1)
    }

    /// Relabels so that old vertex `perm[i]` becomes new vertex `i`.
    pub fn permuted(&self, perm: &[usize]) -> UnderlyingGraph {
        let n = self.n();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut g = Self::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(inv[u], inv[v]);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.rows[u].ones() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-colouring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.n();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].expect("coloured when queued");
                for v in self.rows[u].ones() {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().iter().all(|&(u, v)| self.rows[u].is_disjoint(&self.rows[v]))
    }

    /// Breadth-first order from `root`, visiting neighbours in ascending order.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(root);
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for v in self.rows[u].ones() {
                if !seen.contains(v) {
                    seen.insert(v);
                    order.push(v);
                }
            }
        }
        order
    }

    pub fn is_rectagraph(&self) -> bool {
        let r = structure_report_underlying(self);
        r.zero_two && r.triangle_free
    }
}

impl fmt::Debug for UnderlyingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnderlyingGraph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Signed graph: symmetric adjacency matrix over {-1, 0, 1} with zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    n: usize,
    adj: Vec<i8>,
    support: UnderlyingGraph,
    labels: Option<Vec<String>>,
}

impl SignedGraph {
    pub fn empty(n: usize) -> Self {
        SignedGraph { n, adj: vec![0; n * n], support: UnderlyingGraph::empty(n), labels: None }
    }

    /// Validates a row-major matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(GraphError::Ragged { row, len: r.len(), n });
            }
            flat.extend_from_slice(r);
        }
        Self::from_matrix(&IntMatrix::from_flat(n, flat))
    }

    pub fn from_matrix(m: &IntMatrix) -> Result<Self, GraphError> {
        let n = m.n();
        let mut adj = vec![0i8; n * n];
        for u in 0..n {
            for v in 0..n {
                let value = m[(u, v)];
                if !(-1..=1).contains(&value) {
                    return Err(GraphError::EntryOutOfRange { u, v, value });
                }
                adj[u * n + v] = value as i8;
            }
        }
        for u in 0..n {
            if adj[u * n + u] != 0 {
                return Err(GraphError::NonZeroDiagonal(u));
            }
            for v in u + 1..n {
                if adj[u * n + v] != adj[v * n + u] {
                    return Err(GraphError::NotSymmetric { u, v });
                }
            }
        }
        Ok(Self::from_flat_unchecked(n, adj))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, i8)]) -> Result<Self, GraphError> {
        let mut adj = vec![0i8; n * n];
        for &(u, v, s) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if s != 1 && s != -1 {
                return Err(GraphError::BadSign(s));
            }
            if adj[u * n + v] != 0 {
                return Err(GraphError::DuplicateEdge { u: u.min(v), v: u.max(v) });
            }
            adj[u * n + v] = s;
            adj[v * n + u] = s;
        }
        Ok(Self::from_flat_unchecked(n, adj))
    }

    /// Signs the edges of `g` with `sign(u, v)` for `u < v`.
    pub fn from_underlying_signs(g: &UnderlyingGraph, mut sign: impl FnMut(usize, usize) -> i8) -> Self {
        let n = g.n();
        let mut adj = vec![0i8; n * n];
        for (u, v) in g.edges() {
            let s = if sign(u, v) < 0 { -1 } else { 1 };
            adj[u * n + v] = s;
            adj[v * n + u] = s;
        }
        SignedGraph { n, adj, support: g.clone(), labels: None }
    }

    /// Caller guarantees symmetry, zero diagonal and entries in {-1, 0, 1}.
    pub(crate) fn from_flat_unchecked(n: usize, adj: Vec<i8>) -> Self {
        debug_assert_eq!(adj.len(), n * n);
        let mut support = UnderlyingGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adj[u * n + v] != 0 {
                    support.add_edge(u, v);
                }
            }
        }
        SignedGraph { n, adj, support, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, u: usize, v: usize) -> i8 {
        self.adj[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[i8] {
        &self.adj[u * self.n..(u + 1) * self.n]
    }

    pub fn as_flat(&self) -> &[i8] {
        &self.adj
    }

    pub fn support(&self) -> &UnderlyingGraph {
        &self.support
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.support.neighbours(u)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.support.degree(u)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.support.degrees()
    }

    pub fn edge_count(&self) -> usize {
        self.support.edge_count()
    }

    /// Edges `(u, v, sign)` with `u < v`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize, i8)> {
        self.support.edges().into_iter().map(|(u, v)| (u, v, self.entry(u, v))).collect()
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges().iter().filter(|e| e.2 < 0).count()
    }

    pub fn adjacency(&self) -> IntMatrix {
        IntMatrix::from_flat(self.n, self.adj.iter().map(|&a| a as i64).collect())
    }

    /// Relabels so that old vertex `perm[i]` becomes new vertex `i`.
    pub fn permuted(&self, perm: &[usize]) -> SignedGraph {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut adj = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                adj[i * n + j] = self.adj[perm[i] * n + perm[j]];
            }
        }
        let mut g = Self::from_flat_unchecked(n, adj);
        if let Some(l) = &self.labels {
            g.labels = Some(perm.iter().map(|&p| l[p].clone()).collect());
        }
        g
    }

    /// Induced subgraph on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> SignedGraph {
        let k = keep.len();
        let mut adj = vec![0i8; k * k];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                adj[a * k + b] = self.adj[i * self.n + j];
            }
        }
        let mut g = Self::from_flat_unchecked(k, adj);
        if let Some(l) = &self.labels {
            g.labels = Some(keep.iter().map(|&p| l[p].clone()).collect());
        }
        g
    }

    /// Disjoint union; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &SignedGraph) -> SignedGraph {
        let m = self.adjacency().direct_sum(&other.adjacency());
        SignedGraph::from_matrix(&m).expect("direct sum of valid graphs")
    }
}

impl fmt::Debug for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignedGraph(n={})", self.n)?;
        for u in 0..self.n {
            let line: String = self
                .row(u)
                .iter()
                .map(|&a| match a {
                    1 => '+',
                    -1 => '-',
                    _ => '.',
                })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Entrywise absolute value of the adjacency matrix.
pub fn underlying(g: &SignedGraph) -> UnderlyingGraph {
    g.support.clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub regular: bool,
    /// Common degree; `None` unless regular.
    pub degree: Option<usize>,
    pub connected: bool,
    pub bipartite: bool,
    pub triangle_free: bool,
    /// Connected, and every pair of distinct vertices has 0 or 2 common neighbours.
    pub zero_two: bool,
    pub quadrangle_count: u64,
}

impl StructureReport {
    pub fn is_rectagraph(&self) -> bool {
        self.zero_two && self.triangle_free
    }
}

pub fn structure_report(g: &SignedGraph) -> StructureReport {
    structure_report_underlying(&g.support)
}

pub fn structure_report_underlying(g: &UnderlyingGraph) -> StructureReport {
    let n = g.n();
    let degrees = g.degrees();
    let regular = degrees.windows(2).all(|w| w[0] == w[1]);
    let degree = if regular { degrees.first().copied().or(Some(0)) } else { None };
    let connected = g.is_connected();
    let mut codegree_ok = true;
    let mut twice_quadrangles: u64 = 0;
    for u in 0..n {
        for v in u + 1..n {
            let c = g.common_neighbours(u, v) as u64;
            if c != 0 && c != 2 {
                codegree_ok = false;
            }
            twice_quadrangles += c * c.saturating_sub(1) / 2;
        }
    }
    StructureReport {
        regular,
        degree,
        connected,
        bipartite: g.bipartition().is_some(),
        triangle_free: g.is_triangle_free(),
        zero_two: connected && codegree_ok,
        quadrangle_count: twice_quadrangles / 2,
    }
}

/// Sorted common-neighbour counts over all unordered vertex pairs.
pub fn common_neighbour_profile(g: &SignedGraph) -> Vec<usize> {
    let s = &g.support;
    let n = s.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            out.push(s.common_neighbours(u, v));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_signed(neg: &[(usize, usize)]) -> SignedGraph {
        let edges: Vec<_> = [(0, 1), (1, 2), (2, 3), (0, 3)]
            .iter()
            .map(|&(u, v)| (u, v, if neg.contains(&(u, v)) { -1 } else { 1 }))
            .collect();
        SignedGraph::from_edges(4, &edges).unwrap()
    }

    #[test]
    fn underlying_erases_signs() {
        let a = c4_signed(&[]);
        let b = c4_signed(&[(2, 3)]);
        assert_eq!(underlying(&a), underlying(&b));
        assert_eq!(underlying(&a).edge_count(), 4);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            SignedGraph::from_rows(&[[0, 2], [2, 0]]),
            Err(GraphError::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            SignedGraph::from_rows(&[[0, 1], [-1, 0]]),
            Err(GraphError::NotSymmetric { u: 0, v: 1 })
        ));
        assert!(matches!(SignedGraph::from_rows(&[[1]]), Err(GraphError::NonZeroDiagonal(0))));
        assert!(matches!(
            SignedGraph::from_edges(2, &[(0, 1, 1), (1, 0, -1)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        ));
    }

    #[test]
    fn report_k22() {
        let r = structure_report(&c4_signed(&[]));
        assert!(r.regular && r.bipartite && r.triangle_free && r.zero_two && r.connected);
        assert_eq!(r.degree, Some(2));
        assert_eq!(r.quadrangle_count, 1);
        // four adjacent pairs share nothing, the two diagonals share both other vertices
        assert_eq!(common_neighbour_profile(&c4_signed(&[])), vec![0, 0, 0, 0, 2, 2]);
    }

    #[test]
    fn report_k4_and_path() {
        let k4 = UnderlyingGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap()
            .to_signed();
        let r = structure_report(&k4);
        assert_eq!(r.degree, Some(3));
        assert!(r.zero_two && !r.triangle_free && !r.bipartite);
        assert_eq!(r.quadrangle_count, 3);

        let p3 = SignedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(common_neighbour_profile(&p3), vec![0, 0, 1]);
        assert!(!structure_report(&p3).regular);
    }

    #[test]
    fn tiny_graphs_are_vacuously_zero_two() {
        assert!(structure_report(&SignedGraph::empty(1)).zero_two);
        let k2 = SignedGraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert!(structure_report(&k2).zero_two);
        assert!(!structure_report(&SignedGraph::empty(2)).zero_two);
    }

    #[test]
    fn disconnected_codegree_graph_is_not_zero_two() {
        // K2 plus C4: every pair has 0 or 2 common neighbours, yet it is not regular.
        let g = c4_signed(&[]).disjoint_union(&SignedGraph::from_edges(2, &[(0, 1, 1)]).unwrap());
        assert!(common_neighbour_profile(&g).iter().all(|&c| c == 0 || c == 2));
        let r = structure_report(&g);
        assert!(!r.regular && !r.zero_two);
    }

    #[test]
    fn permuted_and_induced() {
        let g = c4_signed(&[(0, 1)]);
        let p = g.permuted(&[1, 0, 2, 3]);
        assert_eq!(p.entry(0, 1), -1);
        assert_eq!(p.entry(1, 3), 1);
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.edge_count(), 2);
    }
}

//! Switching, the normalized labelling of a signed rectagraph around a base
//! vertex, and the switching-isomorphism decision procedure.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::graph::{structure_report, GraphError, SignedGraph};
use crate::linalg::{IntMatrix, IntPoly};
use crate::spectral::char_poly;

/// Largest order accepted by [`switching_isomorphic`] unless a cap is given.
pub const DEFAULT_ISOMORPHISM_CAP: usize = 128;

/// Negates every edge with exactly one end in `s`.
pub fn switch(g: &SignedGraph, s: &[usize]) -> SignedGraph {
    let n = g.n();
    let mut sign = vec![1i8; n];
    for &v in s {
        sign[v] = -sign[v];
    }
    apply_signs(g, &sign)
}

fn apply_signs(g: &SignedGraph, sign: &[i8]) -> SignedGraph {
    let n = g.n();
    let mut adj = g.as_flat().to_vec();
    for i in 0..n {
        for j in 0..n {
            adj[i * n + j] *= sign[i] * sign[j];
        }
    }
    SignedGraph::from_flat_unchecked(n, adj)
}

/// A signed permutation: `target = switch(source.permuted(permutation), switch_set)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingWitness {
    /// New vertex `i` is old vertex `permutation[i]`.
    pub permutation: Vec<usize>,
    /// Vertices, in the new labelling, whose signs are reversed.
    pub switch_set: Vec<usize>,
}

impl SwitchingWitness {
    pub fn identity(n: usize) -> Self {
        SwitchingWitness { permutation: (0..n).collect(), switch_set: Vec::new() }
    }

    pub fn apply(&self, g: &SignedGraph) -> SignedGraph {
        switch(&g.permuted(&self.permutation), &self.switch_set)
    }

    /// `Q` with `target = Qᵀ · source · Q`, as a signed permutation matrix.
    pub fn apply_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let n = m.n();
        let sign = self.signs(n);
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] =
                    (sign[i] * sign[j]) as i64 * m[(self.permutation[i], self.permutation[j])];
            }
        }
        out
    }

    pub fn signs(&self, n: usize) -> Vec<i8> {
        let mut sign = vec![1i8; n];
        for &v in &self.switch_set {
            sign[v] = -1;
        }
        sign
    }
}

/// Class representative in the normalized labelling around `base_vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingClass {
    pub representative: SignedGraph,
    pub base_vertex: usize,
    /// New vertex `i` is old vertex `permutation[i]`.
    pub permutation: Vec<usize>,
    /// Switched vertices, in the new labelling.
    pub switch_set: Vec<usize>,
    /// Vertices at distance at least 3 from the base vertex.
    pub k: usize,
}

impl SwitchingClass {
    pub fn witness(&self) -> SwitchingWitness {
        SwitchingWitness { permutation: self.permutation.clone(), switch_set: self.switch_set.clone() }
    }
}

/// Vertex order used by the normalized labelling of a rectagraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SchemeLabelling {
    /// New vertex `i` is old vertex `order[i]`.
    pub order: Vec<usize>,
    pub r: usize,
    pub k: usize,
}

/// Orders the vertices as: `base`, its neighbours `x_1 < … < x_r`, then for
/// each `a` the common neighbours of `x_a` and `x_b` (`b > a`, increasing)
/// other than `base`, then the remaining vertices in breadth-first order.
pub(crate) fn scheme_labelling(
    g: &crate::graph::UnderlyingGraph,
    base: usize,
) -> Result<SchemeLabelling, GraphError> {
    let n = g.n();
    if base >= n {
        return Err(GraphError::VertexOutOfRange { vertex: base, n });
    }
    let report = crate::graph::structure_report_underlying(g);
    if !report.connected {
        return Err(GraphError::Precondition("graph is not connected".into()));
    }
    if !report.regular {
        return Err(GraphError::Precondition("graph is not regular".into()));
    }
    if !report.triangle_free {
        return Err(GraphError::Precondition("graph is not triangle-free".into()));
    }
    if !report.zero_two {
        return Err(GraphError::Precondition(
            "some vertex pair does not have 0 or 2 common neighbours".into(),
        ));
    }
    let xs: Vec<usize> = g.neighbours(base).collect();
    let r = xs.len();
    let mut placed = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    order.push(base);
    placed.insert(base);
    for &x in &xs {
        order.push(x);
        placed.insert(x);
    }
    for a in 0..r {
        for b in a + 1..r {
            let mut common = g.row(xs[a]).clone();
            common.intersect_with(g.row(xs[b]));
            common.set(base, false);
            let w = common.ones().next().ok_or_else(|| {
                GraphError::Precondition("neighbours of the base vertex lack a second common neighbour".into())
            })?;
            if placed.contains(w) {
                return Err(GraphError::Precondition(
                    "a vertex at distance 2 is adjacent to three neighbours of the base vertex".into(),
                ));
            }
            order.push(w);
            placed.insert(w);
        }
    }
    let head = order.len();
    for v in g.bfs_order(base) {
        if !placed.contains(v) {
            placed.insert(v);
            order.push(v);
        }
    }
    debug_assert_eq!(order.len(), n);
    Ok(SchemeLabelling { order, r, k: n - head })
}

/// Switch set (new labelling) making every vertex's edge to its earliest
/// neighbour positive. `g` must already be in the target labelling.
pub(crate) fn earliest_neighbour_switches(g: &SignedGraph) -> Vec<i8> {
    let n = g.n();
    let mut sign = vec![1i8; n];
    for v in 1..n {
        if let Some(u) = (0..v).find(|&u| g.entry(u, v) != 0) {
            if g.entry(u, v) * sign[u] * sign[v] < 0 {
                sign[v] = -sign[v];
            }
        }
    }
    sign
}

/// Relabels and switches `g` so that the first `r + 1` rows follow the
/// normalized pattern: a positive star at the base vertex, and each vertex at
/// distance 2 joined positively to its first neighbour among `x_1, …, x_r`.
/// When `A² = rI` the other edge to `x_1, …, x_r` is then forced negative.
pub fn schem_normal_form(g: &SignedGraph, base: usize) -> Result<SwitchingClass, GraphError> {
    let lab = scheme_labelling(g.support(), base)?;
    let relabelled = g.permuted(&lab.order);
    let sign = earliest_neighbour_switches(&relabelled);
    let representative = apply_signs(&relabelled, &sign);
    let switch_set = (0..g.n()).filter(|&i| sign[i] < 0).collect();
    Ok(SwitchingClass { representative, base_vertex: base, permutation: lab.order, switch_set, k: lab.k })
}

/// Checks rows `0..=r` of `g` against the normalized pattern for an
/// `A² = rI` signing in scheme labelling with `r` neighbours of vertex 0.
pub fn matches_scheme_one(g: &SignedGraph, r: usize) -> bool {
    let n = g.n();
    if n < 1 + r + r * r.saturating_sub(1) / 2 {
        return false;
    }
    for j in 0..n {
        let want = if (1..=r).contains(&j) { 1 } else { 0 };
        if g.entry(0, j) != want {
            return false;
        }
    }
    let mut col = 1 + r;
    let mut expected = IntMatrix::zeros(n);
    for a in 0..r {
        for b in a + 1..r {
            expected[(1 + a, col)] = 1;
            expected[(1 + b, col)] = -1;
            col += 1;
        }
    }
    (1..=r).all(|i| {
        (0..n).all(|j| {
            let want = if j == 0 { 1 } else if j <= r { 0 } else { expected[(i, j)] };
            g.entry(i, j) as i64 == want
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SwitchingError {
    #[error("order {n} exceeds the isomorphism cap {cap}; screen with class invariants instead")]
    TooLarge { n: usize, cap: usize },
}

/// Decides switching isomorphism; on success the witness maps `g` onto `h`.
pub fn switching_isomorphic(
    g: &SignedGraph,
    h: &SignedGraph,
) -> Result<Option<SwitchingWitness>, SwitchingError> {
    switching_isomorphic_capped(g, h, DEFAULT_ISOMORPHISM_CAP)
}

pub fn switching_isomorphic_capped(
    g: &SignedGraph,
    h: &SignedGraph,
    cap: usize,
) -> Result<Option<SwitchingWitness>, SwitchingError> {
    for n in [g.n(), h.n()] {
        if n > cap {
            return Err(SwitchingError::TooLarge { n, cap });
        }
    }
    let w = signed_permutation(&g.adjacency(), &h.adjacency(), None);
    if let Some(w) = &w {
        assert_eq!(&w.apply(g), h, "switching witness failed verification");
    }
    Ok(w)
}

/// Finds `w` with `w.apply_matrix(a) == b` for symmetric integer matrices,
/// optionally respecting vertex colours.
pub fn signed_permutation(
    a: &IntMatrix,
    b: &IntMatrix,
    colours: Option<(&[u64], &[u64])>,
) -> Option<SwitchingWitness> {
    let n = a.n();
    if b.n() != n {
        return None;
    }
    let (ca0, cb0) = match colours {
        Some((x, y)) => (x.to_vec(), y.to_vec()),
        None => (vec![0; n], vec![0; n]),
    };
    let ca = refine_colours(a, &ca0);
    let cb = refine_colours(b, &cb0);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return None;
    }

    // phi maps a-vertices to b-vertices; t are the switching signs on a.
    let mut phi = vec![usize::MAX; n];
    let mut t = vec![0i8; n];
    let comps_a = support_components(a);
    let comps_b = support_components(b);
    let mut used_b = vec![false; comps_b.len()];
    for comp in &comps_a {
        let mut matched = false;
        for (j, other) in comps_b.iter().enumerate() {
            if used_b[j] || other.len() != comp.len() {
                continue;
            }
            let mut sa: Vec<u64> = comp.iter().map(|&v| ca[v]).collect();
            let mut sb: Vec<u64> = other.iter().map(|&v| cb[v]).collect();
            sa.sort_unstable();
            sb.sort_unstable();
            if sa != sb {
                continue;
            }
            let mut m = Matcher { a, b, ca: &ca, cb: &cb, comp_b: other, phi: &mut phi, t: &mut t };
            if m.run(comp) {
                used_b[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return None;
        }
    }

    let mut permutation = vec![0; n];
    let mut switch_set = Vec::new();
    for u in 0..n {
        permutation[phi[u]] = u;
        if t[u] < 0 {
            switch_set.push(phi[u]);
        }
    }
    switch_set.sort_unstable();
    let w = SwitchingWitness { permutation, switch_set };
    debug_assert_eq!(&w.apply_matrix(a), b);
    Some(w)
}

fn support_components(a: &IntMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for v in 0..n {
                if v != u && a[(u, v)] != 0 && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

struct Matcher<'a> {
    a: &'a IntMatrix,
    b: &'a IntMatrix,
    ca: &'a [u64],
    cb: &'a [u64],
    comp_b: &'a [usize],
    phi: &'a mut [usize],
    t: &'a mut [i8],
}

impl Matcher<'_> {
    /// Maps the connected component `comp` of `a` onto `comp_b`.
    fn run(&mut self, comp: &[usize]) -> bool {
        let a = self.a;
        // Start from the rarest colour so the first choice is as constrained as possible.
        let start = *comp
            .iter()
            .min_by_key(|&&v| (comp.iter().filter(|&&u| self.ca[u] == self.ca[v]).count(), v))
            .expect("nonempty component");
        let mut order = vec![start];
        let mut parent = vec![usize::MAX; 1];
        let mut in_order = vec![false; a.n()];
        in_order[start] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in comp {
                if !in_order[v] && v != u && a[(u, v)] != 0 {
                    in_order[v] = true;
                    order.push(v);
                    parent.push(u);
                }
            }
        }
        let mut used = vec![false; self.b.n()];
        let candidates: Vec<usize> =
            self.comp_b.iter().copied().filter(|&w| self.cb[w] == self.ca[start]).collect();
        for w in candidates {
            if self.try_assign(start, w, 1, &order, &parent, &mut used, 0) {
                return true;
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn try_assign(
        &mut self,
        v: usize,
        w: usize,
        tv: i8,
        order: &[usize],
        parent: &[usize],
        used: &mut [bool],
        depth: usize,
    ) -> bool {
        let (a, b) = (self.a, self.b);
        if a[(v, v)] != b[(w, w)] {
            return false;
        }
        for &u in &order[..depth] {
            let want = (self.t[u] * tv) as i64 * a[(u, v)];
            if b[(self.phi[u], w)] != want {
                return false;
            }
        }
        self.phi[v] = w;
        self.t[v] = tv;
        used[w] = true;
        if depth + 1 == order.len() {
            return true;
        }
        let next = order[depth + 1];
        let p = parent[depth + 1];
        let fp = self.phi[p];
        let apv = a[(p, next)];
        for &x in self.comp_b {
            if used[x] || self.cb[x] != self.ca[next] || x == fp {
                continue;
            }
            let bx = b[(fp, x)];
            if bx.abs() != apv.abs() {
                continue;
            }
            let tx = (bx.signum() * apv.signum()) as i8 * self.t[p];
            if self.try_assign(next, x, tx, order, parent, used, depth + 1) {
                return true;
            }
        }
        used[w] = false;
        self.phi[v] = usize::MAX;
        false
    }
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Colour refinement with switching-invariant data: entry magnitudes of `A`
/// and `A²`, and the diagonals of `A`, `A²`, `A³`, `A⁴`.
pub(crate) fn refine_colours(a: &IntMatrix, initial: &[u64]) -> Vec<u64> {
    let n = a.n();
    let a2 = a.mul(a);
    let a3 = a2.mul(a);
    let mut colour: Vec<u64> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = a.row(i).iter().map(|x| x.abs()).collect();
            row.sort_unstable();
            let a4: i64 = a2.row(i).iter().map(|x| x * x).sum();
            hash_of(&(initial[i], a[(i, i)], a2[(i, i)], a3[(i, i)], a4, row))
        })
        .collect();
    let mut classes = count_distinct(&colour);
    loop {
        let next: Vec<u64> = (0..n)
            .map(|i| {
                let mut nb: Vec<(i64, i64, u64)> = (0..n)
                    .filter(|&j| j != i && (a[(i, j)] != 0 || a2[(i, j)] != 0))
                    .map(|j| (a[(i, j)].abs(), a2[(i, j)].abs(), colour[j]))
                    .collect();
                nb.sort_unstable();
                hash_of(&(colour[i], nb))
            })
            .collect();
        let next_classes = count_distinct(&next);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colour
}

fn count_distinct(c: &[u64]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Switching-invariant screening data. Equal invariants are necessary, not
/// sufficient, for switching isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassInvariants {
    pub n: usize,
    pub charpoly: IntPoly,
    /// Sorted per-vertex counts of (positive, negative) quadrangles.
    pub quadrangle_balance: Vec<(u64, u64)>,
    /// Sorted stable colours of a refinement of the underlying structure.
    pub refinement: Vec<u64>,
}

pub fn class_invariants(g: &SignedGraph) -> ClassInvariants {
    let n = g.n();
    let a = g.adjacency();
    let a2 = a.mul(&a);
    let c = g.support().adjacency();
    let c2 = c.mul(&c);
    let mut balance: Vec<(u64, u64)> = (0..n)
        .map(|u| {
            let (mut pos, mut neg) = (0u64, 0u64);
            for v in (0..n).filter(|&v| v != u) {
                // 2-paths u-x-v: p positive, q negative.
                let p = ((c2[(u, v)] + a2[(u, v)]) / 2) as u64;
                let q = ((c2[(u, v)] - a2[(u, v)]) / 2) as u64;
                pos += p * p.saturating_sub(1) / 2 + q * q.saturating_sub(1) / 2;
                neg += p * q;
            }
            (pos, neg)
        })
        .collect();
    balance.sort_unstable();
    let mut refinement = refine_colours(&a, &vec![0; n]);
    refinement.sort_unstable();
    ClassInvariants { n, charpoly: char_poly(g), quadrangle_balance: balance, refinement }
}

/// Whether every quadrangle (4-cycle of the underlying graph) has negative
/// sign product.
pub fn all_quadrangles_negative(g: &SignedGraph) -> bool {
    let n = g.n();
    let a = g.adjacency();
    let a2 = a.mul(&a);
    let c = g.support().adjacency();
    let c2 = c.mul(&c);
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let p = (c2[(u, v)] + a2[(u, v)]) / 2;
            let q = (c2[(u, v)] - a2[(u, v)]) / 2;
            p * (p - 1) / 2 + q * (q - 1) / 2 == 0
        })
    })
}

/// Convenience for callers that only need a yes/no answer on small graphs.
pub fn is_switching_isomorphic(g: &SignedGraph, h: &SignedGraph) -> bool {
    matches!(switching_isomorphic(g, h), Ok(Some(_)))
}

/// Regular, connected, triangle-free and every pair with 0 or 2 common neighbours.
pub fn is_rectagraph(g: &SignedGraph) -> bool {
    let r = structure_report(g);
    r.regular && r.is_rectagraph()
}

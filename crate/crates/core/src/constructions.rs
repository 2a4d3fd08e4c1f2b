//! Graph products and named families.

use crate::graph::{GraphError, SignedGraph, UnderlyingGraph};
use crate::linalg::{IntMatrix, IntPoly};

fn from_blocks(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> SignedGraph {
    let n = a.n();
    let mut m = IntMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
            m[(i, n + j)] = b[(i, j)];
            m[(n + i, j)] = c[(i, j)];
            m[(n + i, n + j)] = d[(i, j)];
        }
    }
    SignedGraph::from_matrix(&m).expect("block construction keeps entries in {-1,0,1}")
}

/// Two copies of `g`, the second negated, joined by a positive perfect
/// matching: adjacency `[[A, I], [I, -A]]`.
pub fn ltimes_k2(g: &SignedGraph) -> SignedGraph {
    let a = g.adjacency();
    let i = IntMatrix::identity(g.n());
    from_blocks(&a, &i, &i, &a.scale(-1))
}

/// Cartesian product with `K₂`: adjacency `[[A, I], [I, A]]`.
pub fn cartesian_k2(g: &SignedGraph) -> SignedGraph {
    let a = g.adjacency();
    let i = IntMatrix::identity(g.n());
    from_blocks(&a, &i, &i, &a)
}

/// Kronecker product with `K₂`. Vertex `(v, c)` gets index `2v + c`.
pub fn bipartite_double(g: &SignedGraph) -> SignedGraph {
    let k2 = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    SignedGraph::from_matrix(&g.adjacency().kronecker(&k2)).expect("kronecker of valid graphs")
}

pub fn negation(g: &SignedGraph) -> SignedGraph {
    SignedGraph::from_matrix(&g.adjacency().scale(-1)).expect("negation keeps entries in range")
}

/// `Ġ₁ = K₂` and `Ġ_{r+1} = Ġ_r ⋉ K₂`: the signed `r`-cube with every
/// quadrangle negative.
pub fn signed_cube(r: usize) -> Result<SignedGraph, GraphError> {
    if r == 0 {
        return Err(GraphError::Precondition("signed cubes start at r = 1".into()));
    }
    let mut g = k2();
    for _ in 1..r {
        g = ltimes_k2(&g);
    }
    Ok(g)
}

pub fn k2() -> SignedGraph {
    SignedGraph::from_edges(2, &[(0, 1, 1)]).expect("valid")
}

pub fn complete(n: usize) -> UnderlyingGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    UnderlyingGraph::from_edges(n, &edges).expect("valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> UnderlyingGraph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    UnderlyingGraph::from_edges(a + b, &edges).expect("valid")
}

pub fn cycle(n: usize) -> UnderlyingGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    UnderlyingGraph::from_edges(n, &edges).expect("valid for n >= 3")
}

/// `K₄` with one negative edge.
pub fn signed_tetrahedron() -> SignedGraph {
    SignedGraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, -1)])
        .expect("valid")
}

/// The `r`-dimensional cube on bit strings of length `r`.
pub fn hypercube(r: usize) -> UnderlyingGraph {
    let n = 1usize << r;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..r {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    UnderlyingGraph::from_edges(n, &edges).expect("valid")
}

/// The `r`-cube with every antipodal pair joined: `2^r` vertices of degree
/// `r + 1`. `folded_cube(4)` is the Clebsch graph.
pub fn folded_cube(r: usize) -> Result<UnderlyingGraph, GraphError> {
    if r < 4 {
        return Err(GraphError::Precondition(format!(
            "folded_cube needs r >= 4; for r = {r} the result is not a rectagraph"
        )));
    }
    let n = 1usize << r;
    let mask = n - 1;
    let mut edges: Vec<(usize, usize)> = hypercube(r).edges();
    edges.extend((0..n).filter(|&v| v < v ^ mask).map(|v| (v, v ^ mask)));
    UnderlyingGraph::from_edges(n, &edges)
}

pub fn clebsch() -> UnderlyingGraph {
    folded_cube(4).expect("r = 4 is allowed")
}

/// Incidence graph of a symmetric design on points `0..n`: points take
/// vertices `0..n`, block `i` takes vertex `n + i`.
///
/// Returns the graph and the design's pair-coverage number `l`.
pub fn bibd_incidence(n: usize, blocks: &[Vec<usize>]) -> Result<(UnderlyingGraph, usize), GraphError> {
    if blocks.len() != n || n == 0 {
        return Err(GraphError::Precondition(format!("need {n} blocks, got {}", blocks.len())));
    }
    let r = blocks[0].len();
    let mut inc = vec![vec![false; n]; n];
    for (i, b) in blocks.iter().enumerate() {
        if b.len() != r {
            return Err(GraphError::Precondition(format!("block {i} has size {}, expected {r}", b.len())));
        }
        for &p in b {
            if p >= n {
                return Err(GraphError::VertexOutOfRange { vertex: p, n });
            }
            if inc[i][p] {
                return Err(GraphError::Precondition(format!("block {i} repeats point {p}")));
            }
            inc[i][p] = true;
        }
    }
    for p in 0..n {
        let rep = (0..n).filter(|&i| inc[i][p]).count();
        if rep != r {
            return Err(GraphError::Precondition(format!("point {p} lies in {rep} blocks, expected {r}")));
        }
    }
    let mut l = None;
    for p in 0..n {
        for q in p + 1..n {
            let c = (0..n).filter(|&i| inc[i][p] && inc[i][q]).count();
            match l {
                None => l = Some(c),
                Some(l0) if l0 != c => {
                    return Err(GraphError::Precondition(format!(
                        "points {p},{q} share {c} blocks, others share {l0}"
                    )))
                }
                _ => {}
            }
        }
    }
    let mut edges = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &p in b {
            edges.push((p, n + i));
        }
    }
    Ok((UnderlyingGraph::from_edges(2 * n, &edges)?, l.unwrap_or(0)))
}

/// Lines of the Fano plane on points `0..7`; point `i` is the nonzero vector
/// `i + 1` of GF(2)³ and a line is `{a, b, a xor b}`.
pub fn fano_lines() -> Vec<Vec<usize>> {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for a in 1..8usize {
        for b in a + 1..8 {
            let mut line = vec![a - 1, b - 1, (a ^ b) - 1];
            line.sort_unstable();
            if !lines.contains(&line) {
                lines.push(line);
            }
        }
    }
    lines
}

/// The (7,4,2) biplane: complements of the Fano lines.
pub fn biplane_7_4_2() -> Vec<Vec<usize>> {
    fano_lines().iter().map(|l| (0..7).filter(|p| !l.contains(p)).collect()).collect()
}

/// Characteristic polynomial of `G ⋉ K₂` from that of `G`.
///
/// Uses `det(xI - A_{G⋉K₂}) = det((x² - 1)I - A²)` and the fact that
/// `det(tI - A²)` evaluated at `t = x²` is `(-1)^n p(x) p(-x)`.
pub fn ltimes_k2_charpoly(p: &IntPoly) -> IntPoly {
    let n = p.degree().unwrap_or(0);
    let mut square = p.mul(&p.reflect());
    if n % 2 == 1 {
        square = square.scale(&(-1).into());
    }
    let q = square.even_part_in_x2().expect("p(x)p(-x) is even");
    q.compose(&IntPoly::x2_minus(1))
}

/// Factor-wise transform for `p(x) = x^{m₀} ∏ (x² - λᵢ)^{mᵢ}`:
/// `(x² - 1)^{m₀} ∏ (x² - λᵢ - 1)^{2mᵢ}`. `None` when `p` is not of that shape.
pub fn ltimes_k2_charpoly_symmetric(p: &IntPoly) -> Option<IntPoly> {
    let m0 = p.zero_root_multiplicity();
    let h = p.shift_down(m0).even_part_in_x2()?;
    // h(t) = ∏ (t - λᵢ)^{mᵢ}; substitute t = x² - 1 and square.
    let h_sub = h.compose(&IntPoly::x2_minus(1));
    Some(IntPoly::x2_minus(1).pow(m0).mul(&h_sub.mul(&h_sub)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::structure_report_underlying;
    use crate::spectral::{certify_two_sym, char_poly};

    #[test]
    fn ltimes_of_k2_is_signed_square() {
        let g = ltimes_k2(&k2());
        assert_eq!(char_poly(&g), IntPoly::x2_minus(2).pow(2));
        assert_eq!(g.negative_edge_count(), 1);
        let single = ltimes_k2(&SignedGraph::empty(1));
        assert_eq!(char_poly(&single), IntPoly::x2_minus(1));
    }

    #[test]
    fn cartesian_of_k2_is_square() {
        let g = cartesian_k2(&k2());
        assert_eq!(g.support(), &cycle(4).permuted(&[0, 1, 3, 2]));
        assert_eq!(g.negative_edge_count(), 0);
    }

    #[test]
    fn cartesian_of_cube_is_4_cube() {
        let q4 = cartesian_k2(&signed_cube(3).unwrap().support().to_signed());
        let r = structure_report_underlying(q4.support());
        assert_eq!((q4.n(), r.degree, r.quadrangle_count), (16, Some(4), 24));
    }

    #[test]
    fn bipartite_double_of_k2() {
        let d = bipartite_double(&k2());
        assert_eq!(d.edge_count(), 2);
        assert!(!d.support().is_connected());
    }

    #[test]
    fn negation_is_involutive() {
        let g = signed_tetrahedron();
        assert_eq!(negation(&negation(&g)), g);
        assert_eq!(negation(&k2()).entry(0, 1), -1);
    }

    #[test]
    fn signed_cubes_small() {
        assert_eq!(signed_cube(1).unwrap(), k2());
        for r in 1..=6 {
            let g = signed_cube(r).unwrap();
            assert_eq!(g.n(), 1 << r);
            assert_eq!(certify_two_sym(&g).unwrap().lambda_sq, r as i64);
        }
        assert!(signed_cube(0).is_err());
    }

    #[test]
    fn folded_cubes() {
        let c = clebsch();
        let r = structure_report_underlying(&c);
        assert_eq!((c.n(), r.degree), (16, Some(5)));
        assert!(r.zero_two && r.triangle_free && !r.bipartite);
        let f5 = folded_cube(5).unwrap();
        let r5 = structure_report_underlying(&f5);
        assert_eq!((f5.n(), r5.degree), (32, Some(6)));
        assert!(r5.zero_two && r5.bipartite);
        assert!(folded_cube(3).is_err());
    }

    #[test]
    fn designs() {
        let (heawood, l) = bibd_incidence(7, &fano_lines()).unwrap();
        assert_eq!(l, 1);
        let r = structure_report_underlying(&heawood);
        assert_eq!(r.degree, Some(3));
        assert!(!r.zero_two);
        let (b, l) = bibd_incidence(7, &biplane_7_4_2()).unwrap();
        assert_eq!(l, 2);
        let r = structure_report_underlying(&b);
        assert!(r.zero_two && r.triangle_free && r.bipartite);
        assert_eq!(r.degree, Some(4));
        let (c6, _) = bibd_incidence(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(c6.degrees(), vec![2; 6]);
        assert!(c6.is_connected());
        assert!(bibd_incidence(3, &[vec![0, 1], vec![0, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn charpoly_transform_routes_agree() {
        let g = signed_cube(3).unwrap();
        let p = char_poly(&g);
        let want = char_poly(&ltimes_k2(&g));
        assert_eq!(ltimes_k2_charpoly(&p), want);
        assert_eq!(ltimes_k2_charpoly_symmetric(&p), Some(want));
        let k4 = complete(4).to_signed();
        assert_eq!(ltimes_k2_charpoly(&char_poly(&k4)), char_poly(&ltimes_k2(&k4)));
        assert_eq!(ltimes_k2_charpoly_symmetric(&char_poly(&k4)), None);
    }
}

//! Exit-gate checks. Each test prints one `PASS`/`FAIL` line with its runtime
//! and asserts both the result and the time limit.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed02::catalog::{catalog, check_row, constructible_rows, table_row};
use signed02::constructions::{
    clebsch, folded_cube, hypercube, ltimes_k2, ltimes_k2_charpoly, ltimes_k2_charpoly_symmetric, signed_cube,
};
use signed02::extension::{
    delete_vertices, extend_four_to_three_with, extend_one_vertex_with, extend_zero_pair_relaxed_with,
    extend_zero_pair_with, falsification_suite,
};
use signed02::spectral::{certify_four_sym_with, certify_three_sym_with};
use signed02::weighing::{from_bipartite_sr2se, intersection_numbers, is_proper, to_bipartite_sr2se};
use signed02::*;

fn gate(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let ok = result.is_ok() && elapsed <= limit;
    let detail = match &result {
        Ok(s) | Err(s) => s.clone(),
    };
    println!(
        "{} {id:>2} {name}: {detail} ({:.2?}, limit {:?})",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit
    );
    assert!(result.is_ok(), "criterion {id} failed: {detail}");
    assert!(elapsed <= limit, "criterion {id} over its time limit: {elapsed:?} > {limit:?}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn c01_signed_cubes() {
    gate(1, "signed cubes r=1..10", Duration::from_secs(5), || {
        for r in 1..=10usize {
            let g = signed_cube(r).map_err(|e| e.to_string())?;
            let c = certify_two_sym(&g).map_err(|e| format!("r={r}: {e}"))?;
            ensure(c.lambda_sq == r as i64 && g.n() == 1 << r && c.m == g.n() / 2, || format!("r={r}: {c}"))?;
        }
        Ok("10 certificates with λ²=r, n=2^r".into())
    });
}

fn random_signed(rng: &mut ChaCha8Rng, bipartite: bool) -> SignedGraph {
    let n = rng.gen_range(1..=12usize);
    let split = rng.gen_range(0..=n);
    let p = rng.gen_range(0.2..0.8);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bipartite && ((u < split) == (v < split)) {
                continue;
            }
            if rng.gen_bool(p) {
                edges.push((u, v, if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
    }
    SignedGraph::from_edges(n, &edges).unwrap()
}

#[test]
fn c02_ltimes_k2_spectrum_transform() {
    gate(2, "⋉K₂ characteristic polynomial transform, 50 graphs", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        let mut literal = 0;
        for i in 0..50 {
            let g = random_signed(&mut rng, i % 2 == 0);
            let p = char_poly(&g);
            let lifted = char_poly(&ltimes_k2(&g));
            ensure(ltimes_k2_charpoly(&p) == lifted, || format!("graph {i}: general transform differs"))?;
            if let Some(q) = ltimes_k2_charpoly_symmetric(&p) {
                ensure(q == lifted, || format!("graph {i}: factor transform differs"))?;
                literal += 1;
            }
            if i % 2 == 0 {
                ensure(ltimes_k2_charpoly_symmetric(&p).is_some(), || format!("graph {i}: bipartite, odd charpoly"))?;
            }
        }
        Ok(format!("50 exact matches, {literal} also via the factor rule"))
    });
}

#[test]
fn c03_constructible_table_rows() {
    gate(3, "constructible table rows", Duration::from_secs(10), || {
        let want = ["R1.1", "R2.1", "R3.1", "R4.2", "R5.4", "R6.6", "R6.7", "R7.6", "R7.7"];
        let rows = constructible_rows();
        for id in want {
            ensure(rows.iter().any(|r| r.id == id), || format!("{id} not constructible"))?;
        }
        let mut checked = Vec::new();
        for row in rows {
            let g = catalog(row.id).map_err(|e| e.to_string())?.into_signed();
            let c = check_row(row, &g).map_err(|e| format!("{}: {e}", row.id))?;
            ensure(
                g.n() == row.n
                    && c.lambda_sq == row.r as i64
                    && structure_report(&g).bipartite == row.bipartite
                    && g.degrees().iter().all(|&d| d == row.r),
                || format!("{}: n={} {c}", row.id, g.n()),
            )?;
            checked.push(row.id);
        }
        Ok(format!("{} rows: {}", checked.len(), checked.join(" ")))
    });
}

#[test]
fn c04_search_ground_truth() {
    gate(4, "search on Q2, Q3, Q4 and Clebsch", Duration::from_secs(120), || {
        for r in 2..=4 {
            let o = search_signatures(&hypercube(r), None).map_err(|e| e.to_string())?;
            ensure(o.exhausted && o.solutions.len() == 1, || format!("Q{r}: {} classes", o.solutions.len()))?;
            let cube = signed_cube(r).unwrap();
            ensure(switching_isomorphic(&o.solutions[0], &cube).unwrap().is_some(), || format!("Q{r}: not the signed cube"))?;
        }
        let o = search_signatures(&clebsch(), None).map_err(|e| e.to_string())?;
        ensure(o.exhausted && o.solutions.len() == 1, || format!("Clebsch: {} classes", o.solutions.len()))?;
        let c = check_row(table_row("R5.4").unwrap(), &o.solutions[0]).map_err(|e| e.to_string())?;
        Ok(format!("1 class each; Clebsch class gives {c}"))
    });
}

#[test]
fn c05_folded_five_cube_has_no_signing() {
    gate(5, "folded 5-cube", Duration::from_secs(30 * 60), || {
        let o = search_signatures(&folded_cube(5).unwrap(), None).map_err(|e| e.to_string())?;
        ensure(o.solutions.is_empty() && o.exhausted, || format!("{} classes, exhausted {}", o.solutions.len(), o.exhausted))?;
        Ok(format!("0 classes, exhausted after {} nodes", o.nodes_explored))
    });
}

#[test]
fn c06_weighing_correspondence() {
    gate(6, "W(12,5) search and bipartite correspondence", Duration::from_secs(300), || {
        let o = search_weighing(12, 5, None);
        let proper: Vec<_> = o.matrices.iter().filter(|w| is_proper(w)).collect();
        ensure(!proper.is_empty(), || format!("{} classes, none proper", o.matrices.len()))?;
        let row = table_row("R5.1").unwrap();
        for w in &proper {
            let ints = intersection_numbers(w);
            ensure(ints.iter().all(|&k| k == 0 || k == 2), || format!("intersections {ints:?}"))?;
            let g = to_bipartite_sr2se(w).map_err(|e| e.to_string())?;
            let c = check_row(row, &g).map_err(|e| e.to_string())?;
            ensure(g.n() == 24 && c.kind == SpectrumKind::TwoSym && c.lambda_sq == 5, || format!("{c}"))?;
            let (w2, _) = from_bipartite_sr2se(&g).map_err(|e| e.to_string())?;
            let g2 = to_bipartite_sr2se(&w2).map_err(|e| e.to_string())?;
            ensure(switching_isomorphic(&g, &g2).unwrap().is_some(), || "round trip changed the class".into())?;
        }
        Ok(format!("{} proper class(es), 24-vertex TwoSym λ²=5, round trip ok", proper.len()))
    });
}

fn restore_pair(h: &SignedGraph, lam: i64, adjacent: bool, strict: &mut usize) -> Result<SignedGraph, String> {
    let step = if adjacent {
        extend_four_to_three_with(h, lam).map_err(|e| format!("four-to-three: {e}"))?
    } else {
        match extend_zero_pair_with(h, lam) {
            Ok(s) => {
                *strict += 1;
                s
            }
            Err(_) => extend_zero_pair_relaxed_with(h, lam).map_err(|e| format!("zero pair: {e}"))?,
        }
    };
    extend_one_vertex_with(&step, lam).map_err(|e| format!("one vertex: {e}"))
}

#[test]
fn c07_deletion_extension_round_trips() {
    gate(7, "deletion and extension round trips, λ² ≤ 4", Duration::from_secs(120), || {
        let mut singles = 0;
        let mut pairs = 0;
        let mut strict = 0;
        for id in ["R1.1", "R2.1", "R3.1", "R4.1", "R4.2"] {
            let g = catalog(id).map_err(|e| e.to_string())?.into_signed();
            let lam = certify_two_sym(&g).map_err(|e| e.to_string())?.lambda_sq;
            let n = g.n();
            for v in 0..n {
                let h = delete_vertices(&g, &[v]).unwrap();
                let c = certify_three_sym_with(&h, lam).map_err(|e| format!("{id} -{v}: {e}"))?;
                ensure(c.d == 1, || format!("{id} -{v}: {c}"))?;
                let back = extend_one_vertex_with(&h, lam).map_err(|e| format!("{id} -{v}: {e}"))?;
                ensure(switching_isomorphic(&back, &g).unwrap().is_some(), || format!("{id} -{v}: wrong class"))?;
                singles += 1;
            }
            for u in 0..n {
                for v in u + 1..n {
                    if n == 2 {
                        continue;
                    }
                    let h = delete_vertices(&g, &[u, v]).unwrap();
                    let adjacent = g.entry(u, v) != 0;
                    if adjacent {
                        let c = certify_four_sym_with(&h, lam, 1).map_err(|e| format!("{id} -{u},{v}: {e}"))?;
                        ensure(c.mu_sq == Some(1), || format!("{id} -{u},{v}: {c}"))?;
                        ensure(certify_three_sym_with(&h, lam).is_err(), || format!("{id} -{u},{v}: also ThreeSym"))?;
                    } else {
                        let c = certify_three_sym_with(&h, lam).map_err(|e| format!("{id} -{u},{v}: {e}"))?;
                        ensure(c.d == 2, || format!("{id} -{u},{v}: {c}"))?;
                    }
                    let back = restore_pair(&h, lam, adjacent, &mut strict).map_err(|e| format!("{id} -{u},{v}: {e}"))?;
                    ensure(certify_two_sym(&back).is_ok_and(|c| c.lambda_sq == lam), || format!("{id} -{u},{v}: not TwoSym"))?;
                    ensure(switching_isomorphic(&back, &g).unwrap().is_some(), || format!("{id} -{u},{v}: wrong class"))?;
                    pairs += 1;
                }
            }
        }
        Ok(format!("{singles} single and {pairs} pair deletions restored ({strict} non-adjacent pairs via the strict step)"))
    });
}

#[test]
fn c08_falsification_suite() {
    gate(8, "small-spectrum (0,2)-graph suite, n ≤ 8", Duration::from_secs(300), || {
        let rep = falsification_suite(8);
        ensure(rep.events.is_empty(), || format!("{} falsification events", rep.events.len()))?;
        ensure(rep.three_sym > 0 && rep.four_sym > 0, || "suite saw no ThreeSym or FourSym instance".into())?;
        Ok(format!(
            "{} graphs, {} signings, {} ThreeSym (all K₂,₂), {} FourSym with simple ±μ (all K₄), 0 events; \
             {} FourSym with ±μ not simple, outside the classification",
            rep.graphs, rep.signings, rep.three_sym, rep.four_sym, rep.four_sym_high_multiplicity
        ))
    });
}

/// All permutations of `0..n` (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut out = vec![p.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Switching classes of signings with `A² = rI`, up to automorphisms of the
/// underlying graph, by enumerating all `2^|E|` signings.
fn naive_class_count(g: &UnderlyingGraph) -> usize {
    let n = g.n();
    let edges = g.edges();
    let r = g.degree(0) as i64;
    let index: std::collections::HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let autos: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| edges.iter().all(|&(u, v)| g.has_edge(p[u], p[v])))
        .collect();
    // Labelled switching class of a sign vector: switch so that a fixed BFS
    // tree is all positive, then read off the signs.
    let mut parent = vec![usize::MAX; n];
    let order = g.bfs_order(0);
    for &u in &order {
        for v in g.neighbours(u) {
            if v != 0 && parent[v] == usize::MAX {
                parent[v] = u;
            }
        }
    }
    let normalize = |signs: &[i8]| -> Vec<i8> {
        let mut s = vec![1i8; n];
        for &v in order.iter().skip(1) {
            let u = parent[v];
            s[v] = s[u] * signs[index[&(u.min(v), u.max(v))]];
        }
        edges.iter().enumerate().map(|(i, &(u, v))| signs[i] * s[u] * s[v]).collect()
    };
    let mut seen = std::collections::HashSet::new();
    let mut classes = 0;
    for mask in 0u64..1 << edges.len() {
        let signs: Vec<i8> = (0..edges.len()).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let sg = SignedGraph::from_edges(n, &edges.iter().zip(&signs).map(|(&(u, v), &s)| (u, v, s)).collect::<Vec<_>>()).unwrap();
        let a = sg.adjacency();
        if a.mul(&a).as_scalar() != Some(r) {
            continue;
        }
        let key = normalize(&signs);
        if seen.contains(&key) {
            continue;
        }
        classes += 1;
        for p in &autos {
            let mut moved = vec![0i8; edges.len()];
            for (i, &(u, v)) in edges.iter().enumerate() {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                moved[index[&(a, b)]] = signs[i];
            }
            seen.insert(normalize(&moved));
        }
    }
    classes
}

#[test]
fn c09_search_matches_naive_enumeration() {
    gate(9, "search vs naive enumeration, rectagraphs with ≤ 16 edges", Duration::from_secs(300), || {
        // A connected rectagraph is r-regular with n ≥ 1 + r + r(r−1)/2, so at
        // most 16 edges forces r ≤ 3 and n ≤ 10 when r = 3. For r ≤ 2 the
        // connected regular graphs are K₁, K₂ and cycles.
        let mut graphs: Vec<(String, UnderlyingGraph)> = vec![
            ("K1".into(), UnderlyingGraph::empty(1)),
            ("K2".into(), UnderlyingGraph::from_edges(2, &[(0, 1)]).unwrap()),
        ];
        for n in 3..=16 {
            graphs.push((format!("C{n}"), signed02::constructions::cycle(n)));
        }
        for n in 7..=10 {
            for (i, g) in signed02::extension::zero_two_graphs(n).into_iter().enumerate() {
                if g.degree(0) == 3 {
                    graphs.push((format!("cubic n={n} #{i}"), g));
                }
            }
        }
        let mut summary = Vec::new();
        for (name, g) in graphs {
            if !g.is_rectagraph() || g.edge_count() > 16 {
                continue;
            }
            let found = search_signatures(&g, None).map_err(|e| format!("{name}: {e}"))?;
            let naive = naive_class_count(&g);
            ensure(found.exhausted && found.solutions.len() == naive, || {
                format!("{name}: search {} vs naive {naive}", found.solutions.len())
            })?;
            summary.push(format!("{name}:{naive}"));
        }
        ensure(summary.len() == 4, || format!("expected K1, K2, C4, Q3; got {summary:?}"))?;
        Ok(summary.join(" "))
    });
}

#[test]
fn c10_filter_soundness() {
    gate(10, "parameter filter", Duration::from_secs(1), || {
        for row in signed02::catalog::TABLE.iter() {
            let v = filter_sr2se(row.n as u64, row.r as u64, row.bipartite);
            ensure(v.passed, || format!("{}: {v}", row.id))?;
        }
        let v = filter_sr2se(36, 6, true);
        ensure(
            !v.passed && v.failures.contains(&signed02::spectral::FilterCondition::SumOfTwoSquares),
            || format!("(36, 6, bipartite): {v}"),
        )?;
        Ok(format!("{} table rows pass; (36,6,bipartite) {v}", signed02::catalog::TABLE.len()))
    });
}

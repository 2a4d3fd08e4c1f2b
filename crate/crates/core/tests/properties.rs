use proptest::prelude::*;
use signed02::constructions::{ltimes_k2, ltimes_k2_charpoly, negation, signed_cube};
use signed02::extension::{border, delete_vertices};
use signed02::io::{parse_graph6, parse_signed, parse_weighing, write_graph6, write_signed, write_weighing};
use signed02::weighing::{equivalent, from_bipartite_sr2se, to_bipartite_sr2se, verify_weighing, EquivalenceWitness};
use signed02::*;

fn signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(prop_oneof![2 => Just(0i8), 1 => Just(1i8), 1 => Just(-1i8)], pairs).prop_map(
            move |signs| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if signs[k] != 0 {
                            edges.push((u, v, signs[k]));
                        }
                        k += 1;
                    }
                }
                SignedGraph::from_edges(n, &edges).unwrap()
            },
        )
    })
}

/// A graph with a permutation and a switching set of matching size.
fn graph_with_relabelling(max_n: usize) -> impl Strategy<Value = (SignedGraph, Vec<usize>, Vec<usize>)> {
    signed_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        let set = proptest::collection::vec(any::<bool>(), n)
            .prop_map(|bits| bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect::<Vec<_>>());
        (Just(g), perm, set)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn switching_and_relabelling_keep_the_spectrum((g, perm, set) in graph_with_relabelling(9)) {
        let h = switch(&g.permuted(&perm), &set);
        prop_assert_eq!(char_poly(&g), char_poly(&h));
        prop_assert_eq!(class_invariants(&g), class_invariants(&h));
        let w = switching_isomorphic(&g, &h).unwrap();
        prop_assert!(w.is_some());
        prop_assert_eq!(w.unwrap().apply(&g), h);
    }

    #[test]
    fn switching_twice_is_the_identity((g, _perm, set) in graph_with_relabelling(9)) {
        prop_assert_eq!(switch(&switch(&g, &set), &set), g);
    }

    #[test]
    fn negation_reflects_the_spectrum(g in signed_graph(9)) {
        let reflected = char_poly(&g).reflect();
        let want = if g.n() % 2 == 0 { reflected } else { reflected.scale(&(-1).into()) };
        prop_assert_eq!(char_poly(&negation(&g)), want);
    }

    #[test]
    fn ltimes_k2_charpoly_transform(g in signed_graph(8)) {
        prop_assert_eq!(char_poly(&ltimes_k2(&g)), ltimes_k2_charpoly(&char_poly(&g)));
    }

    #[test]
    fn two_sym_certificate_iff_scalar_square(g in signed_graph(8)) {
        let a = g.adjacency();
        let scalar = a.mul(&a).as_scalar().filter(|&c| c > 0);
        match certify_two_sym(&g) {
            Ok(c) => prop_assert_eq!(Some(c.lambda_sq), scalar),
            Err(_) => prop_assert_eq!(scalar, None),
        }
    }

    #[test]
    fn certificates_are_internally_consistent(g in signed_graph(8)) {
        let c = signed02::spectral::best_certificate(&g);
        let p = char_poly(&g);
        if c.kind != SpectrumKind::Other {
            prop_assert_eq!(&c.charpoly, &p);
            prop_assert_eq!(2 * c.m + 2 * c.m_mu + c.d, g.n());
        }
    }

    #[test]
    fn sg1_round_trip(g in signed_graph(12)) {
        prop_assert_eq!(parse_signed(&write_signed(&g)).unwrap(), g);
    }

    #[test]
    fn graph6_round_trip(g in signed_graph(12)) {
        let u = g.support().clone();
        prop_assert_eq!(parse_graph6(write_graph6(&u).as_bytes()).unwrap(), u);
    }

    #[test]
    fn deleting_then_bordering_restores_the_graph(g in signed_graph(9)) {
        let n = g.n();
        prop_assume!(n >= 2);
        let rest: Vec<i8> = (1..n).map(|v| g.entry(0, v)).collect();
        let h = delete_vertices(&g, &[0]).unwrap();
        prop_assert_eq!(border(&h, &rest), g);
    }

    #[test]
    fn profile_in_zero_two_iff_flag_on_connected(g in signed_graph(8)) {
        let rep = structure_report(&g);
        prop_assume!(rep.connected);
        let profile = common_neighbour_profile(&g);
        prop_assert_eq!(profile.iter().all(|&c| c == 0 || c == 2), rep.zero_two);
    }

    #[test]
    fn equivalent_weighing_matrices_are_recognised(
        perm_r in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(),
        perm_c in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(),
        sr in proptest::collection::vec(any::<bool>(), 7),
        sc in proptest::collection::vec(any::<bool>(), 7),
    ) {
        let w = search_weighing(7, 4, None).matrices.remove(0);
        let sign = |b: bool| if b { -1 } else { 1 };
        let rows: Vec<Vec<i64>> = (0..7)
            .map(|i| (0..7).map(|j| sign(sr[i]) * sign(sc[j]) * w.entry(perm_r[i], perm_c[j])).collect())
            .collect();
        let v = verify_weighing(&IntMatrix::from_rows(&rows)).unwrap();
        let wit: EquivalenceWitness = equivalent(&w, &v).unwrap().expect("equivalent by construction");
        prop_assert_eq!(wit.apply(&w), v.clone());
        prop_assert_eq!(parse_weighing(&write_weighing(&v)).unwrap(), v.clone());
        let g = to_bipartite_sr2se(&v).unwrap();
        let (back, _) = from_bipartite_sr2se(&g).unwrap();
        prop_assert!(equivalent(&back, &v).unwrap().is_some());
    }
}

#[test]
fn ltimes_k2_raises_lambda_sq_by_one() {
    let mut g = signed_cube(1).unwrap();
    for r in 1..=7 {
        let c = certify_two_sym(&g).unwrap();
        assert_eq!((c.lambda_sq, g.n()), (r, 1 << r));
        assert!(filter_sr2se(g.n() as u64, r as u64, structure_report(&g).bipartite).passed);
        g = ltimes_k2(&g);
    }
}

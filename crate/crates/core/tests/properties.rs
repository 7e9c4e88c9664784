mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use flipkit::breaksep::{breakability_search, is_sunflower, sunflower_extract, verify_break_witness, BreakBudget};
use flipkit::conversion::{convert, recover_spec};
use flipkit::flip::{apply_flip, definable_partition, pair_count};
use flipkit::io;
use flipkit::metric::{FlipMetric, SetFamily};
use flipkit::vc::{sauer_shelah_bound, vc_dimension};
use flipkit::{FlipSpec, Graph, Partition};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(&bits).filter(|(_, &b)| b).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// A graph, a partition with at most `k` parts, and a spec over it.
fn flipped(max_n: usize, k: usize) -> impl Strategy<Value = (Graph, Partition, FlipSpec)> {
    graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        proptest::collection::vec(0..k, n).prop_flat_map(move |labels| {
            let p = Partition::from_labels(&labels);
            let specs = 1u64 << pair_count(p.len());
            let g = g.clone();
            (0..specs).prop_map(move |i| (g.clone(), p.clone(), FlipSpec::from_index(p.len(), i)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flipping_twice_is_identity((g, p, s) in flipped(10, 4)) {
        let h = apply_flip(&g, &p, &s).unwrap();
        prop_assert_eq!(apply_flip(&h, &p, &s).unwrap(), g.clone());
        prop_assert_eq!(adj(&h), flip(&adj(&g), p.labels(), |i, j| s.contains(i, j)));
    }

    #[test]
    fn flips_compose_by_symmetric_difference((g, p, s) in flipped(9, 3), idx in any::<u64>()) {
        let t = FlipSpec::from_index(p.len(), idx % (1u64 << pair_count(p.len())));
        let twice = apply_flip(&apply_flip(&g, &p, &s).unwrap(), &p, &t).unwrap();
        prop_assert_eq!(twice, apply_flip(&g, &p, &s.compose(&t)).unwrap());
    }

    #[test]
    fn spec_index_round_trips((_g, p, s) in flipped(6, 4)) {
        prop_assert_eq!(FlipSpec::from_index(p.len(), s.index(p.len())), s);
    }

    #[test]
    fn complement_is_an_involution(g in graph(12)) {
        prop_assert_eq!(g.complement().complement(), g.clone());
        let d = g.diameter().unwrap().finite();
        let dc = g.complement().diameter().unwrap().finite();
        prop_assert_eq!(d, diameter(&adj(&g)));
        prop_assert!(d.is_some_and(|d| d <= 3) || dc.is_some_and(|d| d <= 3));
    }

    #[test]
    fn partition_metric_is_a_metric((g, p, _s) in flipped(7, 3)) {
        let d = ext_matrix(&FlipMetric::new(&g, 4).all_pairs_partition(&p).unwrap());
        let (labels, k) = canonical(p.labels());
        prop_assert_eq!(&d, &dist_p(&adj(&g), &labels, k));
        let n = g.n();
        for u in 0..n {
            prop_assert_eq!(d[u][u], Some(0));
            for v in 0..n {
                prop_assert_eq!(d[u][v], d[v][u]);
                if u != v {
                    prop_assert!(leq(Some(2), d[u][v]));
                }
                for w in 0..n {
                    prop_assert!(leq(d[u][w], dadd(d[u][v], d[v][w])));
                }
            }
        }
    }

    #[test]
    fn refining_never_shrinks_distances((g, p, _s) in flipped(7, 2), split in any::<u64>()) {
        let labels: Vec<usize> = (0..g.n()).map(|v| 2 * p.part_of(v) + (split >> v & 1) as usize).collect();
        let fine = Partition::from_labels(&labels);
        prop_assert!(fine.refines(&p));
        let m = FlipMetric::new(&g, 4);
        let coarse = m.all_pairs_partition(&p).unwrap();
        let fine = m.all_pairs_partition(&fine).unwrap();
        for (rc, rf) in coarse.iter().zip(&fine) {
            for (c, f) in rc.iter().zip(rf) {
                prop_assert!(c <= f);
            }
        }
    }

    #[test]
    fn balls_are_intersections_over_flips((g, p, _s) in flipped(7, 3), v in any::<usize>(), r in 0u32..4) {
        let v = v % g.n();
        let lib = FlipMetric::new(&g, 4).ball_partition(&p, v, r).unwrap();
        let (labels, k) = canonical(p.labels());
        let mut inter = vec![true; g.n()];
        for h in all_flips(&adj(&g), &labels, k) {
            for (x, b) in inter.iter_mut().zip(ball(&h, v, r)) {
                *x &= b;
            }
        }
        let lib: Vec<bool> = (0..g.n()).map(|x| lib.contains(x)).collect();
        prop_assert_eq!(lib, inter);
    }

    #[test]
    fn definable_partition_groups_by_trace(g in graph(10), s in proptest::collection::btree_set(0usize..10, 0..3)) {
        let s: Vec<usize> = s.into_iter().filter(|&x| x < g.n()).collect();
        let p = definable_partition(&g, &s).unwrap();
        let (labels, _) = definable_labels(&adj(&g), &s);
        prop_assert_eq!(sorted_parts(p.parts()), parts_of(&labels));
    }

    #[test]
    fn conversion_replays_and_stretches_by_at_most_six((g, p, _s) in flipped(8, 3)) {
        let res = convert(&g, &p).unwrap();
        prop_assert!(res.refined.refines(&p));
        prop_assert!(res.refined.len() <= p.len() << p.len());
        prop_assert_eq!(apply_flip(&g, &res.refined, &res.spec).unwrap(), res.flipped.clone());
        prop_assert_eq!(recover_spec(&g, &res.flipped, &res.refined).unwrap(), res.spec.clone());
        let (labels, k) = canonical(p.labels());
        let dp = dist_p(&adj(&g), &labels, k);
        let dg = apsp(&adj(&res.flipped));
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert!(leq(dp[u][v], dg[u][v].map(|d| 6 * d)));
            }
        }
    }

    #[test]
    fn shatter_function_obeys_sauer_shelah(g in graph(10)) {
        let rep = vc_dimension(&g, 16).unwrap();
        let table = shatter_table(&adj(&g));
        for (k, &pi) in table.iter().enumerate() {
            prop_assert!(pi <= sauer_shelah_bound(k as u64, rep.vcdim as u64));
            prop_assert!(pi <= 1 << k);
        }
        prop_assert_eq!(table[rep.vcdim], 1 << rep.vcdim);
        if rep.vcdim < g.n() {
            prop_assert!(table[rep.vcdim + 1] < 1 << (rep.vcdim + 1));
        }
    }

    #[test]
    fn extracted_sunflowers_are_sunflowers(
        sets in proptest::collection::btree_set(proptest::collection::btree_set(0usize..8, 2), 1..20),
        m in 1usize..5,
    ) {
        let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let f = SetFamily::uniform(2, sets.clone()).unwrap();
        if let Some(sf) = sunflower_extract(&f, m).unwrap() {
            prop_assert_eq!(sf.subfamily.len(), m);
            prop_assert!(is_sunflower(sf.subfamily.sets(), &sf.core));
            let distinct: BTreeSet<&Vec<usize>> = sf.subfamily.sets().iter().collect();
            prop_assert_eq!(distinct.len(), m);
            prop_assert!(sf.subfamily.sets().iter().all(|s| sets.contains(s)));
        }
        // More than 2·(m-1)² distinct pairs force a sunflower.
        if sets.len() > 2 * (m - 1) * (m - 1) {
            prop_assert!(sunflower_extract(&f, m).unwrap().is_some());
        }
    }

    #[test]
    fn break_witnesses_verify(g in graph(9), r in 1u32..3, m in 1usize..3) {
        let w: Vec<usize> = (0..g.n()).collect();
        let out = breakability_search(&g, &w, r, m, &BreakBudget::default()).unwrap();
        if let Some(wit) = out.witness {
            prop_assert!(verify_break_witness(&g, &wit, &w, &w, r, m).is_ok());
            let h = flip(&adj(&g), wit.partition.labels(), |i, j| wit.spec.contains(i, j));
            let b1 = ball_of_set(&h, &wit.a1, r);
            let b2 = ball_of_set(&h, &wit.a2, r);
            prop_assert!(b1.iter().zip(&b2).all(|(x, y)| !(x & y)));
        }
    }

    #[test]
    fn text_formats_round_trip((g, p, s) in flipped(12, 4)) {
        prop_assert_eq!(io::read_graph(&io::write_graph(&g)).unwrap(), g.clone());
        prop_assert_eq!(io::read_partition(&io::write_partition(&p), g.n()).unwrap(), p.clone());
        prop_assert_eq!(io::read_spec(&io::write_spec(&s)).unwrap(), s.clone());
    }
}

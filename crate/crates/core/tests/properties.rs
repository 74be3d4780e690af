use std::collections::BTreeSet;

use pivotminor::extract::{self, ExtractOptions};
use pivotminor::families::{
    apply_flip, grid, is_flip_of, random_flip_spec, recognize_one_flip_of_path, x_flip_of_order,
};
use pivotminor::graph::shorten_degree_two;
use pivotminor::oracle::replay;
use pivotminor::{FlipSpec, Graph, Label, VertexId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if bits[k] {
                        g.add_edge(VertexId(a), VertexId(b)).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn checked() -> ExtractOptions {
    ExtractOptions {
        check_intermediate: true,
        ..ExtractOptions::default()
    }
}

/// `E(G - {u,v,w}) ∪ {xw : x ∈ (N(v) △ N(w)) \ {v,w}}` computed directly.
fn shortening_formula(g: &Graph, u: VertexId, v: VertexId, w: VertexId) -> Graph {
    let mut h = g.delete_all(&[u, v]).unwrap();
    for x in h.neighbors(w).collect::<Vec<_>>() {
        h.remove_edge(w, x).unwrap();
    }
    for x in g.vertices() {
        if x == u || x == v || x == w {
            continue;
        }
        if g.has_edge(v, x) != g.has_edge(w, x) {
            h.add_edge(w, x).unwrap();
        }
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pivot_identities(g in graph_strategy(10)) {
        for (u, v) in g.edges() {
            let p = g.pivot(u, v).unwrap();
            prop_assert_eq!(&p, &g.pivot(v, u).unwrap());
            prop_assert_eq!(&p.pivot(u, v).unwrap(), &g);
            prop_assert_eq!(&p, &g.pivot_by_local_complementation(u, v).unwrap());
            let vuv = g.local_complement(v).unwrap()
                .local_complement(u).unwrap()
                .local_complement(v).unwrap();
            prop_assert_eq!(&p, &vuv);
        }
    }

    #[test]
    fn local_complement_is_an_involution(g in graph_strategy(9)) {
        for v in g.vertices() {
            prop_assert_eq!(&g.local_complement(v).unwrap().local_complement(v).unwrap(), &g);
        }
    }

    #[test]
    fn shortening_matches_formula(g in graph_strategy(10), pick in any::<u64>()) {
        let cands: Vec<VertexId> = g.vertices().filter(|&x| g.degree(x) == 2).collect();
        prop_assume!(!cands.is_empty());
        let u = cands[pick as usize % cands.len()];
        let nb: Vec<VertexId> = g.neighbors(u).collect();
        let (v, w) = if pick & 1 == 0 { (nb[0], nb[1]) } else { (nb[1], nb[0]) };
        let h = shorten_degree_two(&g, u, v).unwrap();
        prop_assert_eq!(h, shortening_formula(&g, u, v, w));
    }

    #[test]
    fn pivot0_equality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order: Vec<VertexId> = (0..12).map(VertexId).collect();
        let x: BTreeSet<VertexId> = order.iter().copied().filter(|_| rand::Rng::gen_bool(&mut rng, 0.6)).collect();
        let xs: Vec<VertexId> = x.iter().copied().collect();
        let pairs: Vec<(VertexId, VertexId)> = xs.iter()
            .flat_map(|&a| xs.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a.0 + 3 <= b.0)
            .collect();
        prop_assume!(!pairs.is_empty());
        let (a, b) = pairs[rand::Rng::gen_range(&mut rng, 0..pairs.len())];
        let g = x_flip_of_order(&order, &x).unwrap();
        let (h, new_order, new_x) = extract::pivot0(&g, &order, &x, a, b).unwrap();
        // independent recomputation of the claim
        let expect = g.pivot(a, b).unwrap().delete_all(&[a, b]).unwrap();
        prop_assert_eq!(&h, &expect);
        prop_assert_eq!(&h, &x_flip_of_order(&new_order, &new_x).unwrap());
        prop_assert_eq!(new_order.len(), 10);
    }

    #[test]
    fn prediction_matches_pivot(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rand::Rng::gen_range(&mut rng, 3..=8u32);
        let n = rand::Rng::gen_range(&mut rng, 2..=5u32);
        let spec = random_flip_spec(m, n, 4, &mut rng);
        let flipped: Vec<(usize, usize)> = spec.pairs().filter(|&(a, b)| a != b).collect();
        prop_assume!(!flipped.is_empty());
        let (x, y) = flipped[rand::Rng::gen_range(&mut rng, 0..flipped.len())];
        let g = apply_flip(&grid(m, n), &spec).unwrap();
        let (u, v) = extract::find_cross_edge(&g, &spec, x, y, m - 1, m).unwrap();
        let keep: Vec<VertexId> = g.labels().filter(|(_, l)| l.row <= m - 2).map(|(v, _)| v).collect();
        let actual = g.pivot(u, v).unwrap().induced(&keep).unwrap();
        let predicted = spec.predict_flip_after_pivot(x, y, m - 2).unwrap();
        prop_assert!(is_flip_of(&actual, &predicted));
    }

    #[test]
    fn apply_flip_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_flip_spec(4, 5, 3, &mut rng);
        let base = grid(4, 5);
        let once = apply_flip(&base, &spec).unwrap();
        prop_assert!(is_flip_of(&once, &spec));
        prop_assert_eq!(apply_flip(&once, &spec).unwrap(), base);
    }

    #[test]
    fn cor_reduce_consumes_four_rows(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rand::Rng::gen_range(&mut rng, 5..=9u32);
        let spec = random_flip_spec(m, 6, 4, &mut rng);
        prop_assume!(spec.k() >= 2);
        let g = apply_flip(&grid(m, 6), &spec).unwrap();
        let res = extract::cor_reduce(&g, &spec, &checked()).unwrap();
        let out = res.spec.clone().unwrap();
        prop_assert_eq!(out.m(), m - 4);
        prop_assert_eq!(out.k(), spec.k() - 1);
        prop_assert_eq!(replay(&g, &res.trace).unwrap(), res.graph.clone());
        prop_assert!(is_flip_of(&res.graph, &out));
    }

    #[test]
    fn one_flip_to_path_on_random_sets(seed in any::<u64>(), t in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3 * (2 * t * t - t - 1);
        let p = rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let order: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
        let x: BTreeSet<VertexId> = order.iter().copied().filter(|_| rand::Rng::gen_bool(&mut rng, p)).collect();
        let g = x_flip_of_order(&order, &x).unwrap();
        let res = extract::one_flip_to_path(&g, &order, &x, t, &checked()).unwrap();
        prop_assert_eq!(replay(&g, &res.trace).unwrap(), res.graph.clone());
        prop_assert!(res.graph.is_path());
        prop_assert_eq!(res.graph.order(), t);
    }
}

#[test]
fn to_one_flip_over_every_two_column_spec() {
    let coarsenings: Vec<Vec<Vec<u32>>> = vec![
        vec![],
        vec![vec![1]],
        vec![vec![2]],
        vec![vec![1, 2]],
        vec![vec![1], vec![2]],
    ];
    for classes in coarsenings {
        let k = classes.len();
        let all: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
        for mask in 0..1u32 << all.len() {
            let pairs = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
            let spec = FlipSpec::new(5, 2, classes.clone(), pairs).unwrap();
            let g = apply_flip(&grid(5, 2), &spec).unwrap();
            let res = extract::to_one_flip(&g, &spec, &checked()).unwrap();
            assert_eq!(replay(&g, &res.trace).unwrap(), res.graph);
            assert_eq!(res.graph.order(), 2);
            // either P2 or two isolated vertices
            assert!(recognize_one_flip_of_path(&res.graph).unwrap().is_some());
        }
    }
}

#[test]
fn to_one_flip_three_columns_recognised() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let spec = random_flip_spec(9, 3, 3, &mut rng);
        let g = apply_flip(&grid(9, 3), &spec).unwrap();
        let res = extract::to_one_flip(&g, &spec, &checked()).unwrap();
        assert_eq!(replay(&g, &res.trace).unwrap(), res.graph);
        assert!(recognize_one_flip_of_path(&res.graph).unwrap().is_some());
        assert!(res.graph.labels().all(|(_, l)| l.row == 1));
    }
}

#[test]
fn trace_json_round_trip_replays() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let spec = random_flip_spec(13, 4, 4, &mut rng);
    let g = apply_flip(&grid(13, 4), &spec).unwrap();
    let res = extract::to_one_flip(&g, &spec, &checked()).unwrap();
    let back = pivotminor::PivotTrace::from_json(&res.trace.to_json()).unwrap();
    assert_eq!(back, res.trace);
    assert_eq!(replay(&g, &back).unwrap(), res.graph);
    assert_eq!(res.graph.label(res.graph.vertices().next().unwrap()).unwrap().row, Label::new(1, 1).row);
}

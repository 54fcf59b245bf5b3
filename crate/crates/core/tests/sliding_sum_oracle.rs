mod common;

use common::{spec_params, store_from_codes};
use proptest::prelude::*;
use seqflow::oracle::{
    bc_by_enumeration, dc_by_enumeration, is_totally_unimodular, satisfiable_by_enumeration,
    window_matrix,
};
use seqflow::sliding_sum::{
    build_dual_graph, check_satisfiable, gen_sequence_propagate, propagate_bc, uniform_windows,
    ArcOrigin,
};
use seqflow::{propagate_dc, BoolDomainStore, IntDomainStore, Interval, SequenceSpec, WindowSpec};

fn instance() -> impl Strategy<Value = (usize, Vec<WindowSpec>, IntDomainStore)> {
    (1usize..=10).prop_flat_map(|n| {
        let window = (1..=n, 1..=n, 0i64..=12, 0i64..=12).prop_map(move |(s, len, a, b)| {
            let len = 1 + (len - 1) % (n + 1 - s);
            let cap = 3 * len as i64 + 1;
            let (a, b) = (a % cap, b % cap);
            WindowSpec::new(s, len, a.min(b), a.max(b))
        });
        let dom = (0i64..=3, 0i64..=3).prop_map(|(a, b)| Interval::new(a.min(b), a.max(b)));
        (
            Just(n),
            prop::collection::vec(window, 0..=4),
            prop::collection::vec(dom, n).prop_map(IntDomainStore),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dual_graph_has_the_four_arc_families((n, windows, d) in instance()) {
        let g = build_dual_graph(n, &windows, &d).unwrap();
        let arcs = g.graph().arcs();
        prop_assert_eq!(arcs.len(), 2 * n + 2 * windows.len());
        for (a, &(from, to, cost)) in arcs.iter().enumerate() {
            let expected = match g.origin(a) {
                ArcOrigin::VarLower(i) => (i, i + 1, -d.get(i).lo),
                ArcOrigin::VarUpper(i) => (i + 1, i, d.get(i).hi),
                ArcOrigin::WindowLower(w) => {
                    let w = windows[w];
                    (w.start - 1, w.start - 1 + w.len, -w.lower)
                }
                ArcOrigin::WindowUpper(w) => {
                    let w = windows[w];
                    (w.start - 1 + w.len, w.start - 1, w.upper)
                }
            };
            prop_assert_eq!((from, to, cost), expected);
        }
    }

    #[test]
    fn satisfiable_iff_no_negative_cycle((n, windows, d) in instance()) {
        let g = build_dual_graph(n, &windows, &d).unwrap();
        prop_assert_eq!(check_satisfiable(&g), satisfiable_by_enumeration(&windows, &d).unwrap());
    }

    #[test]
    fn bounds_match_enumeration((n, windows, d) in instance()) {
        let out = propagate_bc(n, &windows, &d).unwrap();
        let expected = bc_by_enumeration(&windows, &d).unwrap();
        prop_assert_eq!(out.is_consistent(), expected.is_some());
        if let Some(e) = expected {
            prop_assert_eq!(&out.store, &e);
            let again = propagate_bc(n, &windows, &out.store).unwrap();
            prop_assert_eq!(again.store, out.store);
            prop_assert_eq!(again.pruned, 0);
        }
    }

    #[test]
    fn uniform_windows_match_sequence_dc(
        n in 1usize..=12,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        codes in prop::collection::vec(0u8..5, 12),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let spec = SequenceSpec::new(n, k, l, u).unwrap();
        let d = store_from_codes(&codes[..n]);
        let dual = gen_sequence_propagate(n, &uniform_windows(n, k, l, u), &d).unwrap();
        let flow = propagate_dc(&spec, &d).unwrap();
        prop_assert_eq!(dual.is_consistent(), flow.is_consistent());
        if flow.is_consistent() {
            prop_assert_eq!(dual.store, flow.store);
        }
    }

    #[test]
    fn window_matrices_are_totally_unimodular(
        n in 1usize..=6,
        raw in prop::collection::vec((1usize..=6, 1usize..=6), 1..=4),
    ) {
        let windows: Vec<WindowSpec> = raw
            .into_iter()
            .map(|(s, len)| {
                let s = 1 + (s - 1) % n;
                WindowSpec::new(s, 1 + (len - 1) % (n + 1 - s), 0, 0)
            })
            .collect();
        prop_assert!(is_totally_unimodular(&window_matrix(n, &windows)).unwrap());
    }
}

#[test]
fn non_uniform_example_matches_enumeration() {
    for lu in 0..=4 {
        let windows: Vec<WindowSpec> = [(1, 5), (2, 4), (3, 5), (1, 3)]
            .iter()
            .map(|&(a, b)| WindowSpec::new(a, b - a + 1, lu, lu))
            .collect();
        for codes in 0..3u32.pow(5) {
            let c: Vec<u8> = (0..5).map(|i| (codes / 3u32.pow(i) % 3) as u8).collect();
            let d = store_from_codes(&c);
            let out = gen_sequence_propagate(5, &windows, &d).unwrap();
            let expected = dc_by_enumeration(&windows, &d).unwrap();
            assert_eq!(out.is_consistent(), expected.is_some(), "l=u={lu} {d:?}");
            if let Some(e) = expected {
                assert_eq!(out.store, e);
            }
        }
    }
    let free = BoolDomainStore::free(5);
    let windows = [WindowSpec::new(1, 2, 1, 1), WindowSpec::new(1, 2, 0, 0)];
    assert!(!gen_sequence_propagate(5, &windows, &free)
        .unwrap()
        .is_consistent());
}

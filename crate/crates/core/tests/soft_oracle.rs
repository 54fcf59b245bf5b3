mod common;

use common::{edge_tuples, spec_params, store_from_codes};
use proptest::prelude::*;
use seqflow::flow::{min_cost_flow, min_cost_through_arc, Direction, ResidualGraph};
use seqflow::oracle::{
    min_cost_flow_by_enumeration, min_violation_per_value, soft_filter_by_enumeration,
};
use seqflow::soft::build_soft_network;
use seqflow::{propagate_soft, violation_cost, BoolDomainStore, Interval, SequenceSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn propagation_matches_enumeration(
        n in 1usize..=10,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        codes in prop::collection::vec(0u8..5, 10),
        t_lo in 0i64..4,
        t_hi in 0i64..8,
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let spec = SequenceSpec::new(n, k, l, u).unwrap();
        let d = store_from_codes(&codes[..n]);
        let t = Interval::new(t_lo, t_hi);
        let out = propagate_soft(&spec, &d, t).unwrap();
        let expected = soft_filter_by_enumeration(k, l, u, &d, t).unwrap();
        prop_assert_eq!(out.is_consistent(), expected.is_some());
        if let Some((x, t)) = expected {
            prop_assert_eq!(&out.store.x, &x);
            prop_assert_eq!(out.store.t, t);
        }
    }

    #[test]
    fn cost_through_x_arc_is_least_violation_with_the_flip(
        n in 1usize..=9,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        codes in prop::collection::vec(0u8..5, 9),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let spec = SequenceSpec::new(n, k, l, u).unwrap();
        let d = store_from_codes(&codes[..n]);
        let (mut net, layout) = build_soft_network(&spec);
        for (i, dom) in d.iter().enumerate() {
            net.set_bounds(layout.base.x_edge[i], dom.lower() as i64, dom.upper() as i64).unwrap();
        }
        let flow = min_cost_flow(&net).unwrap().unwrap();
        let residual = ResidualGraph::build(&net, &flow).unwrap();
        let per = min_violation_per_value(k, l, u, &d).unwrap();
        for (i, &e) in layout.base.x_edge.iter().enumerate() {
            if d.get(i).is_fixed() {
                continue;
            }
            let v = flow.flow[e] as usize;
            let dir = if v == 0 { Direction::Forward } else { Direction::Backward };
            let arc = residual.arc_of(e, dir).unwrap();
            let through = min_cost_through_arc(&flow, &residual, arc);
            prop_assert_eq!(through.finite(), per[i][1 - v]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn assignment_cost_equals_min_flow_cost(
        n in 1usize..=8,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        bits in prop::collection::vec(0u8..2, 8),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let spec = SequenceSpec::new(n, k, l, u).unwrap();
        let x = &bits[..n];
        let (mut net, layout) = build_soft_network(&spec);
        for (i, &v) in x.iter().enumerate() {
            net.set_bounds(layout.base.x_edge[i], v as i64, v as i64).unwrap();
        }
        let (cost, _) = min_cost_flow_by_enumeration(net.supplies(), &edge_tuples(&net))
            .unwrap()
            .unwrap();
        prop_assert_eq!(cost, violation_cost(&spec, x));
        prop_assert_eq!(min_cost_flow(&net).unwrap().unwrap().cost, cost);
        let fixed = BoolDomainStore::from_assignment(x);
        let out = propagate_soft(&spec, &fixed, Interval::new(0, (n * k) as i64)).unwrap();
        prop_assert!(out.is_consistent());
        prop_assert_eq!(out.store.t.lo, cost);
    }
}

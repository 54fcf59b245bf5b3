mod common;

use common::spec_params;
use proptest::prelude::*;
use seqflow::solver::{
    check_solution, solve, Domain, Limits, Model, SequencePropagation, SoftPropagation, SolveStatus,
};
use seqflow::WindowSpec;

fn single_sequence(n: usize, k: usize, l: i64, u: i64, p: SequencePropagation) -> Model {
    let mut m = Model::new();
    let xs = m.add_bool_vars(n);
    m.add_sequence(&xs, k, l, u, p).unwrap();
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn single_sequence_never_backtracks(
        n in 1usize..=60,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        seed in any::<u64>(),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        for p in [SequencePropagation::Flow, SequencePropagation::Dual] {
            let m = single_sequence(n, k, l, u, p);
            let r = solve(&m, seed, &Limits::default());
            prop_assert_eq!(r.stats.status, SolveStatus::Sat);
            prop_assert_eq!(r.stats.backtracks, 0);
            prop_assert!(check_solution(&m, r.solution.as_ref().unwrap()));
        }
    }

    #[test]
    fn decomposition_search_is_valid_and_deterministic(
        n in 1usize..=30,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        seed in any::<u64>(),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let m = single_sequence(n, k, l, u, SequencePropagation::AmongDecomposition);
        let limits = Limits { max_nodes: Some(20_000), timeout: None };
        let r1 = solve(&m, seed, &limits);
        let r2 = solve(&m, seed, &limits);
        prop_assert_eq!(&r1.solution, &r2.solution);
        prop_assert_eq!(
            (r1.stats.nodes, r1.stats.backtracks, r1.stats.status),
            (r2.stats.nodes, r2.stats.backtracks, r2.stats.status)
        );
        prop_assert!(r1.stats.backtracks <= r1.stats.nodes);
        prop_assert_ne!(r1.stats.status, SolveStatus::Unsat);
        if let Some(s) = &r1.solution {
            prop_assert!(check_solution(&m, s));
        }
    }

    #[test]
    fn soft_models_agree_on_satisfiability(
        n in 2usize..=10,
        k in 0usize..64,
        a in 0i64..64,
        b in 0i64..64,
        t_hi in 0i64..3,
        fixed in prop::collection::vec((0usize..10, 0i64..5), 0..4),
        seed in any::<u64>(),
    ) {
        let (n, k, l, u) = spec_params(n, k, a, b);
        let mut status = Vec::new();
        for p in [SoftPropagation::Flow, SoftPropagation::AmongDecomposition] {
            let mut m = Model::new();
            let xs: Vec<_> = (0..n)
                .map(|i| {
                    let pin = fixed.iter().find(|(v, _)| v % n == i).map(|&(_, x)| x);
                    match pin {
                        Some(x) => m.add_var(Domain::interval(x, x), true),
                        None => m.add_int_var(0, 4),
                    }
                })
                .collect();
            let views: Vec<_> = xs.iter().map(|&x| m.channel(x, &[1]).unwrap()).collect();
            let t = m.add_cost_var(0, t_hi);
            m.add_soft_sequence(&views, k, l, u, t, p).unwrap();
            let r = solve(&m, seed, &Limits::default());
            if let Some(s) = &r.solution {
                prop_assert!(check_solution(&m, s));
            }
            if p == SoftPropagation::Flow {
                prop_assert_eq!(r.stats.backtracks, 0);
            }
            status.push(r.stats.status);
        }
        prop_assert_eq!(status[0], status[1]);
    }

    #[test]
    fn sliding_sum_solutions_are_valid(
        n in 1usize..=8,
        raw in prop::collection::vec((1usize..=8, 1usize..=8, 0i64..=12, 0i64..=12), 0..=3),
        seed in any::<u64>(),
    ) {
        let windows: Vec<WindowSpec> = raw
            .into_iter()
            .map(|(s, len, a, b)| {
                let s = 1 + (s - 1) % n;
                let len = 1 + (len - 1) % (n + 1 - s);
                let cap = 3 * len as i64 + 1;
                WindowSpec::new(s, len, (a % cap).min(b % cap), (a % cap).max(b % cap))
            })
            .collect();
        let mut m = Model::new();
        let xs: Vec<_> = (0..n).map(|_| m.add_int_var(0, 3)).collect();
        m.add_sliding_sum(&xs, &windows).unwrap();
        let r = solve(&m, seed, &Limits::default());
        prop_assert_eq!(r.stats.backtracks, 0);
        if let Some(s) = &r.solution {
            prop_assert!(check_solution(&m, s));
        } else {
            prop_assert_eq!(r.stats.status, SolveStatus::Unsat);
        }
    }
}

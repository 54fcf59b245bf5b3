#![allow(dead_code)]

use seqflow::flow::FlowNetwork;
use seqflow::oracle::EdgeTuple;
use seqflow::{BoolDomain, BoolDomainStore};

/// 0 -> {0,1}, 1 -> {0}, 2 -> {1}; anything else is free.
pub fn store_from_codes(codes: &[u8]) -> BoolDomainStore {
    BoolDomainStore(
        codes
            .iter()
            .map(|c| match c {
                1 => BoolDomain::ZERO,
                2 => BoolDomain::ONE,
                _ => BoolDomain::FREE,
            })
            .collect(),
    )
}

/// `(n, k, l, u)` with `1 <= k <= n` and `0 <= l <= u <= k` from raw draws.
pub fn spec_params(n: usize, k: usize, a: i64, b: i64) -> (usize, usize, i64, i64) {
    let k = 1 + k % n;
    let x = a.rem_euclid(k as i64 + 1);
    let y = b.rem_euclid(k as i64 + 1);
    (n, k, x.min(y), x.max(y))
}

pub fn edge_tuples(net: &FlowNetwork) -> Vec<EdgeTuple> {
    net.edges()
        .iter()
        .map(|e| (e.from, e.to, e.lower, e.upper, e.cost))
        .collect()
}

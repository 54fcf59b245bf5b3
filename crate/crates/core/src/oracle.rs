//! Brute-force ground truth for the propagators. Everything here works by
//! plain enumeration and shares no flow or graph code with the rest of the
//! crate.

use std::ops::Sub;

use thiserror::Error;

use crate::domain::{BoolDomain, BoolDomainStore, IntDomainStore, Interval};
use crate::sliding_sum::WindowSpec;

/// Largest search space the enumeration oracles accept.
pub const SEARCH_LIMIT: u128 = 1 << 20;
/// Largest matrix dimension accepted by the unimodularity check.
pub const TU_LIMIT: usize = 8;
/// Largest number of partial flows the flow enumerator visits.
pub const FLOW_VISIT_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {size} exceeds the oracle limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("matrix entry {value} at ({row}, {col}) is not in {{-1, 0, 1}}")]
    NotTernary { row: usize, col: usize, value: i64 },
    #[error("column {0} does not have exactly one +1 and one -1 after the transform")]
    NotNetworkColumn(usize),
    #[error("rows have inconsistent lengths or do not match the right-hand side")]
    Shape,
}

fn guard(size: u128) -> Result<(), OracleError> {
    if size > SEARCH_LIMIT {
        return Err(OracleError::TooLarge {
            size,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(())
}

fn space(sizes: impl Iterator<Item = usize>) -> u128 {
    sizes.fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

/// Depth-first search for an assignment drawn from `doms` that satisfies all
/// windows. Prunes a prefix once some window can no longer reach its bounds.
fn find_support(doms: &[Vec<i64>], windows: &[WindowSpec]) -> Option<Vec<i64>> {
    let n = doms.len();
    if doms.iter().any(|d| d.is_empty()) {
        return None;
    }
    let mins: Vec<i64> = doms.iter().map(|d| *d.iter().min().unwrap()).collect();
    let maxs: Vec<i64> = doms.iter().map(|d| *d.iter().max().unwrap()).collect();
    let viable = |prefix: &[i64]| {
        windows.iter().all(|w| {
            let (s, e) = (w.start - 1, w.start - 1 + w.len);
            if s >= prefix.len() {
                return true;
            }
            let mut lo = 0;
            let mut hi = 0;
            for p in s..e {
                if p < prefix.len() {
                    lo += prefix[p];
                    hi += prefix[p];
                } else {
                    lo += mins[p];
                    hi += maxs[p];
                }
            }
            lo <= w.upper && hi >= w.lower
        })
    };
    let mut values = Vec::with_capacity(n);
    let mut next = vec![0usize; n];
    loop {
        let depth = values.len();
        if depth == n {
            return Some(values);
        }
        if next[depth] == doms[depth].len() {
            next[depth] = 0;
            values.pop()?;
            continue;
        }
        values.push(doms[depth][next[depth]]);
        next[depth] += 1;
        if !viable(&values) {
            values.pop();
        }
    }
}

fn bool_values(d: BoolDomain) -> Vec<i64> {
    [0u8, 1]
        .into_iter()
        .filter(|&v| d.contains(v))
        .map(i64::from)
        .collect()
}

/// Domain consistency for a system of window sums over 0/1 variables: a value
/// stays iff some satisfying assignment uses it. `None` if unsatisfiable.
pub fn dc_by_enumeration(
    windows: &[WindowSpec],
    domains: &BoolDomainStore,
) -> Result<Option<BoolDomainStore>, OracleError> {
    guard(space(domains.iter().map(|d| d.size())))?;
    let doms: Vec<Vec<i64>> = domains.iter().map(bool_values).collect();
    let mut supported = vec![[false; 2]; doms.len()];
    for i in 0..doms.len() {
        for &v in &doms[i] {
            if supported[i][v as usize] {
                continue;
            }
            let mut pinned = doms.clone();
            pinned[i] = vec![v];
            if let Some(sol) = find_support(&pinned, windows) {
                for (j, &x) in sol.iter().enumerate() {
                    supported[j][x as usize] = true;
                }
            }
        }
    }
    if supported.iter().any(|s| !s[0] && !s[1]) {
        return Ok(None);
    }
    Ok(Some(BoolDomainStore(
        supported
            .into_iter()
            .map(|[z, o]| BoolDomain {
                has_zero: z,
                has_one: o,
            })
            .collect(),
    )))
}

/// The windows `<l, u, k, s>` of `Sequence(l, u, k)` over `n` variables.
pub fn sequence_windows(n: usize, k: usize, l: i64, u: i64) -> Vec<WindowSpec> {
    (1..=n + 1 - k)
        .map(|s| WindowSpec {
            start: s,
            len: k,
            lower: l,
            upper: u,
        })
        .collect()
}

/// Bounds consistency for window sums over interval domains: each bound is
/// the extreme value taken in some satisfying assignment. `None` if
/// unsatisfiable.
pub fn bc_by_enumeration(
    windows: &[WindowSpec],
    domains: &IntDomainStore,
) -> Result<Option<IntDomainStore>, OracleError> {
    guard(space(domains.iter().map(|d| d.width() as usize)))?;
    let doms: Vec<Vec<i64>> = domains.iter().map(|d| (d.lo..=d.hi).collect()).collect();
    let mut out = Vec::with_capacity(doms.len());
    for i in 0..doms.len() {
        let mut pinned = doms.clone();
        let mut lo = None;
        for &v in &doms[i] {
            pinned[i] = vec![v];
            if find_support(&pinned, windows).is_some() {
                lo = Some(v);
                break;
            }
        }
        let Some(lo) = lo else { return Ok(None) };
        let mut hi = lo;
        for &v in doms[i].iter().rev() {
            pinned[i] = vec![v];
            if find_support(&pinned, windows).is_some() {
                hi = v;
                break;
            }
        }
        out.push(Interval::new(lo, hi));
    }
    Ok(Some(IntDomainStore(out)))
}

/// Whether some assignment from the interval domains satisfies all windows.
pub fn satisfiable_by_enumeration(
    windows: &[WindowSpec],
    domains: &IntDomainStore,
) -> Result<bool, OracleError> {
    guard(space(domains.iter().map(|d| d.width() as usize)))?;
    let doms: Vec<Vec<i64>> = domains.iter().map(|d| (d.lo..=d.hi).collect()).collect();
    Ok(find_support(&doms, windows).is_some())
}

/// `sum_j max(l - s_j, s_j - u, 0)` over the length-`k` windows.
pub fn violation(k: usize, l: i64, u: i64, values: &[u8]) -> i64 {
    values
        .windows(k)
        .map(|w| {
            let s: i64 = w.iter().map(|&x| x as i64).sum();
            (l - s).max(s - u).max(0)
        })
        .sum()
}

fn completions(domains: &BoolDomainStore, mut visit: impl FnMut(&[u8])) {
    let doms: Vec<Vec<i64>> = domains.iter().map(bool_values).collect();
    if doms.iter().any(|d| d.is_empty()) {
        return;
    }
    let n = doms.len();
    let mut idx = vec![0usize; n];
    let mut values = vec![0u8; n];
    loop {
        for i in 0..n {
            values[i] = doms[i][idx[i]] as u8;
        }
        visit(&values);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            idx[i] += 1;
            if idx[i] < doms[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Least violation over all completions of `domains`; `None` if some domain
/// is empty.
pub fn min_violation_by_enumeration(
    k: usize,
    l: i64,
    u: i64,
    domains: &BoolDomainStore,
) -> Result<Option<i64>, OracleError> {
    guard(space(domains.iter().map(|d| d.size())))?;
    let mut best = None;
    completions(domains, |x| {
        let c = violation(k, l, u, x);
        best = Some(best.map_or(c, |b: i64| b.min(c)));
    });
    Ok(best)
}

/// Least violation with `X_i = v`, for every `i` and `v`; `None` where `v` is
/// not in the domain.
pub fn min_violation_per_value(
    k: usize,
    l: i64,
    u: i64,
    domains: &BoolDomainStore,
) -> Result<Vec<[Option<i64>; 2]>, OracleError> {
    guard(space(domains.iter().map(|d| d.size())))?;
    let mut best = vec![[None; 2]; domains.len()];
    completions(domains, |x| {
        let c = violation(k, l, u, x);
        for (i, &v) in x.iter().enumerate() {
            let slot = &mut best[i][v as usize];
            *slot = Some(slot.map_or(c, |b: i64| b.min(c)));
        }
    });
    Ok(best)
}

/// Filtering of the soft constraint by enumeration: values whose best
/// completion costs more than `t.hi` go, and `t.lo` rises to the least
/// violation. `None` if nothing fits under `t.hi`.
pub fn soft_filter_by_enumeration(
    k: usize,
    l: i64,
    u: i64,
    domains: &BoolDomainStore,
    t: Interval,
) -> Result<Option<(BoolDomainStore, Interval)>, OracleError> {
    let per = min_violation_per_value(k, l, u, domains)?;
    let Some(min) = min_violation_by_enumeration(k, l, u, domains)? else {
        return Ok(None);
    };
    if min > t.hi || t.is_empty() {
        return Ok(None);
    }
    let keep = |c: Option<i64>| c.is_some_and(|c| c <= t.hi);
    let x = per
        .into_iter()
        .map(|[z, o]| BoolDomain {
            has_zero: keep(z),
            has_one: keep(o),
        })
        .collect();
    Ok(Some((
        BoolDomainStore(x),
        Interval::new(t.lo.max(min), t.hi),
    )))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Whether every square submatrix has determinant in `{-1, 0, 1}`.
pub fn is_totally_unimodular(matrix: &[Vec<i64>]) -> Result<bool, OracleError> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(OracleError::Shape);
    }
    if rows > TU_LIMIT || cols > TU_LIMIT {
        return Err(OracleError::TooLarge {
            size: rows.max(cols) as u128,
            limit: TU_LIMIT as u128,
        });
    }
    for (r, row) in matrix.iter().enumerate() {
        if let Some((c, &value)) = row.iter().enumerate().find(|(_, &v)| v.abs() > 1) {
            return Err(OracleError::NotTernary {
                row: r,
                col: c,
                value,
            });
        }
    }
    for size in 1..=rows.min(cols) {
        let col_sets = subsets(cols, size);
        for rs in subsets(rows, size) {
            for cs in &col_sets {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| matrix[r][c]).collect())
                    .collect();
                if determinant(&sub).abs() > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Appends a zero row and replaces each row after the first by itself minus
/// its predecessor. The right-hand side goes through the same steps.
pub fn transform_consecutive_ones<T>(
    matrix: &[Vec<i64>],
    rhs: &[T],
) -> Result<(Vec<Vec<i64>>, Vec<T>), OracleError>
where
    T: Copy + Default + Sub<Output = T>,
{
    let cols = matrix.first().map_or(0, |r| r.len());
    if matrix.iter().any(|r| r.len() != cols) || rhs.len() != matrix.len() {
        return Err(OracleError::Shape);
    }
    let mut rows: Vec<Vec<i64>> = matrix.to_vec();
    rows.push(vec![0; cols]);
    let mut b: Vec<T> = rhs.to_vec();
    b.push(T::default());
    let out: Vec<Vec<i64>> = (0..rows.len())
        .map(|i| {
            if i == 0 {
                rows[0].clone()
            } else {
                rows[i]
                    .iter()
                    .zip(&rows[i - 1])
                    .map(|(a, p)| a - p)
                    .collect()
            }
        })
        .collect();
    let out_b: Vec<T> = (0..b.len())
        .map(|i| if i == 0 { b[0] } else { b[i] - b[i - 1] })
        .collect();
    for c in 0..cols {
        let plus = out.iter().filter(|r| r[c] == 1).count();
        let minus = out.iter().filter(|r| r[c] == -1).count();
        let zero = out.iter().filter(|r| r[c] == 0).count();
        if plus != 1 || minus != 1 || zero != out.len() - 2 {
            return Err(OracleError::NotNetworkColumn(c));
        }
    }
    Ok((out, out_b))
}

/// Equality system of `Sequence` over `n` variables with length-`k`
/// windows: per window `j` a row `sum X - Y_j = l` and a row
/// `sum X + Z_j = u`. Columns are `X_1..X_n, Y_1, Z_1, .., Y_m, Z_m`; the
/// right-hand side is returned as `(coefficient of l, coefficient of u)`.
pub fn sequence_equality_matrix(n: usize, k: usize) -> (Vec<Vec<i64>>, Vec<(i64, i64)>) {
    let m = n + 1 - k;
    let cols = n + 2 * m;
    let mut rows = Vec::with_capacity(2 * m);
    let mut rhs = Vec::with_capacity(2 * m);
    for j in 0..m {
        let mut lower = vec![0; cols];
        let mut upper = vec![0; cols];
        for i in j..j + k {
            lower[i] = 1;
            upper[i] = 1;
        }
        lower[n + 2 * j] = -1;
        upper[n + 2 * j + 1] = 1;
        rows.push(lower);
        rhs.push((1, 0));
        rows.push(upper);
        rhs.push((0, 1));
    }
    (rows, rhs)
}

/// Window incidence matrix: one row per window, 1 on its variables.
pub fn window_matrix(n: usize, windows: &[WindowSpec]) -> Vec<Vec<i64>> {
    windows
        .iter()
        .map(|w| {
            (0..n)
                .map(|i| (w.start - 1 <= i && i < w.start - 1 + w.len) as i64)
                .collect()
        })
        .collect()
}

/// Plain flow edge for the enumerator: `(from, to, lower, upper, cost)`.
pub type EdgeTuple = (usize, usize, i64, i64, i64);

/// Least-cost flow found by trying every integer flow vector within the
/// edge bounds. Node `v` must send out `supply[v]` more than it receives.
/// Returns `(cost, flows)` or `None` if no flow exists.
pub fn min_cost_flow_by_enumeration(
    supply: &[i64],
    edges: &[EdgeTuple],
) -> Result<Option<(i64, Vec<i64>)>, OracleError> {
    let nodes = supply.len();
    let mut rmin = vec![0i64; nodes];
    let mut rmax = vec![0i64; nodes];
    for &(f, t, lo, hi, _) in edges {
        if f >= nodes || t >= nodes || lo > hi {
            return Err(OracleError::Shape);
        }
        rmin[f] += lo;
        rmax[f] += hi;
        rmin[t] -= hi;
        rmax[t] -= lo;
    }
    let mut state = Enum {
        edges,
        supply,
        partial: vec![0; nodes],
        rmin,
        rmax,
        flows: vec![0; edges.len()],
        best: None,
        visits: 0,
    };
    state.go(0, 0)?;
    Ok(state.best)
}

struct Enum<'a> {
    edges: &'a [EdgeTuple],
    supply: &'a [i64],
    partial: Vec<i64>,
    rmin: Vec<i64>,
    rmax: Vec<i64>,
    flows: Vec<i64>,
    best: Option<(i64, Vec<i64>)>,
    visits: u64,
}

impl Enum<'_> {
    fn ok(&self, v: usize) -> bool {
        let need = self.supply[v] - self.partial[v];
        self.rmin[v] <= need && need <= self.rmax[v]
    }

    fn go(&mut self, e: usize, cost: i64) -> Result<(), OracleError> {
        self.visits += 1;
        if self.visits > FLOW_VISIT_LIMIT {
            return Err(OracleError::TooLarge {
                size: self.visits as u128,
                limit: FLOW_VISIT_LIMIT as u128,
            });
        }
        if e == self.edges.len() {
            if self.partial != self.supply {
                return Ok(());
            }
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, self.flows.clone()));
            }
            return Ok(());
        }
        let (f, t, lo, hi, c) = self.edges[e];
        self.rmin[f] -= lo;
        self.rmax[f] -= hi;
        self.rmin[t] += hi;
        self.rmax[t] += lo;
        for x in lo..=hi {
            self.partial[f] += x;
            self.partial[t] -= x;
            if self.ok(f) && self.ok(t) {
                self.flows[e] = x;
                self.go(e + 1, cost + c * x)?;
            }
            self.partial[f] -= x;
            self.partial[t] += x;
        }
        self.rmin[f] += lo;
        self.rmax[f] += hi;
        self.rmin[t] -= hi;
        self.rmax[t] -= lo;
        Ok(())
    }
}

use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use serde::Serialize;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchKind {
    Hard,
    Soft,
}

/// Propagator choice: flow-based (`Fb`), `Among` decomposition (`Ad`), their
/// soft counterparts, and the dual-graph route for hard instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropId {
    Fb,
    Ad,
    Fbs,
    Ads,
    Dual,
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchKind::Hard => "hard",
            BenchKind::Soft => "soft",
        })
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropId::Fb => "fb",
            PropId::Ad => "ad",
            PropId::Fbs => "fbs",
            PropId::Ads => "ads",
            PropId::Dual => "dual",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub bench: BenchKind,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub delta: Vec<usize>,
    /// Number of soft constraints per instance.
    pub m: usize,
    pub prop: PropId,
    pub seed: u64,
    pub timeout: Duration,
    pub per_cell: usize,
    pub domain_size: usize,
    pub instances_dir: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            bench: BenchKind::Hard,
            n: vec![50],
            k: vec![5],
            delta: vec![1],
            m: 1,
            prop: PropId::Fb,
            seed: 0,
            timeout: Duration::from_secs(300),
            per_cell: 20,
            domain_size: 5,
            instances_dir: None,
        }
    }
}

/// One `(n, k, delta)` combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let err = |m: String| Err(BenchError::Config(m));
        if self.per_cell < 1 {
            return err("instances per cell must be at least 1".into());
        }
        match (self.bench, self.prop) {
            (BenchKind::Hard, PropId::Fb | PropId::Ad | PropId::Dual) => {}
            (BenchKind::Soft, PropId::Fbs | PropId::Ads) => {}
            (b, p) => {
                return err(format!(
                    "propagator {p} does not apply to the {b} benchmark"
                ))
            }
        }
        if self.k.contains(&0) {
            return err("window length k must be at least 1".into());
        }
        let grid = self.n.len() * self.k.len() * self.delta.len();
        if grid > 0 && self.cells().is_empty() {
            let mut why =
                String::from("no (n, k, delta) combination satisfies k <= n and delta < k");
            if self.bench == BenchKind::Soft {
                why.push_str(&format!(" and m={} < k", self.m));
            }
            return err(why);
        }
        if self.bench == BenchKind::Soft {
            if self.m < 1 {
                return err("the soft benchmark needs at least one constraint".into());
            }
            if self.m > self.domain_size {
                return err(format!(
                    "{} constraints need distinct values but the domain has only {}",
                    self.m, self.domain_size
                ));
            }
        }
        Ok(())
    }

    /// Whether a cell admits instances: `1 <= k <= n`, `delta < k`, and for
    /// the soft benchmark room for `m` lower bounds of at least 1 summing below `k`.
    pub fn admits(&self, cell: Cell) -> bool {
        let soft_ok = self.bench == BenchKind::Hard || self.m < cell.k;
        cell.k >= 1 && cell.k <= cell.n && cell.delta < cell.k && soft_ok
    }

    /// Admissible cells in `n`, then `k`, then `delta` order. Grid points
    /// outside the admissible range are skipped.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &delta in &self.delta {
                    let cell = Cell { n, k, delta };
                    if self.admits(cell) {
                        out.push(cell);
                    }
                }
            }
        }
        out
    }
}

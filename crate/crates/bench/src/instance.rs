//! Random instances and their line-oriented text format.
//!
//! ```text
//! dom <i> <lo> <hi>            one per variable, 0-based
//! seq <n> <k> <l> <u>          Sequence over all variables
//! win <s> <k> <l> <u>          one window of a Gen-Sequence, 1-based start
//! soft <n> <k> <l> <u> <v> <t> SoftSequence on the value set {v}, cost <= t
//! ```

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqflow::solver::{Domain, Model, SequencePropagation, SoftPropagation};
use seqflow::WindowSpec;

use crate::config::{BenchConfig, BenchKind, Cell, PropId};
use crate::BenchError;

const SOFT_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    Seq {
        n: usize,
        k: usize,
        l: i64,
        u: i64,
    },
    Win {
        s: usize,
        k: usize,
        l: i64,
        u: i64,
    },
    Soft {
        n: usize,
        k: usize,
        l: i64,
        u: i64,
        value: i64,
        tmax: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub domains: Vec<(i64, i64)>,
    pub constraints: Vec<Line>,
}

impl Instance {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.constraints {
            match *c {
                Line::Seq { n, k, l, u } => writeln!(s, "seq {n} {k} {l} {u}"),
                Line::Win { s: st, k, l, u } => writeln!(s, "win {st} {k} {l} {u}"),
                Line::Soft {
                    n,
                    k,
                    l,
                    u,
                    value,
                    tmax,
                } => {
                    writeln!(s, "soft {n} {k} {l} {u} {value} {tmax}")
                }
            }
            .unwrap();
        }
        for (i, (lo, hi)) in self.domains.iter().enumerate() {
            writeln!(s, "dom {i} {lo} {hi}").unwrap();
        }
        s
    }

    /// Parses the text format; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, BenchError> {
        let mut domains: Vec<Option<(i64, i64)>> = Vec::new();
        let mut constraints = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| BenchError::Parse {
                origin: origin.to_string(),
                line: no + 1,
                msg,
            };
            let mut words = line.split_whitespace();
            let tag = words.next().unwrap();
            let nums: Vec<i64> = words
                .map(|w| w.parse().map_err(|_| err(format!("not an integer: {w}"))))
                .collect::<Result<_, _>>()?;
            let want = |count: usize| {
                if nums.len() == count {
                    Ok(())
                } else {
                    Err(err(format!(
                        "{tag} takes {count} numbers, got {}",
                        nums.len()
                    )))
                }
            };
            let idx = |v: i64| usize::try_from(v).map_err(|_| err(format!("negative size {v}")));
            match tag {
                "dom" => {
                    want(3)?;
                    let i = idx(nums[0])?;
                    if nums[1] > nums[2] {
                        return Err(err(format!("empty domain [{}, {}]", nums[1], nums[2])));
                    }
                    if domains.len() <= i {
                        domains.resize(i + 1, None);
                    }
                    domains[i] = Some((nums[1], nums[2]));
                }
                "seq" => {
                    want(4)?;
                    constraints.push(Line::Seq {
                        n: idx(nums[0])?,
                        k: idx(nums[1])?,
                        l: nums[2],
                        u: nums[3],
                    });
                }
                "win" => {
                    want(4)?;
                    constraints.push(Line::Win {
                        s: idx(nums[0])?,
                        k: idx(nums[1])?,
                        l: nums[2],
                        u: nums[3],
                    });
                }
                "soft" => {
                    want(6)?;
                    constraints.push(Line::Soft {
                        n: idx(nums[0])?,
                        k: idx(nums[1])?,
                        l: nums[2],
                        u: nums[3],
                        value: nums[4],
                        tmax: nums[5],
                    });
                }
                other => return Err(err(format!("unknown line type {other}"))),
            }
        }
        let domains = domains
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                d.ok_or_else(|| BenchError::Parse {
                    origin: origin.to_string(),
                    line: 0,
                    msg: format!("variable {i} has no dom line"),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            domains,
            constraints,
        })
    }

    pub fn read(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<(), BenchError> {
        std::fs::write(path, self.to_text()).map_err(|e| BenchError::io(path, e))
    }

    /// Builds the solver model. Every variable is a decision variable.
    pub fn to_model(&self, prop: PropId) -> Result<Model, BenchError> {
        let bad = |m: String| BenchError::Config(m);
        let mut model = Model::new();
        let xs: Vec<_> = self
            .domains
            .iter()
            .map(|&(lo, hi)| model.add_var(Domain::interval(lo, hi), true))
            .collect();
        let mut windows = Vec::new();
        for c in &self.constraints {
            match *c {
                Line::Seq { n, k, l, u } => {
                    let p = match prop {
                        PropId::Fb => SequencePropagation::Flow,
                        PropId::Ad => SequencePropagation::AmongDecomposition,
                        PropId::Dual => SequencePropagation::Dual,
                        other => return Err(bad(format!("{other} cannot propagate seq"))),
                    };
                    let vars = xs
                        .get(..n)
                        .ok_or_else(|| bad(format!("seq over {n} variables")))?;
                    model
                        .add_sequence(vars, k, l, u, p)
                        .map_err(|e| bad(e.to_string()))?;
                }
                Line::Win { s, k, l, u } => windows.push(WindowSpec::new(s, k, l, u)),
                Line::Soft {
                    n,
                    k,
                    l,
                    u,
                    value,
                    tmax,
                } => {
                    let p = match prop {
                        PropId::Fbs => SoftPropagation::Flow,
                        PropId::Ads => SoftPropagation::AmongDecomposition,
                        other => return Err(bad(format!("{other} cannot propagate soft"))),
                    };
                    let vars = xs
                        .get(..n)
                        .ok_or_else(|| bad(format!("soft over {n} variables")))?;
                    let views = vars
                        .iter()
                        .map(|&x| model.channel(x, &[value]))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| bad(e.to_string()))?;
                    let t = model.add_cost_var(0, tmax);
                    model
                        .add_soft_sequence(&views, k, l, u, t, p)
                        .map_err(|e| bad(e.to_string()))?;
                }
            }
        }
        if !windows.is_empty() {
            let boolean = self.domains.iter().all(|&(lo, hi)| lo >= 0 && hi <= 1);
            let r = if boolean {
                model.add_gen_sequence(&xs, &windows)
            } else {
                model.add_sliding_sum(&xs, &windows)
            };
            r.map_err(|e| bad(e.to_string()))?;
        }
        Ok(model)
    }
}

/// SplitMix64 finaliser, used to derive independent per-instance seeds.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of instance `index` in `cell`; independent of the propagator so
/// every propagator sees the same instances.
pub fn instance_seed(config: &BenchConfig, cell: Cell, index: usize) -> u64 {
    let kind = match config.bench {
        BenchKind::Hard => 1,
        BenchKind::Soft => 2,
    };
    [
        kind,
        cell.n as u64,
        cell.k as u64,
        cell.delta as u64,
        config.m as u64,
        index as u64,
    ]
    .into_iter()
    .fold(mix(config.seed), |acc, x| mix(acc ^ x))
}

/// Lower bound uniform in `[1, k - delta - 1]`, clamped to 1 when that range
/// is empty.
fn draw_lower(rng: &mut ChaCha8Rng, k: usize, delta: usize) -> i64 {
    let top = (k as i64 - delta as i64 - 1).max(1);
    rng.random_range(1..=top)
}

pub fn generate_instance(
    config: &BenchConfig,
    cell: Cell,
    index: usize,
) -> Result<Instance, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(config, cell, index));
    let Cell { n, k, delta } = cell;
    match config.bench {
        BenchKind::Hard => {
            let l = draw_lower(&mut rng, k, delta);
            Ok(Instance {
                domains: vec![(0, 1); n],
                constraints: vec![Line::Seq {
                    n,
                    k,
                    l,
                    u: l + delta as i64,
                }],
            })
        }
        BenchKind::Soft => {
            let d = config.domain_size as i64;
            let mut values: Vec<i64> = (0..d).collect();
            for i in 0..config.m {
                let j = rng.random_range(i..values.len());
                values.swap(i, j);
            }
            for _ in 0..SOFT_ATTEMPTS {
                let lows: Vec<i64> = (0..config.m)
                    .map(|_| draw_lower(&mut rng, k, delta))
                    .collect();
                if lows.iter().sum::<i64>() >= k as i64 {
                    continue;
                }
                let tmax = (n as i64 * 15) / 100;
                return Ok(Instance {
                    domains: vec![(0, d - 1); n],
                    constraints: lows
                        .iter()
                        .zip(&values)
                        .map(|(&l, &value)| Line::Soft {
                            n,
                            k,
                            l,
                            u: l + delta as i64,
                            value,
                            tmax,
                        })
                        .collect(),
                });
            }
            Err(BenchError::Config(format!(
                "no lower bounds summing below k={k} found for n={n} delta={delta} m={}",
                config.m
            )))
        }
    }
}

//! Label-correcting fixed-point solver for the per-vertex on-time-arrival
//! value distributions, plus policy extraction and the per-vertex
//! non-dominated path lists used by the label solvers.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ordered_float::NotNan;
use thiserror::Error;

use crate::distribution::{Distribution, Pmf};
use crate::graph::{ArcId, Instance, Path, ValidationError, VertexId};

#[derive(Debug, Error)]
pub enum SotaError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("working distributions exceeded {limit} total mass points")]
    BudgetExceeded { limit: usize },
}

#[derive(Debug, Clone)]
pub struct SotaOptions {
    /// Abort when the summed support sizes of the working distributions
    /// pass this limit.
    pub max_mass_points: usize,
}

impl Default for SotaOptions {
    fn default() -> Self {
        SotaOptions {
            max_mass_points: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SotaStats {
    pub updates: u64,
    pub expansions: u64,
    pub cpu: Duration,
}

#[derive(Debug)]
pub struct SotaResult {
    pub target: VertexId,
    /// Per-vertex fixed-point distribution; `PlusInfinity` only for
    /// vertices with no path to the target.
    pub z: Vec<Distribution>,
    pub stats: SotaStats,
    /// Per-vertex improving arcs in order of last improvement (most
    /// recent last); feeds the greedy path reconstruction below.
    improving_arcs: Vec<Vec<ArcId>>,
}

impl SotaResult {
    /// The per-vertex lower bounds consumed by the label solvers.
    pub fn lower_bounds(&self) -> &[Distribution] {
        &self.z
    }

    /// Support size of the solution distribution at `v`.
    pub fn support_size(&self, v: VertexId) -> usize {
        self.z[v].as_pmf().map_or(0, Pmf::len)
    }
}

pub fn solve_sota(inst: &Instance, target: VertexId) -> Result<SotaResult, SotaError> {
    solve_sota_with(inst, target, &SotaOptions::default())
}

/// Computes the fixed point of the per-vertex meet recursion by repeated
/// extraction of the vertex with the smallest scan frontier, ties broken
/// by the largest CDF value there, then by vertex id.
pub fn solve_sota_with(
    inst: &Instance,
    target: VertexId,
    options: &SotaOptions,
) -> Result<SotaResult, SotaError> {
    inst.check_zero_circuits()?;
    let start = Instant::now();
    let n = inst.vertices();

    let mut z: Vec<Distribution> = vec![Distribution::PlusInfinity; n];
    let mut improving_arcs: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    let mut stats = SotaStats::default();

    // Queue keyed by (t', -F_{Z'}(t'), vertex); decrease-key is
    // remove + reinsert.
    type Key = (u64, NotNan<f64>, VertexId);
    let mut queue: BTreeSet<Key> = BTreeSet::new();
    let mut key_of: Vec<Option<Key>> = vec![None; n];

    z[target] = Distribution::point(0);
    let init_key = (0u64, NotNan::new(-1.0).unwrap(), target);
    queue.insert(init_key);
    key_of[target] = Some(init_key);

    let mut mass: usize = 1;

    while let Some(&key) = queue.iter().next() {
        queue.remove(&key);
        let (_, _, u) = key;
        key_of[u] = None;
        stats.expansions += 1;

        let z_u = z[u].as_pmf().expect("queued vertex has a finite Z'").clone();
        for &a in inst.in_arcs(u) {
            let arc = inst.arc(a);
            let v = arc.tail;
            if v == target {
                continue;
            }
            let candidate = arc.travel.convolve(&z_u);
            let Some(t_new) = z[v].first_violation(&Distribution::finite(candidate.clone()))
            else {
                continue;
            };
            let t_new = t_new as u64;

            let old_len = z[v].as_pmf().map_or(0, Pmf::len);
            z[v] = z[v].meet(&Distribution::finite(candidate));
            stats.updates += 1;
            mass = mass - old_len + z[v].as_pmf().map_or(0, Pmf::len);
            if mass > options.max_mass_points {
                return Err(SotaError::BudgetExceeded {
                    limit: options.max_mass_points,
                });
            }

            if let Some(pos) = improving_arcs[v].iter().position(|&b| b == a) {
                improving_arcs[v].remove(pos);
            }
            improving_arcs[v].push(a);

            let t_v = key_of[v].map_or(u64::MAX, |(t, _, _)| t).min(t_new);
            let f = z[v].cdf(t_v as i64);
            let new_key = (t_v, NotNan::new(-f).unwrap(), v);
            if let Some(old) = key_of[v] {
                queue.remove(&old);
            }
            queue.insert(new_key);
            key_of[v] = Some(new_key);
        }
    }

    stats.cpu = start.elapsed();
    Ok(SotaResult {
        target,
        z,
        stats,
        improving_arcs,
    })
}

/// An arc attaining the value-function maximum at `v` for remaining
/// budget `t`; ties go to the lowest arc id.
pub fn policy_arc(inst: &Instance, result: &SotaResult, v: VertexId, t: i64) -> ArcId {
    debug_assert_ne!(v, result.target);
    let mut best: Option<(ArcId, f64)> = None;
    for &a in inst.out_arcs(v) {
        let q = arrival_probability(inst, result, a, t);
        match best {
            Some((_, bq)) if q <= bq + 1e-12 => {}
            _ => best = Some((a, q)),
        }
    }
    best.expect("policy queried at a vertex with no out-arc").0
}

/// Intervals `[t_start, t_end]` on which each arc is the policy choice at
/// `v`, up to the horizon where the value function reaches 1.
pub fn policy_intervals(
    inst: &Instance,
    result: &SotaResult,
    v: VertexId,
) -> Vec<(u64, u64, ArcId)> {
    let Some(pmf) = result.z[v].as_pmf() else {
        return Vec::new();
    };
    let horizon = pmf.max_support();
    let mut out: Vec<(u64, u64, ArcId)> = Vec::new();
    for t in 0..=horizon {
        let a = policy_arc(inst, result, v, t as i64);
        match out.last_mut() {
            Some((_, end, last)) if *last == a => *end = t,
            _ => out.push((t, t, a)),
        }
    }
    out
}

fn arrival_probability(inst: &Instance, result: &SotaResult, a: ArcId, t: i64) -> f64 {
    let arc = inst.arc(a);
    let z_u = &result.z[arc.head];
    let x = &arc.travel;
    let mut q = 0.0;
    for (i, &p) in x.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let k = x.offset() as i64 + i as i64;
        if k > t {
            break;
        }
        q += p * z_u.cdf(t - k);
    }
    q
}

/// One entry of an upper-bound list: an elementary v-target path with its
/// exact travel-time distribution and cost.
#[derive(Debug, Clone)]
pub struct UbEntry {
    pub path: Path,
    pub dist: Pmf,
    pub cost: f64,
}

/// Per-vertex lists of mutually non-dominated elementary paths to the
/// target.
#[derive(Debug, Clone)]
pub struct UbLists {
    pub lists: Vec<Vec<UbEntry>>,
}

/// Reconstructs up to `k` elementary paths per vertex by seeding with each
/// recorded improving arc and continuing greedily along the most recent
/// improving arc of every later vertex. Candidates that revisit a vertex
/// are discarded, then dominated entries are dropped.
pub fn build_upper_bound_lists(inst: &Instance, result: &SotaResult, k: usize) -> UbLists {
    let mut lists = Vec::with_capacity(inst.vertices());
    for v in 0..inst.vertices() {
        let mut entries: Vec<UbEntry> = Vec::new();
        if v == result.target {
            entries.push(UbEntry {
                path: Path::empty(),
                dist: Pmf::point(0),
                cost: 0.0,
            });
            lists.push(entries);
            continue;
        }
        for &first in result.improving_arcs[v].iter().rev() {
            if let Some(path) = greedy_path(inst, result, v, first) {
                let dist = inst.path_distribution(&path).expect("greedy path chains");
                let cost = inst.path_cost(&path).expect("greedy path chains");
                entries.push(UbEntry { path, dist, cost });
            }
        }
        let entries = drop_dominated(entries);
        lists.push(entries.into_iter().take(k).collect());
    }
    UbLists { lists }
}

fn greedy_path(
    inst: &Instance,
    result: &SotaResult,
    v: VertexId,
    first: ArcId,
) -> Option<Path> {
    let mut visited = vec![false; inst.vertices()];
    visited[v] = true;
    let mut arcs = vec![first];
    let mut cur = inst.arc(first).head;
    while cur != result.target {
        if visited[cur] {
            return None;
        }
        visited[cur] = true;
        let &next = result.improving_arcs[cur].last()?;
        arcs.push(next);
        cur = inst.arc(next).head;
    }
    if visited[cur] {
        return None;
    }
    Some(Path { arcs })
}

/// Keeps entries whose (distribution, cost) pair is not dominated by an
/// earlier-or-equal entry.
fn drop_dominated(entries: Vec<UbEntry>) -> Vec<UbEntry> {
    let mut kept: Vec<UbEntry> = Vec::new();
    'outer: for e in entries {
        for other in &kept {
            if other.dist.leq_st(&e.dist) && other.cost <= e.cost {
                continue 'outer;
            }
        }
        kept.retain(|o| !(e.dist.leq_st(&o.dist) && e.cost <= o.cost));
        kept.push(e);
    }
    kept
}

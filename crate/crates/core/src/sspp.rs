//! Label-setting solver minimizing a risk measure of the path travel-time
//! distribution, with stochastic lower-bound pruning and optional
//! upper-bound path lists.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use ordered_float::NotNan;
use thiserror::Error;

use crate::distribution::{Distribution, Pmf};
use crate::graph::{ArcId, Instance, Path};
use crate::risk::RiskMeasure;
use crate::sota::UbLists;

#[derive(Debug, Error)]
pub enum SsppError {
    #[error("no origin-destination path exists")]
    NoPath,
    #[error("arc {0} has P(X = 0) = 1; rewrite the instance first")]
    ZeroArcPresent(ArcId),
}

#[derive(Debug, Clone)]
pub struct SsppOptions {
    /// Order the queue by the risk key; FIFO when false (any extraction
    /// order is correct, the keyed order is just faster).
    pub use_priority_keys: bool,
}

impl Default for SsppOptions {
    fn default() -> Self {
        SsppOptions {
            use_priority_keys: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SsppStats {
    pub labels_treated: u64,
    pub labels_expanded: u64,
    pub cpu: Duration,
}

#[derive(Debug)]
pub struct SsppResult {
    pub value: f64,
    pub path: Path,
    /// Risk of the initial expectation-shortest path.
    pub initial_upper_bound: f64,
    pub stats: SsppStats,
}

struct LabelNode {
    vertex: usize,
    dist: Pmf,
    parent: Option<usize>,
    arc: Option<ArcId>,
}

pub fn solve_sspp(
    inst: &Instance,
    rho: &RiskMeasure,
    bounds: &[Distribution],
    ub_lists: Option<&UbLists>,
    options: &SsppOptions,
) -> Result<SsppResult, SsppError> {
    let start = Instant::now();
    if let Some(a) = (0..inst.arcs().len()).find(|&a| inst.arc(a).travel.is_deterministic_zero())
    {
        return Err(SsppError::ZeroArcPresent(a));
    }

    let p0 = inst
        .shortest_path_to_destination(inst.origin(), crate::graph::ArcWeight::Expectation)
        .ok_or(SsppError::NoPath)?;
    let p0_dist = inst.path_distribution(&p0).expect("dijkstra path chains");
    let mut ub = rho.evaluate(&p0_dist);
    let mut incumbent: Incumbent = Incumbent::Initial;

    // `key_bound` rather than the raw value: the key must lower-bound
    // the risk of every completion, which the tail-conditional CVaR
    // value itself does not.
    let key_of = |y: &Pmf, v: usize| -> f64 {
        match &bounds[v] {
            Distribution::Finite(z) => rho.key_bound(&y.convolve(z)),
            Distribution::PlusInfinity => f64::INFINITY,
        }
    };

    let mut labels: Vec<LabelNode> = Vec::new();
    let mut queue: BinaryHeap<Reverse<(NotNan<f64>, u64)>> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut stats = SsppStats::default();

    let y0 = Pmf::point(0);
    let k0 = key_of(&y0, inst.origin());
    labels.push(LabelNode {
        vertex: inst.origin(),
        dist: y0,
        parent: None,
        arc: None,
    });
    if k0 < ub || inst.origin() == inst.destination() {
        let key = if options.use_priority_keys { k0 } else { 0.0 };
        queue.push(Reverse((NotNan::new(key).unwrap(), seq)));
    }

    while let Some(Reverse((_, id))) = queue.pop() {
        stats.labels_treated += 1;
        let (vertex, label_key) = {
            let node = &labels[id as usize];
            (node.vertex, key_of(&node.dist, node.vertex))
        };

        if vertex == inst.destination() {
            let value = rho.evaluate(&labels[id as usize].dist);
            if value < ub {
                ub = value;
                incumbent = Incumbent::Label(id as usize);
            }
            continue;
        }

        // The bound may have tightened since this label was queued.
        if label_key >= ub {
            continue;
        }
        stats.labels_expanded += 1;

        if let Some(lists) = ub_lists {
            for entry in &lists.lists[vertex] {
                let combined = labels[id as usize].dist.convolve(&entry.dist);
                let value = rho.evaluate(&combined);
                if value < ub {
                    ub = value;
                    incumbent = Incumbent::Completed {
                        label: id as usize,
                        suffix: entry.path.clone(),
                    };
                }
            }
        }

        for &a in inst.out_arcs(vertex) {
            let arc = inst.arc(a);
            let y = labels[id as usize].dist.convolve(&arc.travel);
            let key = key_of(&y, arc.head);
            let at_destination = arc.head == inst.destination();
            // Creation-time pruning with the same test as expansion.
            if key >= ub && !(at_destination && rho.evaluate(&y) < ub) {
                continue;
            }
            labels.push(LabelNode {
                vertex: arc.head,
                dist: y,
                parent: Some(id as usize),
                arc: Some(a),
            });
            seq += 1;
            let qkey = if options.use_priority_keys { key } else { seq as f64 };
            queue.push(Reverse((NotNan::new(qkey).unwrap(), seq)));
        }
    }

    let path = match incumbent {
        Incumbent::Initial => p0,
        Incumbent::Label(id) => reconstruct(&labels, id),
        Incumbent::Completed { label, suffix } => {
            let mut p = reconstruct(&labels, label);
            p.arcs.extend(suffix.arcs);
            p
        }
    };
    // Incumbents may carry cycles; removal cannot increase the risk.
    let path = path.remove_cycles(inst);
    debug_assert!({
        let recomputed = rho.evaluate(&inst.path_distribution(&path).unwrap());
        (recomputed - ub).abs() <= 1e-9
    });

    stats.cpu = start.elapsed();
    Ok(SsppResult {
        value: ub,
        path,
        initial_upper_bound: rho.evaluate(&p0_dist),
        stats,
    })
}

enum Incumbent {
    Initial,
    Label(usize),
    Completed { label: usize, suffix: Path },
}

fn reconstruct(labels: &[LabelNode], mut id: usize) -> Path {
    let mut arcs = Vec::new();
    loop {
        let node = &labels[id];
        match (node.parent, node.arc) {
            (Some(p), Some(a)) => {
                arcs.push(a);
                id = p;
            }
            _ => break,
        }
    }
    arcs.reverse();
    Path { arcs }
}

/// Trivial lower bounds: the point mass at 0 for every vertex.
pub fn trivial_bounds(vertices: usize) -> Vec<Distribution> {
    vec![Distribution::point(0); vertices]
}

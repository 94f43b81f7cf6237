//! Label algorithm for minimum-cost paths under a risk-measure budget,
//! with Dijkstra cost bounds, stochastic feasibility pruning, an anytime
//! lower bound, and a wall-clock time limit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use ordered_float::NotNan;
use thiserror::Error;

use crate::distribution::{Distribution, Pmf};
use crate::graph::{ArcId, Instance, Path};
use crate::risk::RiskMeasure;
use crate::sota::UbLists;

/// Time-limit checks happen every this many label extractions.
const TIME_CHECK_STRIDE: u64 = 64;

#[derive(Debug, Error)]
pub enum SrcsppError {
    #[error("arc {0} has zero cost and P(X = 0) = 1")]
    PreconditionViolated(ArcId),
}

#[derive(Debug, Clone)]
pub struct SrcsppOptions {
    pub prune_feasibility: bool,
    pub prune_cost: bool,
}

impl Default for SrcsppOptions {
    fn default() -> Self {
        SrcsppOptions {
            prune_feasibility: true,
            prune_cost: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrcsppStatus {
    Optimal,
    Infeasible,
    TimeLimit,
}

#[derive(Debug, Clone, Default)]
pub struct SrcsppStats {
    pub labels_treated: u64,
    pub labels_expanded: u64,
    pub cpu: Duration,
}

#[derive(Debug)]
pub struct SrcsppResult {
    pub status: SrcsppStatus,
    pub cost: Option<f64>,
    pub path: Option<Path>,
    pub risk: Option<f64>,
    /// Branch-and-bound lower bound on the optimal cost; equals `cost` on
    /// Optimal.
    pub lower_bound: f64,
    /// `(cost - lower_bound) / cost`; infinite without an incumbent.
    pub gap: f64,
    /// Final cost upper bound; stays at the `1 + sum of arc costs`
    /// sentinel when no feasible path was found.
    pub final_upper_bound: f64,
    pub stats: SrcsppStats,
}

struct LabelNode {
    vertex: usize,
    dist: Pmf,
    cost: f64,
    parent: Option<usize>,
    arc: Option<ArcId>,
}

#[allow(clippy::too_many_arguments)]
pub fn solve_srcspp(
    inst: &Instance,
    rho: &RiskMeasure,
    rho0: f64,
    bounds: &[Distribution],
    pi: &[f64],
    ub_lists: Option<&UbLists>,
    time_limit: Duration,
    options: &SrcsppOptions,
) -> Result<SrcsppResult, SrcsppError> {
    let start = Instant::now();
    for (a, arc) in inst.arcs().iter().enumerate() {
        if arc.cost == 0.0 && arc.travel.is_deterministic_zero() {
            return Err(SrcsppError::PreconditionViolated(a));
        }
    }

    // Budget comparisons use a relative slack so that a budget computed
    // from the same floating-point quantities as an achievable risk does
    // not reject it over rounding in the last few digits.
    let budget = rho0 + 1e-9 * rho0.abs().max(1.0);

    let infeasible_sentinel: f64 = 1.0 + inst.arcs().iter().map(|a| a.cost).sum::<f64>();
    let mut cost_ub = infeasible_sentinel;
    let mut incumbent: Option<(usize, Option<Path>)> = None;

    // `key_bound` rather than the raw value: feasibility pruning needs a
    // lower bound on the risk of every completion, which the
    // tail-conditional CVaR value itself does not provide.
    let feasible_key = |y: &Pmf, v: usize| -> f64 {
        match &bounds[v] {
            Distribution::Finite(z) => rho.key_bound(&y.convolve(z)),
            Distribution::PlusInfinity => f64::INFINITY,
        }
    };

    let mut labels: Vec<LabelNode> = Vec::new();
    let mut queue: BinaryHeap<Reverse<(NotNan<f64>, u64)>> = BinaryHeap::new();
    let mut stats = SrcsppStats::default();

    labels.push(LabelNode {
        vertex: inst.origin(),
        dist: Pmf::point(0),
        cost: 0.0,
        parent: None,
        arc: None,
    });
    queue.push(Reverse((NotNan::new(pi[inst.origin()]).unwrap(), 0)));

    let mut timed_out = false;
    while let Some(&Reverse((_, id))) = queue.peek() {
        if stats.labels_treated % TIME_CHECK_STRIDE == 0 && start.elapsed() >= time_limit {
            timed_out = true;
            break;
        }
        queue.pop();
        stats.labels_treated += 1;
        let id = id as usize;
        let (vertex, cost) = (labels[id].vertex, labels[id].cost);

        if vertex == inst.destination() {
            if rho.evaluate(&labels[id].dist) <= budget && cost < cost_ub {
                cost_ub = cost;
                incumbent = Some((id, None));
            }
            continue;
        }

        let feasible = !options.prune_feasibility
            || feasible_key(&labels[id].dist, vertex) <= budget;
        let affordable = !options.prune_cost || cost + pi[vertex] < cost_ub;
        if !(feasible && affordable) {
            continue;
        }
        stats.labels_expanded += 1;

        if let Some(lists) = ub_lists {
            for entry in &lists.lists[vertex] {
                if cost + entry.cost < cost_ub {
                    let combined = labels[id].dist.convolve(&entry.dist);
                    if rho.evaluate(&combined) <= budget {
                        cost_ub = cost + entry.cost;
                        incumbent = Some((id, Some(entry.path.clone())));
                    }
                }
            }
        }

        for &a in inst.out_arcs(vertex) {
            let arc = inst.arc(a);
            let y = labels[id].dist.convolve(&arc.travel);
            let c = cost + arc.cost;
            let next = labels.len() as u64;
            labels.push(LabelNode {
                vertex: arc.head,
                dist: y,
                cost: c,
                parent: Some(id),
                arc: Some(a),
            });
            queue.push(Reverse((NotNan::new(c + pi[arc.head]).unwrap(), next)));
        }
    }

    // Anytime bound: incumbent cost against the smallest surviving key.
    let queue_min = queue
        .peek()
        .map_or(f64::INFINITY, |Reverse((k, _))| k.into_inner());
    let (status, lower_bound) = if timed_out {
        (SrcsppStatus::TimeLimit, cost_ub.min(queue_min))
    } else if incumbent.is_none() {
        (SrcsppStatus::Infeasible, f64::INFINITY)
    } else {
        (SrcsppStatus::Optimal, cost_ub)
    };

    let (cost, path, risk) = match incumbent {
        None => (None, None, None),
        Some((id, suffix)) => {
            let mut p = reconstruct(&labels, id);
            if let Some(s) = suffix {
                p.arcs.extend(s.arcs);
            }
            let p = p.remove_cycles(inst);
            let dist = inst.path_distribution(&p).expect("incumbent path chains");
            let cost = inst.path_cost(&p).expect("incumbent path chains");
            (Some(cost), Some(p), Some(rho.evaluate(&dist)))
        }
    };

    let gap = match cost {
        Some(c) if c > 0.0 => (c - lower_bound) / c,
        Some(_) => 0.0,
        None => f64::INFINITY,
    };

    stats.cpu = start.elapsed();
    Ok(SrcsppResult {
        status,
        cost,
        path,
        risk,
        lower_bound,
        gap,
        final_upper_bound: cost_ub,
        stats,
    })
}

fn reconstruct(labels: &[LabelNode], mut id: usize) -> Path {
    let mut arcs = Vec::new();
    while let (Some(p), Some(a)) = (labels[id].parent, labels[id].arc) {
        arcs.push(a);
        id = p;
    }
    arcs.reverse();
    Path { arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::diamond;
    use crate::graph::ArcWeight;
    use crate::sota::solve_sota;

    fn setup(inst: &Instance) -> (Vec<Distribution>, Vec<f64>) {
        let bounds = solve_sota(inst, inst.destination()).unwrap().z;
        let pi = inst.dijkstra_to_destination(ArcWeight::Cost);
        (bounds, pi)
    }

    fn limit() -> Duration {
        Duration::from_secs(60)
    }

    #[test]
    fn tight_budget_forces_expensive_route() {
        let inst = diamond();
        let (bounds, pi) = setup(&inst);
        let res = solve_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            0.1,
            &bounds,
            &pi,
            None,
            limit(),
            &SrcsppOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SrcsppStatus::Optimal);
        assert_eq!(res.cost, Some(10.0));
        assert_eq!(res.path.as_ref().unwrap().arcs, vec![2, 3]);
        assert_eq!(res.risk, Some(0.0));
        assert_eq!(res.lower_bound, 10.0);
    }

    #[test]
    fn loose_budget_takes_cheap_route() {
        let inst = diamond();
        let (bounds, pi) = setup(&inst);
        let res = solve_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            0.6,
            &bounds,
            &pi,
            None,
            limit(),
            &SrcsppOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SrcsppStatus::Optimal);
        assert_eq!(res.cost, Some(2.0));
        assert_eq!(res.path.as_ref().unwrap().arcs, vec![0, 1]);
    }

    #[test]
    fn negative_budget_is_infeasible() {
        let inst = diamond();
        let (bounds, pi) = setup(&inst);
        let res = solve_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            -0.1,
            &bounds,
            &pi,
            None,
            limit(),
            &SrcsppOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SrcsppStatus::Infeasible);
        assert!(res.cost.is_none());
        assert!(res.gap.is_infinite());
    }

    #[test]
    fn zero_time_limit_reports_dijkstra_bound() {
        let inst = diamond();
        let (bounds, pi) = setup(&inst);
        let res = solve_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            0.1,
            &bounds,
            &pi,
            None,
            Duration::ZERO,
            &SrcsppOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SrcsppStatus::TimeLimit);
        assert!(res.cost.is_none());
        assert_eq!(res.lower_bound, pi[0]);
        assert!(res.gap.is_infinite());
    }

    #[test]
    fn pruning_ablation_keeps_value() {
        let inst = diamond();
        let (bounds, pi) = setup(&inst);
        let rho = RiskMeasure::ProbGeq { tau: 4 };
        let base = solve_srcspp(
            &inst,
            &rho,
            0.1,
            &bounds,
            &pi,
            None,
            limit(),
            &SrcsppOptions::default(),
        )
        .unwrap();
        for opts in [
            SrcsppOptions { prune_feasibility: false, prune_cost: true },
            SrcsppOptions { prune_feasibility: true, prune_cost: false },
        ] {
            let alt =
                solve_srcspp(&inst, &rho, 0.1, &bounds, &pi, None, limit(), &opts).unwrap();
            assert_eq!(alt.status, SrcsppStatus::Optimal);
            assert_eq!(alt.cost, base.cost);
        }
    }

    #[test]
    fn rejects_zero_cost_zero_time_arc() {
        let mut arcs = diamond().arcs().to_vec();
        arcs[0].cost = 0.0;
        arcs[0].travel = Pmf::point(0);
        let inst = Instance::new(4, 0, 3, arcs).unwrap();
        let (bounds, pi) = setup(&inst);
        let err = solve_srcspp(
            &inst,
            &RiskMeasure::mean(),
            10.0,
            &bounds,
            &pi,
            None,
            limit(),
            &SrcsppOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SrcsppError::PreconditionViolated(0)));
    }

    #[test]
    fn ub_lists_do_not_change_optimum() {
        let inst = diamond();
        let sota = solve_sota(&inst, inst.destination()).unwrap();
        let pi = inst.dijkstra_to_destination(ArcWeight::Cost);
        let lists = crate::sota::build_upper_bound_lists(&inst, &sota, 2);
        let rho = RiskMeasure::ProbGeq { tau: 4 };
        let with = solve_srcspp(
            &inst, &rho, 0.1, &sota.z, &pi, Some(&lists), limit(),
            &SrcsppOptions::default(),
        )
        .unwrap();
        assert_eq!(with.status, SrcsppStatus::Optimal);
        assert_eq!(with.cost, Some(10.0));
    }
}

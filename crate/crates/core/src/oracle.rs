//! Brute-force reference implementations, written directly against the
//! problem definitions. Test and verification use only; shares nothing
//! with the solvers beyond the distribution type.

use thiserror::Error;

use crate::graph::{Instance, Path, VertexId};
use crate::risk::RiskMeasure;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration budget exceeded ({0})")]
    BudgetExceeded(&'static str),
    #[error("no origin-destination path exists")]
    NoPath,
    #[error("arc {0} has probability mass at zero")]
    ZeroMassAtZero(usize),
}

#[derive(Debug, Clone)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_paths: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_paths: 1_000_000,
        }
    }
}

/// All elementary origin-destination paths, in DFS order (arcs tried in
/// id order).
pub fn enumerate_elementary_paths(
    inst: &Instance,
    budget: &OracleBudget,
) -> Result<Vec<Path>, OracleError> {
    if inst.vertices() > budget.max_vertices {
        return Err(OracleError::BudgetExceeded("max_vertices"));
    }
    let mut paths = Vec::new();
    let mut visited = vec![false; inst.vertices()];
    let mut stack = Vec::new();
    visited[inst.origin()] = true;
    dfs(inst, inst.origin(), &mut visited, &mut stack, &mut paths, budget)?;
    Ok(paths)
}

fn dfs(
    inst: &Instance,
    v: VertexId,
    visited: &mut Vec<bool>,
    stack: &mut Vec<usize>,
    paths: &mut Vec<Path>,
    budget: &OracleBudget,
) -> Result<(), OracleError> {
    if v == inst.destination() {
        if paths.len() >= budget.max_paths {
            return Err(OracleError::BudgetExceeded("max_paths"));
        }
        paths.push(Path { arcs: stack.clone() });
        return Ok(());
    }
    for &a in inst.out_arcs(v) {
        let head = inst.arc(a).head;
        if visited[head] {
            continue;
        }
        visited[head] = true;
        stack.push(a);
        dfs(inst, head, visited, stack, paths, budget)?;
        stack.pop();
        visited[head] = false;
    }
    Ok(())
}

/// Exhaustive minimum of `rho` over elementary o-d paths; ties go to the
/// lexicographically smallest vertex sequence.
pub fn oracle_sspp(
    inst: &Instance,
    rho: &RiskMeasure,
    budget: &OracleBudget,
) -> Result<(f64, Path), OracleError> {
    let paths = enumerate_elementary_paths(inst, budget)?;
    let mut best: Option<(f64, Vec<VertexId>, Path)> = None;
    for p in paths {
        let value = rho.evaluate(&inst.path_distribution(&p).expect("enumerated path chains"));
        let seq = p.vertex_sequence(inst, inst.origin());
        let better = match &best {
            None => true,
            Some((bv, bseq, _)) => value < *bv - 1e-15 || ((value - bv).abs() <= 1e-15 && seq < *bseq),
        };
        if better {
            best = Some((value, seq, p));
        }
    }
    best.map(|(v, _, p)| (v, p)).ok_or(OracleError::NoPath)
}

/// Exhaustive minimum cost over feasible elementary paths, or `None` when
/// no path satisfies the risk budget.
pub fn oracle_srcspp(
    inst: &Instance,
    rho: &RiskMeasure,
    rho0: f64,
    budget: &OracleBudget,
) -> Result<Option<(f64, Path)>, OracleError> {
    let paths = enumerate_elementary_paths(inst, budget)?;
    let mut best: Option<(f64, Vec<VertexId>, Path)> = None;
    // Same relative slack as the label solver, so the two agree on
    // budgets that sit exactly on an achievable risk value.
    let slack = rho0 + 1e-9 * rho0.abs().max(1.0);
    for p in paths {
        let risk = rho.evaluate(&inst.path_distribution(&p).expect("enumerated path chains"));
        if risk > slack {
            continue;
        }
        let cost = inst.path_cost(&p).expect("enumerated path chains");
        let seq = p.vertex_sequence(inst, inst.origin());
        let better = match &best {
            None => true,
            Some((bc, bseq, _)) => cost < *bc - 1e-15 || ((cost - bc).abs() <= 1e-15 && seq < *bseq),
        };
        if better {
            best = Some((cost, seq, p));
        }
    }
    Ok(best.map(|(c, _, p)| (c, p)))
}

/// Direct value-iteration evaluation of the on-time-arrival recursion for
/// `t = 0..=horizon`. Requires every arc to have min support >= 1 so each
/// `F_v(t)` only depends on values at strictly smaller `t`.
pub fn oracle_sota(
    inst: &Instance,
    horizon: u64,
) -> Result<Vec<Vec<f64>>, OracleError> {
    for (a, arc) in inst.arcs().iter().enumerate() {
        if arc.travel.min_support() == 0 {
            return Err(OracleError::ZeroMassAtZero(a));
        }
    }
    let n = inst.vertices();
    let t_max = horizon as usize;
    let mut f = vec![vec![0.0; t_max + 1]; n];
    for t in 0..=t_max {
        f[inst.destination()][t] = 1.0;
        for v in 0..n {
            if v == inst.destination() {
                continue;
            }
            let mut best = 0.0f64;
            for &a in inst.out_arcs(v) {
                let arc = inst.arc(a);
                let x = &arc.travel;
                let mut sum = 0.0;
                for (i, &p) in x.probs().iter().enumerate() {
                    let k = x.offset() as usize + i;
                    if k > t || p == 0.0 {
                        continue;
                    }
                    sum += p * f[arc.head][t - k];
                }
                best = best.max(sum);
            }
            f[v][t] = best;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Pmf;
    use crate::fixtures::diamond;
    use crate::graph::InstanceArc;

    #[test]
    fn diamond_has_two_paths() {
        let inst = diamond();
        let paths = enumerate_elementary_paths(&inst, &OracleBudget::default()).unwrap();
        let mut arcs: Vec<Vec<usize>> = paths.iter().map(|p| p.arcs.clone()).collect();
        arcs.sort();
        assert_eq!(arcs, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn chain_has_one_path() {
        let inst = Instance::new(
            3,
            0,
            2,
            vec![
                InstanceArc { tail: 0, head: 1, cost: 1.0, travel: Pmf::point(1) },
                InstanceArc { tail: 1, head: 2, cost: 1.0, travel: Pmf::point(1) },
            ],
        )
        .unwrap();
        let paths = enumerate_elementary_paths(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(paths.len(), 1);
    }

    #[test]
    fn complete_digraph_on_four_vertices() {
        // o=0, x=1, y=2, d=3, all ordered pairs: o-d elementary paths are
        // d, x-d, y-d, x-y-d, y-x-d = 5.
        let mut arcs = Vec::new();
        for u in 0..4usize {
            for v in 0..4usize {
                if u != v {
                    arcs.push(InstanceArc {
                        tail: u,
                        head: v,
                        cost: 1.0,
                        travel: Pmf::point(1),
                    });
                }
            }
        }
        let inst = Instance::new(4, 0, 3, arcs).unwrap();
        let paths = enumerate_elementary_paths(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(paths.len(), 5);
    }

    #[test]
    fn oracle_solvers_on_diamond() {
        let inst = diamond();
        let (v, p) = oracle_sspp(&inst, &RiskMeasure::ProbGeq { tau: 4 }, &OracleBudget::default())
            .unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(p.arcs, vec![2, 3]);

        let best = oracle_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            0.1,
            &OracleBudget::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(best.0, 10.0);

        let none = oracle_srcspp(
            &inst,
            &RiskMeasure::ProbGeq { tau: 4 },
            -1.0,
            &OracleBudget::default(),
        )
        .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn oracle_sota_matches_hand_recurrence() {
        let inst = diamond();
        let f = oracle_sota(&inst, 5).unwrap();
        assert_eq!(f[3][0], 1.0);
        assert_eq!(f[0][2], 0.5);
        assert_eq!(f[0][3], 1.0);
        // Deterministic chain with lengths 2 and 3.
        let chain = Instance::new(
            3,
            0,
            2,
            vec![
                InstanceArc { tail: 0, head: 1, cost: 0.0, travel: Pmf::point(2) },
                InstanceArc { tail: 1, head: 2, cost: 0.0, travel: Pmf::point(3) },
            ],
        )
        .unwrap();
        let f = oracle_sota(&chain, 7).unwrap();
        for t in 0..=7usize {
            assert_eq!(f[0][t], if t >= 5 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn oracle_sota_rejects_mass_at_zero() {
        let mut arcs = diamond().arcs().to_vec();
        arcs[0].travel = Pmf::from_pmf(0, &[0.5, 0.5]).unwrap();
        let inst = Instance::new(4, 0, 3, arcs).unwrap();
        assert!(matches!(
            oracle_sota(&inst, 5),
            Err(OracleError::ZeroMassAtZero(0))
        ));
    }
}

//! Instance model: directed graph with stochastic arc travel times and
//! deterministic nonnegative arc costs, plus validation, Dijkstra,
//! the zero-arc rewrite, path utilities, and JSON I/O.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::NotNan;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::{DistributionError, Pmf};

pub type VertexId = usize;
pub type ArcId = usize;

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("arc {arc} is a loop at vertex {vertex}")]
    Loop { arc: ArcId, vertex: VertexId },
    #[error("arc {arc} references vertex {vertex} outside 0..{vertices}")]
    VertexOutOfRange {
        arc: ArcId,
        vertex: VertexId,
        vertices: usize,
    },
    #[error("arc {arc} has negative cost {cost}")]
    NegativeCost { arc: ArcId, cost: f64 },
    #[error("circuit of deterministic-zero arcs through vertices {0:?}")]
    ZeroCircuit(Vec<VertexId>),
    #[error("no path from origin to destination")]
    NoPathToDestination,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Error)]
pub enum PathError {
    #[error("arcs {prev} and {next} do not chain")]
    InvalidChain { prev: ArcId, next: ArcId },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceArc {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: f64,
    pub travel: Pmf,
}

#[derive(Debug, Clone)]
pub struct Instance {
    vertices: usize,
    origin: VertexId,
    destination: VertexId,
    arcs: Vec<InstanceArc>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

/// Non-fatal findings from [`Instance::validate`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    /// Vertices with no path to the destination; solvers leave them at
    /// the lattice identity and they may be dropped entirely.
    pub unreachable_to_destination: Vec<VertexId>,
}

/// Which scalar an arc contributes to a deterministic shortest path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcWeight {
    Cost,
    Expectation,
    MinSupport,
    MaxSupport,
}

impl ArcWeight {
    fn of(self, arc: &InstanceArc) -> f64 {
        match self {
            ArcWeight::Cost => arc.cost,
            ArcWeight::Expectation => arc.travel.expectation(),
            ArcWeight::MinSupport => arc.travel.min_support() as f64,
            ArcWeight::MaxSupport => arc.travel.max_support() as f64,
        }
    }
}

impl Instance {
    pub fn new(
        vertices: usize,
        origin: VertexId,
        destination: VertexId,
        arcs: Vec<InstanceArc>,
    ) -> Result<Self, ValidationError> {
        for (id, arc) in arcs.iter().enumerate() {
            for v in [arc.tail, arc.head] {
                if v >= vertices {
                    return Err(ValidationError::VertexOutOfRange {
                        arc: id,
                        vertex: v,
                        vertices,
                    });
                }
            }
            if arc.tail == arc.head {
                return Err(ValidationError::Loop {
                    arc: id,
                    vertex: arc.tail,
                });
            }
            if arc.cost < 0.0 {
                return Err(ValidationError::NegativeCost {
                    arc: id,
                    cost: arc.cost,
                });
            }
        }
        let mut out_arcs = vec![Vec::new(); vertices];
        let mut in_arcs = vec![Vec::new(); vertices];
        for (id, arc) in arcs.iter().enumerate() {
            out_arcs[arc.tail].push(id);
            in_arcs[arc.head].push(id);
        }
        Ok(Instance {
            vertices,
            origin,
            destination,
            arcs,
            out_arcs,
            in_arcs,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn destination(&self) -> VertexId {
        self.destination
    }

    pub fn arcs(&self) -> &[InstanceArc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &InstanceArc {
        &self.arcs[id]
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v]
    }

    /// Checks zero-circuit freedom and o-d connectivity; reports vertices
    /// that cannot reach the destination.
    pub fn validate(&self) -> Result<ValidationReport, ValidationError> {
        self.check_zero_circuits()?;
        let reach = self.reaches_destination();
        if !reach[self.origin] {
            return Err(ValidationError::NoPathToDestination);
        }
        let unreachable = (0..self.vertices).filter(|&v| !reach[v]).collect();
        Ok(ValidationReport {
            unreachable_to_destination: unreachable,
        })
    }

    /// Cycle detection restricted to arcs with `P(X = 0) = 1`.
    pub fn check_zero_circuits(&self) -> Result<(), ValidationError> {
        let mut color = vec![0u8; self.vertices]; // 0 white, 1 gray, 2 black
        let mut stack: Vec<(VertexId, usize)> = Vec::new();
        let mut path: Vec<VertexId> = Vec::new();
        for start in 0..self.vertices {
            if color[start] != 0 {
                continue;
            }
            stack.push((start, 0));
            color[start] = 1;
            path.push(start);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let mut advanced = false;
                while *next < self.out_arcs[v].len() {
                    let a = self.out_arcs[v][*next];
                    *next += 1;
                    if !self.arcs[a].travel.is_deterministic_zero() {
                        continue;
                    }
                    let w = self.arcs[a].head;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            stack.push((w, 0));
                            path.push(w);
                            advanced = true;
                            break;
                        }
                        1 => {
                            let pos = path.iter().position(|&x| x == w).unwrap();
                            return Err(ValidationError::ZeroCircuit(path[pos..].to_vec()));
                        }
                        _ => {}
                    }
                }
                if !advanced {
                    color[v] = 2;
                    stack.pop();
                    path.pop();
                }
            }
        }
        Ok(())
    }

    fn reaches_destination(&self) -> Vec<bool> {
        let mut seen = vec![false; self.vertices];
        let mut queue = vec![self.destination];
        seen[self.destination] = true;
        while let Some(v) = queue.pop() {
            for &a in &self.in_arcs[v] {
                let u = self.arcs[a].tail;
                if !seen[u] {
                    seen[u] = true;
                    queue.push(u);
                }
            }
        }
        seen
    }

    /// Least total weight of a v-destination path, for every v.
    /// Unreachable vertices get `+inf`.
    pub fn dijkstra_to_destination(&self, weight: ArcWeight) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.vertices];
        let mut heap: BinaryHeap<Reverse<(NotNan<f64>, VertexId)>> = BinaryHeap::new();
        dist[self.destination] = 0.0;
        heap.push(Reverse((NotNan::new(0.0).unwrap(), self.destination)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d.into_inner() > dist[v] {
                continue;
            }
            for &a in &self.in_arcs[v] {
                let arc = &self.arcs[a];
                let nd = d.into_inner() + weight.of(arc);
                if nd < dist[arc.tail] {
                    dist[arc.tail] = nd;
                    heap.push(Reverse((NotNan::new(nd).unwrap(), arc.tail)));
                }
            }
        }
        dist
    }

    /// A least-weight path from `from` to the destination, extracted by
    /// greedy descent on the Dijkstra potentials (lowest arc id on ties).
    pub fn shortest_path_to_destination(
        &self,
        from: VertexId,
        weight: ArcWeight,
    ) -> Option<Path> {
        let dist = self.dijkstra_to_destination(weight);
        if !dist[from].is_finite() {
            return None;
        }
        let mut arcs = Vec::new();
        let mut v = from;
        while v != self.destination {
            let mut chosen = None;
            for &a in &self.out_arcs[v] {
                let arc = &self.arcs[a];
                if (weight.of(arc) + dist[arc.head] - dist[v]).abs() <= 1e-9 {
                    chosen = Some(a);
                    break;
                }
            }
            let a = chosen?;
            arcs.push(a);
            v = self.arcs[a].head;
            if arcs.len() > self.vertices {
                // Zero-weight cycles would loop the greedy walk.
                return None;
            }
        }
        Some(Path { arcs })
    }

    /// Left-fold convolution of the arc travel times along `path`.
    pub fn path_distribution(&self, path: &Path) -> Result<Pmf, PathError> {
        self.check_chain(path)?;
        let mut acc = Pmf::point(0);
        for &a in &path.arcs {
            acc = acc.convolve(&self.arcs[a].travel);
        }
        Ok(acc)
    }

    pub fn path_cost(&self, path: &Path) -> Result<f64, PathError> {
        self.check_chain(path)?;
        Ok(path.arcs.iter().map(|&a| self.arcs[a].cost).sum())
    }

    fn check_chain(&self, path: &Path) -> Result<(), PathError> {
        for w in path.arcs.windows(2) {
            if self.arcs[w[0]].head != self.arcs[w[1]].tail {
                return Err(PathError::InvalidChain {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        Ok(())
    }

    /// Eliminates arcs with `P(X = 0) = 1` per the rewrite that replaces a
    /// zero arc (u,v) by copies of its neighbors' arcs, repeated to
    /// fixpoint. A deterministic-zero origin-destination arc cannot be
    /// rewritten and is reported instead.
    pub fn zero_arc_transform(&self) -> Result<ZeroArcTransform, ValidationError> {
        self.check_zero_circuits()?;
        let mut arcs: Vec<InstanceArc> = self.arcs.clone();
        let budget = (self.arcs.len() * self.arcs.len()).max(1024) * 4;
        let mut steps = 0usize;
        loop {
            let pick = arcs.iter().position(|a| {
                a.travel.is_deterministic_zero()
                    && !(a.tail == self.origin && a.head == self.destination)
            });
            let Some(idx) = pick else { break };
            steps += 1;
            assert!(steps <= budget, "zero-arc rewrite failed to reach fixpoint");
            let zero = arcs.remove(idx);
            let mut added: Vec<InstanceArc> = Vec::new();
            for a in &arcs {
                if a.head == zero.tail && a.tail != zero.head {
                    added.push(InstanceArc {
                        tail: a.tail,
                        head: zero.head,
                        cost: a.cost + zero.cost,
                        travel: a.travel.clone(),
                    });
                }
                if a.tail == zero.head && a.head != zero.tail {
                    added.push(InstanceArc {
                        tail: zero.tail,
                        head: a.head,
                        cost: zero.cost + a.cost,
                        travel: a.travel.clone(),
                    });
                }
            }
            for new_arc in added {
                let duplicate = arcs.iter().any(|a| {
                    a.tail == new_arc.tail
                        && a.head == new_arc.head
                        && a.cost == new_arc.cost
                        && a.travel == new_arc.travel
                });
                if !duplicate {
                    arcs.push(new_arc);
                }
            }
        }
        let residual_zero_arc = arcs.iter().any(|a| a.travel.is_deterministic_zero());

        // Drop arcs touching vertices that lost all paths to the
        // destination.
        let interim = Instance::new(self.vertices, self.origin, self.destination, arcs)?;
        let reach = interim.reaches_destination();
        let pruned: Vec<VertexId> = (0..self.vertices)
            .filter(|&v| !reach[v] && v != self.destination)
            .collect();
        let kept: Vec<InstanceArc> = interim
            .arcs
            .into_iter()
            .filter(|a| reach[a.tail] && reach[a.head])
            .collect();
        let instance = Instance::new(self.vertices, self.origin, self.destination, kept)?;
        Ok(ZeroArcTransform {
            instance,
            residual_zero_arc,
            pruned,
        })
    }

    pub fn load(bytes: &[u8]) -> Result<(Instance, ValidationReport), LoadError> {
        let repr: InstanceRepr = serde_json::from_slice(bytes)?;
        let instance = Instance::new(repr.vertices, repr.origin, repr.destination, repr.arcs)
            .map_err(LoadError::Validation)?;
        let report = instance.validate()?;
        Ok((instance, report))
    }

    /// Canonical JSON: arcs stably sorted by (tail, head).
    pub fn save(&self) -> Vec<u8> {
        let mut arcs = self.arcs.clone();
        arcs.sort_by_key(|a| (a.tail, a.head));
        let repr = InstanceRepr {
            vertices: self.vertices,
            origin: self.origin,
            destination: self.destination,
            arcs,
        };
        let mut out = serde_json::to_vec_pretty(&repr).expect("instance serializes");
        out.push(b'\n');
        out
    }
}

#[derive(Debug)]
pub struct ZeroArcTransform {
    pub instance: Instance,
    /// True when a deterministic-zero origin-destination arc remains; the
    /// label solvers cannot accept such an instance as-is.
    pub residual_zero_arc: bool,
    pub pruned: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    vertices: usize,
    origin: VertexId,
    destination: VertexId,
    arcs: Vec<InstanceArc>,
}

/// An arc sequence chained head-to-tail. The empty path is the trivial
/// path at a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub arcs: Vec<ArcId>,
}

impl Path {
    pub fn empty() -> Self {
        Path { arcs: Vec::new() }
    }

    /// Vertex sequence, given the start vertex for empty paths.
    pub fn vertex_sequence(&self, inst: &Instance, start: VertexId) -> Vec<VertexId> {
        let mut seq = Vec::with_capacity(self.arcs.len() + 1);
        if let Some(&first) = self.arcs.first() {
            seq.push(inst.arc(first).tail);
        } else {
            seq.push(start);
        }
        for &a in &self.arcs {
            seq.push(inst.arc(a).head);
        }
        seq
    }

    pub fn is_elementary(&self, inst: &Instance, start: VertexId) -> bool {
        let seq = self.vertex_sequence(inst, start);
        let mut seen = vec![false; inst.vertices()];
        for v in seq {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// Removes cycles from the vertex sequence; the result is elementary
    /// with the same endpoints.
    pub fn remove_cycles(&self, inst: &Instance) -> Path {
        let mut arcs: Vec<ArcId> = Vec::new();
        let mut last_index: Vec<Option<usize>> = vec![None; inst.vertices()];
        if let Some(&first) = self.arcs.first() {
            last_index[inst.arc(first).tail] = Some(0);
        }
        for &a in &self.arcs {
            let head = inst.arc(a).head;
            if let Some(pos) = last_index[head] {
                for dropped in arcs.drain(pos..) {
                    let h = inst.arc(dropped).head;
                    last_index[h] = None;
                }
                last_index[head] = Some(arcs.len());
            } else {
                arcs.push(a);
                last_index[head] = Some(arcs.len());
            }
        }
        Path { arcs }
    }
}

//! Helpers shared by the integration and acceptance suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stochpath_core::distribution::{Distribution, Pmf};
use stochpath_core::graph::{Instance, InstanceArc};
use stochpath_core::sota::SotaResult;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random pmf with min support in `offset_lo..=offset_hi` and up to
/// `max_len` support points.
pub fn random_travel<R: Rng>(r: &mut R, offset_lo: u64, offset_hi: u64, max_len: usize) -> Pmf {
    let offset = r.gen_range(offset_lo..=offset_hi);
    let len = r.gen_range(1..=max_len);
    let mut probs: Vec<f64> = (0..len).map(|_| r.gen_range(0.05..1.0)).collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Pmf::from_pmf(offset, &probs).unwrap()
}

/// Random connected instance with at most `max_vertices` vertices.
/// A spine 0 -> 1 -> ... -> n-1 guarantees an origin-destination path;
/// extra arcs appear per ordered pair with probability `density`. All
/// min supports are at least `offset_lo`.
pub fn random_instance<R: Rng>(
    r: &mut R,
    max_vertices: usize,
    offset_lo: u64,
    density: f64,
) -> Instance {
    let n = r.gen_range(3..=max_vertices);
    let mut arcs = Vec::new();
    for v in 0..n - 1 {
        arcs.push(InstanceArc {
            tail: v,
            head: v + 1,
            cost: r.gen_range(1..=20) as f64,
            travel: random_travel(r, offset_lo, offset_lo + 4, 4),
        });
    }
    for u in 0..n {
        for v in 0..n {
            if u == v || v == u + 1 {
                continue;
            }
            if r.gen_bool(density) {
                arcs.push(InstanceArc {
                    tail: u,
                    head: v,
                    cost: r.gen_range(1..=20) as f64,
                    travel: random_travel(r, offset_lo, offset_lo + 4, 4),
                });
            }
        }
    }
    Instance::new(n, 0, n - 1, arcs).unwrap()
}

/// Max absolute deviation of the fixed-point recursion: for each vertex
/// `v != target`, `F_{Z_v}` must equal the pointwise max over out-arcs
/// `(v, u)` of the CDF of `X_a + Z_u`.
pub fn sota_residual(inst: &Instance, result: &SotaResult) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..inst.vertices() {
        if v == result.target {
            continue;
        }
        let candidates: Vec<Distribution> = inst
            .out_arcs(v)
            .iter()
            .map(|&a| {
                let arc = inst.arc(a);
                match &result.z[arc.head] {
                    Distribution::Finite(z) => {
                        Distribution::finite(arc.travel.convolve(z))
                    }
                    Distribution::PlusInfinity => Distribution::PlusInfinity,
                }
            })
            .collect();
        let horizon = candidates
            .iter()
            .chain(std::iter::once(&result.z[v]))
            .filter_map(|d| d.as_pmf().map(|p| p.max_support()))
            .max()
            .unwrap_or(0);
        for t in 0..=horizon as i64 {
            let rhs = candidates
                .iter()
                .map(|c| c.cdf(t))
                .fold(0.0f64, f64::max);
            worst = worst.max((result.z[v].cdf(t) - rhs).abs());
        }
    }
    worst
}

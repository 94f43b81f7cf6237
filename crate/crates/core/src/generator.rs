//! Benchmark instance generation: n-by-n bidirected grids with generic,
//! lognormal, or gamma discretized arc-delay distributions, plus the
//! parameter-derivation helpers used by the benchmark sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Continuous, Gamma, LogNormal};
use thiserror::Error;

use crate::distribution::Pmf;
use crate::graph::{Instance, InstanceArc};
use crate::risk::RiskMeasure;

/// Largest minimum arc travel time `t0` drawn per arc.
const T0_MAX: u64 = 50;
/// Per-arc redraw attempts before giving up.
const MAX_REDRAWS: u32 = 10_000;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("grid width must be at least 2, got {0}")]
    WidthTooSmall(usize),
    #[error("truncation threshold must be positive, got {0}")]
    BadThreshold(f64),
    #[error("arc distribution degenerate after {MAX_REDRAWS} redraws")]
    DegenerateArc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Generic,
    Lognormal,
    LognormalLong,
    Gamma,
}

impl Family {
    /// Suffix used in instance names, matching the benchmark naming
    /// scheme (R, Ls, Ll, G).
    pub fn suffix(self) -> &'static str {
        match self {
            Family::Generic => "R",
            Family::Lognormal => "Ls",
            Family::LognormalLong => "Ll",
            Family::Gamma => "G",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub width: usize,
    pub family: Family,
    pub seed: u64,
    /// Tail truncation threshold, as a fraction of the peak density.
    pub eps: f64,
}

impl GenSpec {
    pub fn instance_name(&self) -> String {
        format!("g{}{}", self.width, self.family.suffix())
    }
}

#[derive(Debug)]
pub struct Generated {
    pub instance: Instance,
    /// Arcs whose distribution draw collapsed and had to be redrawn.
    pub degenerate_redraws: u64,
}

/// Builds the n-by-n grid with both directions per grid edge. The origin
/// is the upper-left corner, the destination the lower-right one. Each
/// arc draws from its own RNG stream, so content does not depend on
/// iteration order.
pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    if spec.width < 2 {
        return Err(GenError::WidthTooSmall(spec.width));
    }
    if spec.eps <= 0.0 {
        return Err(GenError::BadThreshold(spec.eps));
    }
    let n = spec.width;
    let mut arcs = Vec::with_capacity(4 * n * (n - 1));
    let mut redraws = 0u64;
    let mut stream: u64 = 0;
    for row in 0..n {
        for col in 0..n {
            let v = row * n + col;
            if col + 1 < n {
                for (tail, head) in [(v, v + 1), (v + 1, v)] {
                    arcs.push(draw_arc(spec, tail, head, stream, &mut redraws)?);
                    stream += 1;
                }
            }
            if row + 1 < n {
                for (tail, head) in [(v, v + n), (v + n, v)] {
                    arcs.push(draw_arc(spec, tail, head, stream, &mut redraws)?);
                    stream += 1;
                }
            }
        }
    }
    let instance =
        Instance::new(n * n, 0, n * n - 1, arcs).expect("generated grid is structurally valid");
    Ok(Generated {
        instance,
        degenerate_redraws: redraws,
    })
}

fn draw_arc(
    spec: &GenSpec,
    tail: usize,
    head: usize,
    stream: u64,
    redraws: &mut u64,
) -> Result<InstanceArc, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);
    for _ in 0..MAX_REDRAWS {
        let Some(travel) = draw_distribution(spec, &mut rng) else {
            *redraws += 1;
            continue;
        };
        if travel.is_deterministic_zero() {
            *redraws += 1;
            continue;
        }
        let cost_hi = (2 * travel.min_support()).max(1);
        let cost = rng.gen_range(1..=cost_hi) as f64;
        return Ok(InstanceArc {
            tail,
            head,
            cost,
            travel,
        });
    }
    Err(GenError::DegenerateArc)
}

fn draw_distribution(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Option<Pmf> {
    let t0 = rng.gen_range(0..=T0_MAX);
    let raw = match spec.family {
        Family::Generic => {
            let support = rng.gen_range(1..=(2 * t0).max(1)) as usize;
            // Interval mix chosen to force strong variance spread among
            // the arcs.
            let intervals = [1.0, 10.0, 1000.0];
            (0..support)
                .map(|_| {
                    let hi = intervals[rng.gen_range(0..intervals.len())];
                    rng.gen_range(0.0..hi)
                })
                .collect::<Vec<f64>>()
        }
        Family::Lognormal | Family::LognormalLong => {
            if t0 == 0 {
                return None;
            }
            let m = match spec.family {
                Family::LognormalLong => 4.0 * t0 as f64,
                _ => 2.0 * t0 as f64,
            };
            let (mu, var) = draw_moments(rng, m)?;
            let sigma_ln_sq = (1.0 + var / (mu * mu)).ln();
            let mu_ln = mu.ln() - sigma_ln_sq / 2.0;
            let dist = LogNormal::new(mu_ln, sigma_ln_sq.sqrt()).ok()?;
            densities(spec.eps, |t| dist.pdf(t))
        }
        Family::Gamma => {
            let (mu, var) = draw_moments(rng, 10.0)?;
            let shape = mu * mu / var;
            let rate = mu / var;
            let dist = Gamma::new(shape, rate).ok()?;
            densities(spec.eps, |t| {
                let v = dist.pdf(t);
                // Shape < 1 makes the density blow up at 0; sample just
                // inside instead.
                if v.is_finite() {
                    v
                } else {
                    dist.pdf(0.5)
                }
            })
        }
    };
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return None;
    }
    let probs: Vec<f64> = raw.iter().map(|r| r / sum).collect();
    Pmf::from_pmf(t0, &probs).ok()
}

/// Mean uniform in [1, M], variance uniform in [M - mean, 2M - mean].
fn draw_moments(rng: &mut ChaCha8Rng, m: f64) -> Option<(f64, f64)> {
    if m <= 1.0 {
        return None;
    }
    let mu = rng.gen_range(1.0..=m);
    let var = rng.gen_range((m - mu).max(f64::MIN_POSITIVE)..=(2.0 * m - mu));
    if var <= 0.0 {
        return None;
    }
    Some((mu, var))
}

/// Evaluates `pdf` at t = 0, 1, 2, ... and cuts the tail once the density
/// drops below `eps` times the running peak past the mode. Entries below
/// the threshold are zeroed.
fn densities<F: Fn(f64) -> f64>(eps: f64, pdf: F) -> Vec<f64> {
    let mut raw = Vec::new();
    let mut peak = 0.0f64;
    let mut prev = -1.0f64;
    for t in 0..100_000u64 {
        let v = pdf(t as f64);
        raw.push(v);
        peak = peak.max(v);
        if peak > 0.0 && v < eps * peak && v <= prev {
            break;
        }
        prev = v;
    }
    let cut = eps * peak;
    for v in &mut raw {
        if *v < cut {
            *v = 0.0;
        }
    }
    raw
}

/// The smallest t with `F_{Z_o}(t) >= p`.
pub fn derive_tau(z_origin: &Pmf, p: f64) -> u64 {
    z_origin.quantile(p)
}

/// Risk budget as the convex combination of the on-time-arrival bound at
/// the origin and the risk of the unconstrained shortest path.
pub fn derive_rho0(rho: &RiskMeasure, z_origin: &Pmf, sp_dist: &Pmf, alpha: f64) -> f64 {
    alpha * rho.evaluate(z_origin) + (1.0 - alpha) * rho.evaluate(sp_dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(width: usize, family: Family, seed: u64) -> GenSpec {
        GenSpec {
            width,
            family,
            seed,
            eps: 1e-4,
        }
    }

    #[test]
    fn grid_dimensions() {
        let g = generate(&spec(10, Family::Generic, 1)).unwrap();
        assert_eq!(g.instance.vertices(), 100);
        assert_eq!(g.instance.arcs().len(), 360);
        assert_eq!(g.instance.origin(), 0);
        assert_eq!(g.instance.destination(), 99);

        let g = generate(&spec(2, Family::Gamma, 1)).unwrap();
        assert_eq!(g.instance.vertices(), 4);
        assert_eq!(g.instance.arcs().len(), 8);
    }

    #[test]
    fn generated_instances_validate() {
        for family in [
            Family::Generic,
            Family::Lognormal,
            Family::LognormalLong,
            Family::Gamma,
        ] {
            let g = generate(&spec(5, family, 7)).unwrap();
            let report = g.instance.validate().unwrap();
            assert!(report.unreachable_to_destination.is_empty());
            for arc in g.instance.arcs() {
                assert!(!arc.travel.is_deterministic_zero());
                assert!(arc.cost >= 1.0);
            }
        }
    }

    #[test]
    fn same_seed_is_byte_identical() {
        let a = generate(&spec(6, Family::Lognormal, 42)).unwrap();
        let b = generate(&spec(6, Family::Lognormal, 42)).unwrap();
        assert_eq!(a.instance.save(), b.instance.save());
        let c = generate(&spec(6, Family::Lognormal, 43)).unwrap();
        assert_ne!(a.instance.save(), c.instance.save());
    }

    #[test]
    fn gamma_means_stay_in_band() {
        let g = generate(&spec(6, Family::Gamma, 3)).unwrap();
        for arc in g.instance.arcs() {
            let t0 = arc.travel.min_support() as f64;
            let mean = arc.travel.expectation();
            // Offset mean lies within the drawn-moment band, with slack
            // for truncation and the density discretization.
            assert!(mean >= t0 - 1.0 && mean <= t0 + 13.0, "mean {mean}, t0 {t0}");
        }
    }

    #[test]
    fn tau_and_rho0_derivation() {
        let z = Pmf::from_pmf(2, &[0.5, 0.5]).unwrap();
        assert_eq!(derive_tau(&z, 0.5), 2);
        assert_eq!(derive_tau(&z, 0.95), 3);
        assert_eq!(derive_tau(&z, 1.0), 3);

        let rho = RiskMeasure::ProbGeq { tau: 4 };
        let q = Pmf::from_pmf(2, &[0.5, 0.0, 0.5]).unwrap(); // risk 0.5
        assert_eq!(derive_rho0(&rho, &z, &q, 1.0), 0.0);
        assert_eq!(derive_rho0(&rho, &z, &q, 0.0), 0.5);
        assert_eq!(derive_rho0(&rho, &z, &q, 0.5), 0.25);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            generate(&spec(1, Family::Generic, 1)),
            Err(GenError::WidthTooSmall(1))
        ));
        let mut s = spec(3, Family::Generic, 1);
        s.eps = 0.0;
        assert!(matches!(generate(&s), Err(GenError::BadThreshold(_))));
    }
}

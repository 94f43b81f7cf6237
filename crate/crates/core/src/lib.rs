//! Shortest paths on directed graphs whose arc travel times are
//! independent finite-support distributions over the nonnegative
//! integers.
//!
//! The crate provides the on-time-arrival fixed point ([`sota`]), the
//! risk-measure shortest path ([`sspp`]), its resource-constrained
//! variant ([`srcspp`]), grid benchmark generation ([`generator`]), and
//! brute-force reference implementations ([`oracle`]).

pub mod distribution;
pub mod generator;
pub mod graph;
pub mod oracle;
pub mod risk;
pub mod sota;
pub mod srcspp;
pub mod sspp;

pub use distribution::{Distribution, DistributionError, Pmf};
pub use graph::{ArcId, ArcWeight, Instance, InstanceArc, Path, ValidationError, VertexId};
pub use risk::RiskMeasure;
pub use sota::{solve_sota, SotaResult};
pub use srcspp::{solve_srcspp, SrcsppResult, SrcsppStatus};
pub use sspp::{solve_sspp, SsppResult};

/// Tiny instances shared across test suites. Not part of the public API.
#[doc(hidden)]
pub mod fixtures {
    use crate::distribution::Pmf;
    use crate::graph::{Instance, InstanceArc};

    /// Diamond graph: o=0, a=1, b=2, d=3. The upper route o-a-d is cheap
    /// (cost 2) but random (length 2 or 4 with equal probability); the
    /// lower route o-b-d is expensive (cost 10) but deterministic
    /// (length 3).
    pub fn diamond() -> Instance {
        let d1 = Pmf::from_pmf(1, &[0.5, 0.0, 0.5]).unwrap();
        Instance::new(
            4,
            0,
            3,
            vec![
                InstanceArc { tail: 0, head: 1, cost: 1.0, travel: Pmf::point(1) },
                InstanceArc { tail: 1, head: 3, cost: 1.0, travel: d1 },
                InstanceArc { tail: 0, head: 2, cost: 5.0, travel: Pmf::point(2) },
                InstanceArc { tail: 2, head: 3, cost: 5.0, travel: Pmf::point(1) },
            ],
        )
        .unwrap()
    }
}

//! Metric projection onto convex sets in finite-dimensional l_p spaces,
//! with certified solutions and quantitative continuity estimates.
//!
//! The crate has four layers:
//!
//! - [`space`]: l_p norms, the normalized duality mapping, moduli of
//!   convexity and their inverses;
//! - [`sets`]: convex set descriptors (box, ball, V-polytope, translate),
//!   linear minimization oracles, and Hausdorff distances;
//! - [`projection`]: the projection solver with variational-inequality
//!   certificates, plus an independent grid-search oracle;
//! - [`bounds`] and [`harness`]: continuity estimates for the projection
//!   operator and seeded randomized suites that verify them.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, and [`cli`] for the `banachproj` binary.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod projection;
pub mod sets;
pub mod space;

pub use bounds::BoundOutcome;
pub use error::{Error, Result};
pub use harness::{run_suite, BoundReport, Suite, SuiteConfig};
pub use projection::{project, project_default, vi_residual, ProjectionResult};
pub use sets::{hausdorff_distance, ConvexSetDescriptor, SetPair};
pub use space::{FigielConstant, Point, SpaceSpec};

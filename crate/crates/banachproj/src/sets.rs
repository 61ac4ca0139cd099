//! Descriptors of bounded closed convex sets, linear minimization oracles,
//! translation, and Hausdorff distance in the ambient p-norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection;
use crate::space::{dual_pairing, p_norm, DualVector, Point, SpaceSpec};

/// Maximum dimension for which box corners are enumerated explicitly.
const MAX_CORNER_DIM: usize = 16;

/// Sphere samples used when a Hausdorff deviation from a ball has no
/// closed form.
const BALL_SAMPLES: usize = 2048;

/// A bounded closed convex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConvexSetDescriptor {
    Box {
        lower: Point,
        upper: Point,
    },
    Ball {
        center: Point,
        radius: f64,
    },
    VPolytope {
        vertices: Vec<Point>,
    },
    Translate {
        inner: std::boxed::Box<ConvexSetDescriptor>,
        shift: Point,
    },
}

impl ConvexSetDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSetDescriptor::Box { lower, .. } => lower.dim(),
            ConvexSetDescriptor::Ball { center, .. } => center.dim(),
            ConvexSetDescriptor::VPolytope { vertices } => {
                vertices.first().map(|v| v.dim()).unwrap_or(0)
            }
            ConvexSetDescriptor::Translate { shift, .. } => shift.dim(),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            ConvexSetDescriptor::Box { lower, upper } => {
                if lower.dim() != dim || upper.dim() != dim {
                    return Err(Error::InvalidSet("box bound dimension mismatch".into()));
                }
                for (l, u) in lower.as_slice().iter().zip(upper.as_slice()) {
                    if l > u {
                        return Err(Error::InvalidSet(format!(
                            "box lower bound {l} exceeds upper bound {u}"
                        )));
                    }
                }
                Ok(())
            }
            ConvexSetDescriptor::Ball { center, radius } => {
                if center.dim() != dim {
                    return Err(Error::InvalidSet("ball center dimension mismatch".into()));
                }
                if !(*radius > 0.0) {
                    return Err(Error::InvalidSet(format!("ball radius {radius} <= 0")));
                }
                Ok(())
            }
            ConvexSetDescriptor::VPolytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidSet("vpolytope needs at least one vertex".into()));
                }
                if vertices.iter().any(|v| v.dim() != dim) {
                    return Err(Error::InvalidSet("vpolytope vertex dimension mismatch".into()));
                }
                Ok(())
            }
            ConvexSetDescriptor::Translate { inner, shift } => {
                if shift.dim() != dim {
                    return Err(Error::InvalidSet("translate shift dimension mismatch".into()));
                }
                inner.validate(dim)
            }
        }
    }

    /// Resolve `Translate` wrappers by pushing the shift into the payload.
    pub fn canonical(&self) -> ConvexSetDescriptor {
        match self {
            ConvexSetDescriptor::Translate { inner, shift } => {
                shift_payload(&inner.canonical(), shift)
            }
            other => other.clone(),
        }
    }

    /// The set shifted by t; payload-level so translate(S, 0) = S for base
    /// variants.
    pub fn translate(&self, t: &Point) -> Result<ConvexSetDescriptor> {
        if t.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: t.dim(),
            });
        }
        Ok(shift_payload(&self.canonical(), t))
    }
}

fn shift_payload(set: &ConvexSetDescriptor, t: &Point) -> ConvexSetDescriptor {
    match set {
        ConvexSetDescriptor::Box { lower, upper } => ConvexSetDescriptor::Box {
            lower: lower.add(t),
            upper: upper.add(t),
        },
        ConvexSetDescriptor::Ball { center, radius } => ConvexSetDescriptor::Ball {
            center: center.add(t),
            radius: *radius,
        },
        ConvexSetDescriptor::VPolytope { vertices } => ConvexSetDescriptor::VPolytope {
            vertices: vertices.iter().map(|v| v.add(t)).collect(),
        },
        ConvexSetDescriptor::Translate { inner, shift } => ConvexSetDescriptor::Translate {
            inner: inner.clone(),
            shift: shift.add(t),
        },
    }
}

/// Distance (in the p-norm) from a point to a box, closed form.
pub(crate) fn box_distance(space: &SpaceSpec, lower: &Point, upper: &Point, x: &Point) -> f64 {
    let v: Vec<f64> = x
        .as_slice()
        .iter()
        .zip(lower.as_slice())
        .zip(upper.as_slice())
        .map(|((xi, l), u)| (l - xi).max(xi - u).max(0.0))
        .collect();
    p_norm(space.p(), &v)
}

pub(crate) fn ball_distance(space: &SpaceSpec, center: &Point, radius: f64, x: &Point) -> f64 {
    (p_norm(space.p(), x.sub(center).as_slice()) - radius).max(0.0)
}

/// Distance from x to a canonical set; boxes and balls in closed form,
/// polytopes via the certified projection solver.
pub(crate) fn distance_to_set(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    tol: f64,
) -> Result<f64> {
    match set.canonical() {
        ConvexSetDescriptor::Box { lower, upper } => Ok(box_distance(space, &lower, &upper, x)),
        ConvexSetDescriptor::Ball { center, radius } => {
            Ok(ball_distance(space, &center, radius, x))
        }
        ConvexSetDescriptor::VPolytope { vertices } => {
            let (point, iters, _converged) =
                projection::fw_project(space, &vertices, x, tol, 50_000)?;
            let _ = iters;
            Ok(p_norm(space.p(), x.sub(&point).as_slice()))
        }
        ConvexSetDescriptor::Translate { .. } => unreachable!("canonical removes translates"),
    }
}

/// Certified lower bound on the distance from x to the set.
///
/// For boxes and balls the distance is exact. For polytopes the solver
/// returns a feasible point xi, so ||x - xi|| only bounds the distance from
/// above; convexity gives ||x - xi||^p - p * gap <= d^p with gap the final
/// linear-maximization gap, which is the bound returned here.
pub(crate) fn certified_lower_distance(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    tol: f64,
) -> Result<f64> {
    match set.canonical() {
        ConvexSetDescriptor::VPolytope { vertices } => {
            let (point, _iters, _converged) =
                projection::fw_project(space, &vertices, x, tol, 50_000)?;
            let p = space.p();
            let d_hat = p_norm(p, x.sub(&point).as_slice());
            if d_hat == 0.0 {
                return Ok(0.0);
            }
            let j = space.duality_map(&x.sub(&point))?;
            // <phi, .> = ||x - xi||^(p-2) <J(x - xi), .>
            let mut gap = 0.0_f64;
            for v in &vertices {
                gap = gap.max(dual_pairing(&j, &v.sub(&point))?);
            }
            gap *= d_hat.powf(p - 2.0);
            Ok((d_hat.powf(p) - p * gap).max(0.0).powf(1.0 / p))
        }
        other => distance_to_set(space, &other, x, tol),
    }
}

/// True iff x cannot be certified to lie farther than tol from the set.
pub fn membership(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    tol: f64,
) -> Result<bool> {
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: x.dim(),
        });
    }
    set.validate(space.dim())?;
    let d = certified_lower_distance(space, set, x, (tol * 1e-3).max(1e-12))?;
    Ok(d <= tol)
}

/// A point of the set minimizing the linear functional <c, .>.
pub fn linear_min_oracle(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    c: &DualVector,
) -> Result<Point> {
    if c.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: c.dim(),
        });
    }
    set.validate(space.dim())?;
    if c.as_slice().iter().all(|v| *v == 0.0) {
        return Err(Error::ZeroDirection);
    }
    match set.canonical() {
        ConvexSetDescriptor::Box { lower, upper } => {
            let coords = c
                .as_slice()
                .iter()
                .zip(lower.as_slice())
                .zip(upper.as_slice())
                .map(|((ci, l), u)| if *ci > 0.0 { *l } else { *u })
                .collect();
            Ok(Point::new(coords))
        }
        ConvexSetDescriptor::Ball { center, radius } => {
            // unit-norm minimizer of <c, .> on the p-ball: the Hoelder
            // equality direction w with w_i = |c_i|^(q-1) sgn(c_i) / ||c||_q^(q-1)
            let q = space.q();
            let cn = p_norm(q, c.as_slice());
            let w: Vec<f64> = c
                .as_slice()
                .iter()
                .map(|ci| ci.abs().powf(q - 1.0) * ci.signum() / cn.powf(q - 1.0))
                .collect();
            Ok(center.sub(&Point::new(w).scale(radius)))
        }
        ConvexSetDescriptor::VPolytope { vertices } => {
            let mut best = vertices[0].clone();
            let mut best_val = dual_pairing(c, &best)?;
            for v in &vertices[1..] {
                let val = dual_pairing(c, v)?;
                if val < best_val {
                    best_val = val;
                    best = v.clone();
                }
            }
            Ok(best)
        }
        ConvexSetDescriptor::Translate { .. } => unreachable!("canonical removes translates"),
    }
}

fn box_corners(lower: &Point, upper: &Point) -> Result<Vec<Point>> {
    let dim = lower.dim();
    if dim > MAX_CORNER_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    let mut corners = Vec::with_capacity(1 << dim);
    for mask in 0..(1_usize << dim) {
        let coords = (0..dim)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    upper.as_slice()[i]
                } else {
                    lower.as_slice()[i]
                }
            })
            .collect();
        corners.push(Point::new(coords));
    }
    Ok(corners)
}

/// One-sided deviation sup_{z in from} dist(z, to).
fn one_sided_deviation(
    space: &SpaceSpec,
    from: &ConvexSetDescriptor,
    to: &ConvexSetDescriptor,
    tol: f64,
) -> Result<f64> {
    use ConvexSetDescriptor::*;
    match (from, to) {
        // per-coordinate maximization: the deviation term of a box is
        // separable, so each coordinate extremizes independently
        (Box { lower: l1, upper: u1 }, Box { lower: l2, upper: u2 }) => {
            let v: Vec<f64> = (0..l1.dim())
                .map(|i| {
                    let w = |z: f64| (l2.as_slice()[i] - z).max(z - u2.as_slice()[i]).max(0.0);
                    w(l1.as_slice()[i]).max(w(u1.as_slice()[i]))
                })
                .collect();
            Ok(p_norm(space.p(), &v))
        }
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => {
            Ok((p_norm(space.p(), c1.sub(c2).as_slice()) + r1 - r2).max(0.0))
        }
        // the distance function to a convex set is convex, so its maximum
        // over a polytope is attained at a vertex
        (VPolytope { vertices }, _) => {
            let mut worst = 0.0_f64;
            for v in vertices {
                worst = worst.max(distance_to_set(space, to, v, tol)?);
            }
            Ok(worst)
        }
        (Box { lower, upper }, _) => {
            let mut worst = 0.0_f64;
            for corner in box_corners(lower, upper)? {
                worst = worst.max(distance_to_set(space, to, &corner, tol)?);
            }
            Ok(worst)
        }
        // sampling fallback for a ball against a non-ball; accuracy limited
        // by the sampling density, padded by tol
        (Ball { center, radius }, _) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4861_7573);
            let mut worst = 0.0_f64;
            for _ in 0..BALL_SAMPLES {
                let u = crate::space::random_unit(&mut rng, space);
                let z = center.add(&u.scale(*radius));
                worst = worst.max(distance_to_set(space, to, &z, tol)?);
            }
            Ok(worst + tol)
        }
        (Translate { .. }, _) => unreachable!("canonical removes translates"),
    }
}

/// Hausdorff distance between two bounded sets in the ambient p-norm.
///
/// Exact for box/box, ball/ball and anything with finitely many extreme
/// points; sampling-limited when a ball faces a different variant.
pub fn hausdorff_distance(
    space: &SpaceSpec,
    s1: &ConvexSetDescriptor,
    s2: &ConvexSetDescriptor,
    tol: f64,
) -> Result<f64> {
    s1.validate(space.dim())?;
    s2.validate(space.dim())?;
    let a = s1.canonical();
    let b = s2.canonical();
    if a == b {
        return Ok(0.0);
    }
    let d1 = one_sided_deviation(space, &a, &b, tol)?;
    let d2 = one_sided_deviation(space, &b, &a, tol)?;
    Ok(d1.max(d2))
}

/// Distance from the origin to the set.
pub fn dist_to_origin(space: &SpaceSpec, set: &ConvexSetDescriptor, tol: f64) -> Result<f64> {
    set.validate(space.dim())?;
    distance_to_set(space, set, &Point::zeros(space.dim()), tol)
}

/// Two sets together with a verified upper bound on their Hausdorff
/// distance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetPair {
    pub omega1: ConvexSetDescriptor,
    pub omega2: ConvexSetDescriptor,
    pub sigma: f64,
}

impl SetPair {
    /// Pair a set with its translate; sigma = ||t|| exactly.
    pub fn translate_pair(
        space: &SpaceSpec,
        set: &ConvexSetDescriptor,
        t: &Point,
    ) -> Result<SetPair> {
        let omega2 = set.translate(t)?;
        Ok(SetPair {
            omega1: set.canonical(),
            omega2,
            sigma: space.norm(t)?,
        })
    }

    /// Pair two independent sets; sigma computed as a Hausdorff upper bound
    /// with `slack` added to absorb the solver tolerance.
    pub fn from_sets(
        space: &SpaceSpec,
        omega1: ConvexSetDescriptor,
        omega2: ConvexSetDescriptor,
        tol: f64,
        slack: f64,
    ) -> Result<SetPair> {
        let sigma = hausdorff_distance(space, &omega1, &omega2, tol)? + slack;
        Ok(SetPair {
            omega1,
            omega2,
            sigma,
        })
    }
}

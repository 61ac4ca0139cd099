//! Calculators for the quantitative projection-operator estimates: the two
//! duality-mapping lemmas, the argument-perturbation and set-perturbation
//! theorems with their refinements, the Hilbert-space bounds, and the
//! composite bound in both argument and set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::ProjectionResult;
use crate::sets::{self, SetPair};
use crate::space::{
    dual_pairing, g_inverse, modulus_convexity, modulus_inverse, FigielConstant, Inverse,
    Point, SpaceSpec,
};

/// Tolerance passed to the bisection inversions inside the calculators.
pub const INVERSE_TOL: f64 = 1e-10;

/// Comparison tolerance absorbing solver and Hausdorff tolerances; a margin
/// below -EPS_CMP from certified inputs is a hard failure.
pub const EPS_CMP: f64 = 1e-7;

/// One evaluated inequality: lhs <= rhs, with the constants that entered
/// the right-hand side. rhs = None marks a vacuous (non-informative) bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundOutcome {
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub constants: BTreeMap<String, f64>,
    pub margin: Option<f64>,
    pub informative: bool,
}

impl BoundOutcome {
    fn new(lhs: f64, rhs: Option<f64>, constants: BTreeMap<String, f64>) -> Self {
        let margin = rhs.map(|r| r - lhs);
        BoundOutcome {
            lhs,
            rhs,
            informative: margin.is_some(),
            margin,
            constants,
        }
    }
}

fn pair_constant(space: &SpaceSpec, x: &Point, y: &Point) -> Result<f64> {
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    Ok(2.0 * 1.0_f64.max(((nx * nx + ny * ny) / 2.0).sqrt()))
}

fn modulus_arg(space: &SpaceSpec, dist: f64, c: f64) -> Result<f64> {
    let arg = dist / c;
    if arg > 2.0 {
        if arg <= 2.0 + 1e-9 {
            return Ok(2.0);
        }
        // cannot happen for correctly formed inputs: ||x - y|| <= 2 max{1, R1}
        return Err(Error::OutOfRange {
            arg,
            lo: 0.0,
            hi: 2.0,
        });
    }
    let _ = space;
    Ok(arg)
}

/// Uniform monotonicity of J: <Jx - Jy, x - y> >= (2L)^{-1} delta_p(||x - y|| / C1).
pub fn lemma1_outcome(
    space: &SpaceSpec,
    x: &Point,
    y: &Point,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    let jx = space.duality_map(x)?;
    let jy = space.duality_map(y)?;
    let lhs = dual_pairing(&jx.sub(&jy), &x.sub(y))?;
    let c1 = pair_constant(space, x, y)?;
    let dist = space.norm(&x.sub(y))?;
    let arg = modulus_arg(space, dist, c1)?;
    let rhs = modulus_convexity(space.p(), arg)? / (2.0 * l.value());
    let mut constants = BTreeMap::new();
    constants.insert("C1".into(), c1);
    constants.insert("L".into(), l.value());
    constants.insert("dist".into(), dist);
    // lhs on the left of the inequality here, so margin = lhs - rhs
    let mut out = BoundOutcome::new(rhs, Some(lhs), constants);
    out.lhs = lhs;
    out.rhs = Some(rhs);
    out.margin = Some(lhs - rhs);
    Ok(out)
}

/// Uniform continuity of J: ||Jx - Jy||_q <= C g_q^{-1}(2 C L ||x - y||).
///
/// The statement's C1 and the proof's C2 coincide numerically because
/// ||Jx|| = ||x||; one value is computed and recorded under both names.
pub fn lemma2_outcome(
    space: &SpaceSpec,
    x: &Point,
    y: &Point,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    let jx = space.duality_map(x)?;
    let jy = space.duality_map(y)?;
    let lhs = space.dual_norm(&jx.sub(&jy))?;
    let c = pair_constant(space, x, y)?;
    let dist = space.norm(&x.sub(y))?;
    let q = space.q();
    let inner = 2.0 * c * l.value() * dist;
    let rhs = match g_inverse(q, inner, INVERSE_TOL)? {
        Inverse::Value(v) => Some(c * v),
        Inverse::Vacuous => None,
    };
    let mut constants = BTreeMap::new();
    constants.insert("C1".into(), c);
    constants.insert("C2".into(), c);
    constants.insert("L".into(), l.value());
    constants.insert("dist".into(), dist);
    constants.insert("g_arg".into(), inner);
    Ok(BoundOutcome::new(lhs, rhs, constants))
}

fn require_converged(r: &ProjectionResult) -> Result<()> {
    if !r.converged {
        return Err(Error::NoConvergence(r.iterations));
    }
    Ok(())
}

/// Right-hand side C g_p^{-1}(2 L C^2 g_q^{-1}(2 C L t)) shared by the
/// argument-perturbation theorem and the composite bound.
fn argument_rhs(space: &SpaceSpec, c: f64, dist: f64, l: &FigielConstant) -> Result<Option<f64>> {
    let q = space.q();
    let inner_arg = 2.0 * c * l.value() * dist;
    let inner = match g_inverse(q, inner_arg, INVERSE_TOL)? {
        Inverse::Value(v) => v,
        Inverse::Vacuous => return Ok(None),
    };
    let outer_arg = 2.0 * l.value() * c * c * inner;
    match g_inverse(space.p(), outer_arg, INVERSE_TOL)? {
        Inverse::Value(v) => Ok(Some(c * v)),
        Inverse::Vacuous => Ok(None),
    }
}

/// Uniform continuity of the projection in the argument:
/// ||P x - P y|| <= C g_p^{-1}(2 L C^2 g_q^{-1}(2 C L ||x - y||)).
pub fn theorem1_outcome(
    space: &SpaceSpec,
    set: &sets::ConvexSetDescriptor,
    x: &Point,
    y: &Point,
    xbar: &ProjectionResult,
    ybar: &ProjectionResult,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    require_converged(xbar)?;
    require_converged(ybar)?;
    let lhs = space.norm(&xbar.point.sub(&ybar.point))?;
    let dist = space.norm(&x.sub(y))?;
    let d_x_py = space.norm(&x.sub(&ybar.point))?;
    let d_y_px = space.norm(&y.sub(&xbar.point))?;

    // one argument on the set collapses the constant to 2 max{1, 2||x-y||}
    let y_in = sets::membership(space, set, y, 1e-9)?;
    let x_in = sets::membership(space, set, x, 1e-9)?;
    let c = if y_in {
        2.0 * 1.0_f64.max(2.0 * d_x_py)
    } else if x_in {
        2.0 * 1.0_f64.max(2.0 * d_y_px)
    } else {
        2.0 * 1.0_f64.max(d_x_py).max(d_y_px)
    };
    let rhs = argument_rhs(space, c, dist, l)?;

    // proof-level constants, recorded for diagnostics
    let d_x_px = space.norm(&x.sub(&xbar.point))?;
    let d_y_py = space.norm(&y.sub(&ybar.point))?;
    let c1 = 2.0 * 1.0_f64.max(((d_x_px.powi(2) + d_x_py.powi(2)) / 2.0).sqrt());
    let c2 = 2.0 * 1.0_f64.max(((d_x_py.powi(2) + d_y_py.powi(2)) / 2.0).sqrt());
    let proof_rhs = proof_level_rhs(space, c1, c2, dist, l)?;

    let mut constants = BTreeMap::new();
    constants.insert("C".into(), c);
    constants.insert("C1_proof".into(), c1);
    constants.insert("C2_proof".into(), c2);
    constants.insert("L".into(), l.value());
    constants.insert("dist".into(), dist);
    if let Some(pr) = proof_rhs {
        constants.insert("rhs_proof".into(), pr);
    }
    if y_in || x_in {
        constants.insert("C_remark3".into(), c);
    }
    Ok(BoundOutcome::new(lhs, rhs, constants))
}

fn proof_level_rhs(
    space: &SpaceSpec,
    c1: f64,
    c2: f64,
    dist: f64,
    l: &FigielConstant,
) -> Result<Option<f64>> {
    let q = space.q();
    let inner = match g_inverse(q, 2.0 * c2 * l.value() * dist, INVERSE_TOL)? {
        Inverse::Value(v) => v,
        Inverse::Vacuous => return Ok(None),
    };
    match g_inverse(space.p(), 2.0 * l.value() * c1 * c2 * inner, INVERSE_TOL)? {
        Inverse::Value(v) => Ok(Some(c1 * v)),
        Inverse::Vacuous => Ok(None),
    }
}

/// Right-hand side C1 delta_p^{-1}(4 L (d + r) sigma) of the
/// set-perturbation theorem, plus the refined variant.
fn set_rhs(
    space: &SpaceSpec,
    pair: &SetPair,
    r: f64,
    proj1: &ProjectionResult,
    proj2: &ProjectionResult,
    x: &Point,
    l: &FigielConstant,
) -> Result<(Option<f64>, BTreeMap<String, f64>)> {
    let d1 = sets::dist_to_origin(space, &pair.omega1, 1e-10)?;
    let d2 = sets::dist_to_origin(space, &pair.omega2, 1e-10)?;
    let d = d1.max(d2);
    let c1 = 2.0 * 1.0_f64.max(r + d);
    let arg = 4.0 * l.value() * (d + r) * pair.sigma;
    let rhs = match modulus_inverse(space.p(), arg, INVERSE_TOL)? {
        Inverse::Value(v) => Some(c1 * v),
        Inverse::Vacuous => None,
    };

    // refined variant with projection-distance constants
    let dx1 = space.norm(&x.sub(&proj1.point))?;
    let dx2 = space.norm(&x.sub(&proj2.point))?;
    let c1_ref = 2.0 * 1.0_f64.max(dx1).max(dx2);
    let c2_ref = 2.0 * dx1.max(dx2);
    let rhs_ref = match modulus_inverse(space.p(), 4.0 * l.value() * c2_ref * pair.sigma, INVERSE_TOL)? {
        Inverse::Value(v) => Some(c1_ref * v),
        Inverse::Vacuous => None,
    };

    let mut constants = BTreeMap::new();
    constants.insert("C1".into(), c1);
    constants.insert("L".into(), l.value());
    constants.insert("r".into(), r);
    constants.insert("d".into(), d);
    constants.insert("d1".into(), d1);
    constants.insert("d2".into(), d2);
    constants.insert("sigma".into(), pair.sigma);
    constants.insert("C1_refined".into(), c1_ref);
    constants.insert("C2_refined".into(), c2_ref);
    if let Some(v) = rhs_ref {
        constants.insert("rhs_refined".into(), v);
    }
    Ok((rhs, constants))
}

/// Uniform continuity of the projection in the set:
/// ||P_1 x - P_2 x|| <= C1 delta_p^{-1}(4 L (d + r) sigma).
pub fn theorem2_outcome(
    space: &SpaceSpec,
    pair: &SetPair,
    x: &Point,
    proj1: &ProjectionResult,
    proj2: &ProjectionResult,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    require_converged(proj1)?;
    require_converged(proj2)?;
    let lhs = space.norm(&proj1.point.sub(&proj2.point))?;
    let r = space.norm(x)?;
    let (rhs, constants) = set_rhs(space, pair, r, proj1, proj2, x, l)?;
    Ok(BoundOutcome::new(lhs, rhs, constants))
}

/// Same instances as the set-perturbation theorem, judged against the
/// refined right-hand side.
pub fn remark5_outcome(
    space: &SpaceSpec,
    pair: &SetPair,
    x: &Point,
    proj1: &ProjectionResult,
    proj2: &ProjectionResult,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    require_converged(proj1)?;
    require_converged(proj2)?;
    let lhs = space.norm(&proj1.point.sub(&proj2.point))?;
    let r = space.norm(x)?;
    let (rhs_f6, mut constants) = set_rhs(space, pair, r, proj1, proj2, x, l)?;
    let rhs = constants.get("rhs_refined").copied();
    if let Some(v) = rhs_f6 {
        constants.insert("rhs_f6".into(), v);
    }
    Ok(BoundOutcome::new(lhs, rhs, constants))
}

/// Hilbert-space set-perturbation bounds: (sqrt(2 sigma (r + d)),
/// sqrt(4 sigma (2r + d) + sigma^2)); the first never exceeds the second.
pub fn hilbert_set_bounds(sigma: f64, r: f64, d: f64) -> Result<(f64, f64)> {
    for &v in &[sigma, r, d] {
        if v < 0.0 {
            return Err(Error::OutOfRange {
                arg: v,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
    }
    let ours = (2.0 * sigma * (r + d)).sqrt();
    let comparison = (4.0 * sigma * (2.0 * r + d) + sigma * sigma).sqrt();
    Ok((ours, comparison))
}

/// Composite bound ||P_1 x - P_2 y|| <= argument term within Omega_1 plus
/// set term at y, with r = ||y||.
pub fn third_problem_outcome(
    space: &SpaceSpec,
    pair: &SetPair,
    x: &Point,
    y: &Point,
    proj_x1: &ProjectionResult,
    proj_y1: &ProjectionResult,
    proj_y2: &ProjectionResult,
    l: &FigielConstant,
) -> Result<BoundOutcome> {
    require_converged(proj_x1)?;
    require_converged(proj_y1)?;
    require_converged(proj_y2)?;
    let lhs = space.norm(&proj_x1.point.sub(&proj_y2.point))?;

    // argument term: same code path as the argument-perturbation theorem
    let t1 = theorem1_outcome(space, &pair.omega1, x, y, proj_x1, proj_y1, l)?;

    // set term at the point y
    let r = space.norm(y)?;
    let (t2_rhs, set_constants) = set_rhs(space, pair, r, proj_y1, proj_y2, y, l)?;

    let rhs = match (t1.rhs, t2_rhs) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let mut constants = t1.constants.clone();
    for (k, v) in set_constants {
        constants.insert(format!("set_{k}"), v);
    }
    if let Some(a) = t1.rhs {
        constants.insert("rhs_argument_term".into(), a);
    }
    if let Some(b) = t2_rhs {
        constants.insert("rhs_set_term".into(), b);
    }
    Ok(BoundOutcome::new(lhs, rhs, constants))
}

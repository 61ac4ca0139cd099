//! Certified metric projection in the p-norm.
//!
//! Boxes and p-balls project in closed form (the objective is separable /
//! radial); V-polytopes run a conditional-gradient iteration with away
//! steps over the vertex set. Every result carries the variational
//! inequality certificate <J(x - xbar), xi - xbar> <= 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{self, ConvexSetDescriptor};
use crate::space::{dual_pairing, p_norm, Point, SpaceSpec};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 50_000;

/// Outcome of a metric projection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionResult {
    /// The projected point xbar.
    pub point: Point,
    /// ||x - xbar|| in the p-norm.
    pub distance: f64,
    /// Worst violation of the variational inequality over the set;
    /// <= tol certifies optimality.
    pub vi_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn grad_components(p: f64, t: &Point) -> Vec<f64> {
    // phi(t)_i = |t_i|^(p-1) sgn(t_i); the gradient of (1/p) sum |x - xi|^p
    // at xi is -phi(x - xi)
    t.as_slice()
        .iter()
        .map(|&ti| {
            let v = ti.abs().powf(p - 1.0) * ti.signum();
            if v == 0.0 {
                0.0
            } else {
                v
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conditional-gradient projection onto the convex hull of `vertices`.
///
/// Stops when the normalized duality gap ||x - xi||^(2-p) <phi(x - xi),
/// s - xi> drops below tol, which bounds the variational-inequality
/// residual at the iterate directly.
pub(crate) fn fw_project(
    space: &SpaceSpec,
    vertices: &[Point],
    x: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<(Point, usize, bool)> {
    let p = space.p();
    let dim = space.dim();
    let k = vertices.len();
    if k == 1 {
        return Ok((vertices[0].clone(), 0, true));
    }

    // start at the nearest vertex
    let mut weights = vec![0.0_f64; k];
    let start = (0..k)
        .min_by(|&a, &b| {
            let da = p_norm(p, x.sub(&vertices[a]).as_slice());
            let db = p_norm(p, x.sub(&vertices[b]).as_slice());
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    weights[start] = 1.0;

    let current = |w: &[f64]| -> Point {
        let mut out = vec![0.0; dim];
        for (wi, v) in w.iter().zip(vertices) {
            if *wi != 0.0 {
                for (o, c) in out.iter_mut().zip(v.as_slice()) {
                    *o += wi * c;
                }
            }
        }
        Point::new(out)
    };

    let mut xi = current(&weights);
    let mut iterations = 0;
    let mut converged = false;

    for iter in 0..max_iter {
        iterations = iter + 1;
        let t = x.sub(&xi);
        let tn = p_norm(p, t.as_slice());
        if tn == 0.0 {
            converged = true;
            break;
        }
        let phi = grad_components(p, &t); // ascent direction of <., xi>
        // FW atom: maximizes <phi, v>
        let mut s_idx = 0;
        let mut s_val = f64::NEG_INFINITY;
        for (j, v) in vertices.iter().enumerate() {
            let val = dot(&phi, v.as_slice());
            if val > s_val {
                s_val = val;
                s_idx = j;
            }
        }
        let gap = s_val - dot(&phi, xi.as_slice());
        let cert = tn.powf(2.0 - p) * gap.max(0.0);
        if cert <= tol {
            converged = true;
            // convexity gives dist(x, hull)^p >= ||x - xi||^p - p * gap; when
            // that lower bound is zero, x itself is in the hull up to solver
            // accuracy and is its own projection (keeps P exactly idempotent)
            if tn.powf(p) <= p * gap.max(0.0) {
                xi = x.clone();
            }
            break;
        }
        // away atom: minimizes <phi, v> over the active set
        let mut a_idx = usize::MAX;
        let mut a_val = f64::INFINITY;
        for (j, wj) in weights.iter().enumerate() {
            if *wj > 0.0 {
                let val = dot(&phi, vertices[j].as_slice());
                if val < a_val {
                    a_val = val;
                    a_idx = j;
                }
            }
        }
        let away_gap = dot(&phi, xi.as_slice()) - a_val;

        let (dir, gamma_max, is_fw) = if gap >= away_gap || a_idx == usize::MAX || weights[a_idx] >= 1.0 - 1e-15 {
            (vertices[s_idx].sub(&xi), 1.0, true)
        } else {
            let la = weights[a_idx];
            (xi.sub(&vertices[a_idx]), la / (1.0 - la), false)
        };
        if dir.as_slice().iter().all(|c| c.abs() < 1e-300) {
            converged = cert <= tol;
            break;
        }

        // line search: h(g) = f(x - xi - g d) is strictly convex in g
        let deriv = |g: f64| -> f64 {
            let shifted: Vec<f64> = x
                .as_slice()
                .iter()
                .zip(xi.as_slice())
                .zip(dir.as_slice())
                .map(|((xc, xic), dc)| xc - xic - g * dc)
                .collect();
            -dot(&grad_components(p, &Point::new(shifted)), dir.as_slice())
        };
        let gamma = if deriv(gamma_max) <= 0.0 {
            gamma_max
        } else {
            let (mut lo, mut hi) = (0.0_f64, gamma_max);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if deriv(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };

        if is_fw {
            for w in weights.iter_mut() {
                *w *= 1.0 - gamma;
            }
            weights[s_idx] += gamma;
        } else {
            for w in weights.iter_mut() {
                *w *= 1.0 + gamma;
            }
            weights[a_idx] = (weights[a_idx] - gamma).max(0.0);
        }
        // keep the simplex exact against drift
        let sum: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= sum;
        }
        xi = current(&weights);
    }

    Ok((xi, iterations, converged))
}

fn residual_at(
    space: &SpaceSpec,
    x: &Point,
    xbar: &Point,
    set: &ConvexSetDescriptor,
) -> Result<f64> {
    let t = x.sub(xbar);
    if p_norm(space.p(), t.as_slice()) == 0.0 {
        return Ok(0.0);
    }
    let j = space.duality_map(&t)?;
    if j.as_slice().iter().all(|c| *c == 0.0) {
        return Ok(0.0);
    }
    // max_xi <J(x - xbar), xi - xbar> attained by the oracle on -J
    let maximizer = sets::linear_min_oracle(space, set, &j.neg())?;
    dual_pairing(&j, &maximizer.sub(xbar))
}

/// Metric projection of x onto the set, with certificate.
pub fn project(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<ProjectionResult> {
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: x.dim(),
        });
    }
    if tol <= 0.0 {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    set.validate(space.dim())?;
    let canon = set.canonical();
    let p = space.p();

    let (point, iterations, converged) = match &canon {
        ConvexSetDescriptor::Box { lower, upper } => {
            // separable objective: clamp coordinatewise
            let coords = x
                .as_slice()
                .iter()
                .zip(lower.as_slice())
                .zip(upper.as_slice())
                .map(|((xi, l), u)| xi.max(*l).min(*u))
                .collect();
            (Point::new(coords), 0, true)
        }
        ConvexSetDescriptor::Ball { center, radius } => {
            let d = x.sub(center);
            let n = p_norm(p, d.as_slice());
            if n <= *radius {
                (x.clone(), 0, true)
            } else {
                (center.add(&d.scale(radius / n)), 0, true)
            }
        }
        ConvexSetDescriptor::VPolytope { vertices } => fw_project(space, vertices, x, tol, max_iter)?,
        ConvexSetDescriptor::Translate { .. } => unreachable!("canonical removes translates"),
    };

    let distance = p_norm(p, x.sub(&point).as_slice());
    let vi_residual = residual_at(space, x, &point, &canon)?;
    Ok(ProjectionResult {
        point,
        distance,
        vi_residual,
        iterations,
        converged,
    })
}

/// Projection with the default tolerance (1e-10) and iteration budget.
pub fn project_default(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
) -> Result<ProjectionResult> {
    project(space, set, x, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Worst violation of <J(x - xbar), xi - xbar> <= 0 over the set.
///
/// A value <= tolerance certifies xbar = P_Omega(x); a clearly positive
/// value witnesses that xbar is not the projection.
pub fn vi_residual(
    space: &SpaceSpec,
    x: &Point,
    xbar: &Point,
    set: &ConvexSetDescriptor,
) -> Result<f64> {
    let canon = set.canonical();
    let d = sets::certified_lower_distance(space, &canon, xbar, 1e-10)?;
    if d > 1e-6 {
        return Err(Error::NotInSet(d));
    }
    residual_at(space, x, xbar, &canon)
}

/// Output of the grid-search oracle.
#[derive(Clone, Debug)]
pub struct BruteForceProjection {
    pub point: Point,
    /// Bound on how far `point` can sit from the true projection, combining
    /// the final sample spacing with the uniform-convexity argument bound.
    pub resolution: f64,
}

const BRUTE_STAGES: usize = 4;

fn argument_resolution(p: f64, dist: f64, spacing: f64) -> f64 {
    // objective gap of the incumbent is at most lip * spacing with
    // lip = ||grad f||_q = ||x - xi||^(p-1); translate the gap into an
    // argument bound through the uniform convexity of t -> sum |t_i|^p / p
    let lip = (dist + spacing).powf(p - 1.0);
    let gap = 4.0 * lip * spacing;
    if p >= 2.0 {
        spacing + (p * 2.0_f64.powf(p - 1.0) * gap).powf(1.0 / p)
    } else {
        let m = (dist + spacing).max(1e-9);
        spacing + (2.0 * gap * m.powf(2.0 - p) / (p - 1.0)).sqrt()
    }
}

fn brute_force_box(
    space: &SpaceSpec,
    lower: &Point,
    upper: &Point,
    x: &Point,
    grid: usize,
) -> Result<BruteForceProjection> {
    let p = space.p();
    let dim = space.dim();
    let mut lo = lower.as_slice().to_vec();
    let mut hi = upper.as_slice().to_vec();
    let mut best = lo.clone();
    let mut best_val = f64::INFINITY;
    let mut spacing = 0.0;
    for _stage in 0..BRUTE_STAGES {
        let steps: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| (h - l) / grid as f64)
            .collect();
        let mut idx = vec![0_usize; dim];
        loop {
            let cand: Vec<f64> = idx
                .iter()
                .zip(&lo)
                .zip(&steps)
                .map(|((i, l), s)| l + *i as f64 * s)
                .collect();
            let val = p_norm(p, x.sub(&Point::new(cand.clone())).as_slice());
            if val < best_val {
                best_val = val;
                best = cand;
            }
            // odometer over the grid
            let mut carry = true;
            for d in 0..dim {
                if carry {
                    idx[d] += 1;
                    if idx[d] > grid {
                        idx[d] = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        spacing = p_norm(p, &steps);
        // zoom to a window of a few cells around the incumbent
        for d in 0..dim {
            let w = 2.0 * steps[d];
            lo[d] = (best[d] - w).max(lower.as_slice()[d]);
            hi[d] = (best[d] + w).min(upper.as_slice()[d]);
        }
    }
    Ok(BruteForceProjection {
        point: Point::new(best),
        resolution: argument_resolution(p, best_val, spacing),
    })
}

fn tuples(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, m, &mut Vec::new(), &mut out);
    out
}

fn combine(vertices: &[Point], tuple: &[usize], weights: &[f64], dim: usize) -> Point {
    let mut out = vec![0.0; dim];
    for (w, &vi) in weights.iter().zip(tuple) {
        for (o, c) in out.iter_mut().zip(vertices[vi].as_slice()) {
            *o += w * c;
        }
    }
    Point::new(out)
}

fn brute_force_polytope(
    space: &SpaceSpec,
    vertices: &[Point],
    x: &Point,
    grid: usize,
) -> Result<BruteForceProjection> {
    let p = space.p();
    let dim = space.dim();
    let m = (dim + 1).min(vertices.len()); // Caratheodory size
    let diam = {
        let mut d = 0.0_f64;
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                d = d.max(p_norm(p, a.sub(b).as_slice()));
            }
        }
        d.max(1e-12)
    };

    // stage 1: full barycentric grid on every m-tuple
    let g = grid;
    let all = tuples(vertices.len(), m);
    let mut best_val = f64::INFINITY;
    let mut best_tuple = all[0].clone();
    let mut best_w = vec![1.0 / m as f64; m];
    let mut per_tuple: Vec<(f64, Vec<f64>)> = Vec::with_capacity(all.len());
    for tuple in &all {
        let mut t_best = f64::INFINITY;
        let mut t_w = vec![0.0; m];
        enumerate_simplex_grid(m, g, &mut |w: &[f64]| {
            let cand = combine(vertices, tuple, w, dim);
            let val = p_norm(p, x.sub(&cand).as_slice());
            if val < t_best {
                t_best = val;
                t_w = w.to_vec();
            }
        });
        if t_best < best_val {
            best_val = t_best;
            best_tuple = tuple.clone();
            best_w = t_w.clone();
        }
        per_tuple.push((t_best, t_w));
    }

    // refine every tuple whose coarse value is competitive; the tuple
    // containing the true projection is always among them
    let lip = (best_val + diam / g as f64).powf(p - 1.0);
    let cutoff = best_val + 2.0 * lip * diam / g as f64;
    let mut spacing = diam / g as f64;
    for (tuple, (t_best, t_w)) in all.iter().zip(per_tuple.iter()) {
        if *t_best > cutoff + 1e-12 {
            continue;
        }
        let mut center = t_w.clone();
        let mut width = 1.0 / g as f64;
        let mut local_best = *t_best;
        let mut local_w = t_w.clone();
        for _ in 1..BRUTE_STAGES {
            let lo: Vec<f64> = center.iter().map(|c| (c - 3.0 * width).max(0.0)).collect();
            let hi: Vec<f64> = center.iter().map(|c| (c + 3.0 * width).min(1.0)).collect();
            enumerate_window_grid(&lo, &hi, g, &mut |w: &[f64]| {
                let cand = combine(vertices, tuple, w, dim);
                let val = p_norm(p, x.sub(&cand).as_slice());
                if val < local_best {
                    local_best = val;
                    local_w = w.to_vec();
                }
            });
            center = local_w.clone();
            width = 6.0 * width / g as f64;
        }
        if local_best < best_val {
            best_val = local_best;
            best_tuple = tuple.clone();
            best_w = local_w;
        }
        spacing = spacing.min(width * diam).max(1e-15);
    }
    let point = combine(vertices, &best_tuple, &best_w, dim);
    let final_spacing = spacing.max(diam * (6.0_f64 / g as f64).powi(BRUTE_STAGES as i32 - 1) / g as f64);
    Ok(BruteForceProjection {
        point,
        resolution: argument_resolution(p, best_val, final_spacing),
    })
}

fn enumerate_simplex_grid(m: usize, g: usize, f: &mut impl FnMut(&[f64])) {
    // weights i/g summing to 1 over m coordinates
    fn rec(m: usize, g: usize, left: usize, cur: &mut Vec<f64>, f: &mut impl FnMut(&[f64])) {
        if cur.len() == m - 1 {
            cur.push(left as f64 / g as f64);
            f(cur);
            cur.pop();
            return;
        }
        for i in 0..=left {
            cur.push(i as f64 / g as f64);
            rec(m, g, left - i, cur, f);
            cur.pop();
        }
    }
    rec(m, g, g, &mut Vec::new(), f);
}

fn enumerate_window_grid(lo: &[f64], hi: &[f64], g: usize, f: &mut impl FnMut(&[f64])) {
    // grid over the first m-1 coordinates; the last takes the remainder
    fn rec(
        lo: &[f64],
        hi: &[f64],
        g: usize,
        d: usize,
        cur: &mut Vec<f64>,
        f: &mut impl FnMut(&[f64]),
    ) {
        let m = lo.len();
        if d == m - 1 {
            let sum: f64 = cur.iter().sum();
            let last = 1.0 - sum;
            if last >= -1e-12 && last <= 1.0 + 1e-12 {
                cur.push(last.clamp(0.0, 1.0));
                f(cur);
                cur.pop();
            }
            return;
        }
        for i in 0..=g {
            let w = lo[d] + (hi[d] - lo[d]) * i as f64 / g as f64;
            cur.push(w);
            rec(lo, hi, g, d + 1, cur, f);
            cur.pop();
        }
    }
    rec(lo, hi, g, 0, &mut Vec::new(), f);
}

/// Exhaustive grid-search projection, an oracle independent of the
/// conditional-gradient path. Dimension at most 3.
pub fn brute_force_project(
    space: &SpaceSpec,
    set: &ConvexSetDescriptor,
    x: &Point,
    grid: usize,
) -> Result<BruteForceProjection> {
    if space.dim() > 3 {
        return Err(Error::DimensionTooLarge(space.dim()));
    }
    if grid < 2 {
        return Err(Error::InvalidConfig("grid must be at least 2".into()));
    }
    set.validate(space.dim())?;
    match set.canonical() {
        ConvexSetDescriptor::Box { lower, upper } => {
            brute_force_box(space, &lower, &upper, x, grid)
        }
        ConvexSetDescriptor::VPolytope { vertices } => {
            brute_force_polytope(space, &vertices, x, grid)
        }
        ConvexSetDescriptor::Ball { center, radius } => {
            // treat the ball through its bounding box intersected by
            // rejection: grid the bounding box, keep feasible samples
            let lower = center.sub(&Point::new(vec![radius; space.dim()]));
            let upper = center.add(&Point::new(vec![radius; space.dim()]));
            let p = space.p();
            let dim = space.dim();
            let mut lo = lower.as_slice().to_vec();
            let mut hi = upper.as_slice().to_vec();
            let mut best: Option<Vec<f64>> = None;
            let mut best_val = f64::INFINITY;
            let mut spacing = 0.0;
            for _ in 0..BRUTE_STAGES {
                let steps: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| (h - l) / grid as f64).collect();
                let mut idx = vec![0_usize; dim];
                loop {
                    let cand: Vec<f64> = idx
                        .iter()
                        .zip(&lo)
                        .zip(&steps)
                        .map(|((i, l), s)| l + *i as f64 * s)
                        .collect();
                    let cp = Point::new(cand.clone());
                    if p_norm(p, cp.sub(&center).as_slice()) <= radius {
                        let val = p_norm(p, x.sub(&cp).as_slice());
                        if val < best_val {
                            best_val = val;
                            best = Some(cand);
                        }
                    }
                    let mut carry = true;
                    for d in 0..dim {
                        if carry {
                            idx[d] += 1;
                            if idx[d] > grid {
                                idx[d] = 0;
                            } else {
                                carry = false;
                            }
                        }
                    }
                    if carry {
                        break;
                    }
                }
                spacing = p_norm(p, &steps);
                if let Some(b) = &best {
                    for d in 0..dim {
                        let w = 2.0 * steps[d];
                        lo[d] = (b[d] - w).max(lower.as_slice()[d]);
                        hi[d] = (b[d] + w).min(upper.as_slice()[d]);
                    }
                }
            }
            let b = best.ok_or_else(|| Error::InvalidSet("no feasible grid sample in ball".into()))?;
            Ok(BruteForceProjection {
                point: Point::new(b),
                resolution: argument_resolution(p, best_val, spacing) + spacing,
            })
        }
        ConvexSetDescriptor::Translate { .. } => unreachable!("canonical removes translates"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::membership;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    fn unit_box() -> ConvexSetDescriptor {
        ConvexSetDescriptor::Box {
            lower: pt(&[0.0, 0.0]),
            upper: pt(&[1.0, 1.0]),
        }
    }

    #[test]
    fn fixed_point_inside_set() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let x = pt(&[0.4, 0.9]);
        let r = project_default(&s, &unit_box(), &x).unwrap();
        assert_eq!(r.point, x);
        assert_eq!(r.distance, 0.0);
        assert!(r.converged);
        assert!(r.vi_residual.abs() < 1e-12);
    }

    #[test]
    fn box_projection_is_clamp() {
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let s = SpaceSpec::new(2, p).unwrap();
            let r = project_default(&s, &unit_box(), &pt(&[3.0, -0.5])).unwrap();
            assert_eq!(r.point, pt(&[1.0, 0.0]));
            assert!(r.vi_residual <= 1e-10);
        }
    }

    #[test]
    fn ball_projection_is_radial() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let ball = ConvexSetDescriptor::Ball {
            center: pt(&[0.0, 0.0]),
            radius: 1.0,
        };
        let x = pt(&[2.0, 2.0]);
        let r = project_default(&s, &ball, &x).unwrap();
        let n = s.norm(&x).unwrap();
        let expect = x.scale(1.0 / n);
        for (a, b) in r.point.as_slice().iter().zip(expect.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((r.distance - (n - 1.0)).abs() < 1e-12);
        assert!(r.vi_residual <= 1e-9);
    }

    #[test]
    fn polytope_projection_certified() {
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let s = SpaceSpec::new(2, p).unwrap();
            let tri = ConvexSetDescriptor::VPolytope {
                vertices: vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])],
            };
            let r = project_default(&s, &tri, &pt(&[2.0, 2.0])).unwrap();
            assert!(r.converged, "p = {p}");
            assert!(r.vi_residual <= 1e-10, "p = {p}: {}", r.vi_residual);
            assert!(membership(&s, &tri, &r.point, 1e-9).unwrap());
        }
    }

    #[test]
    fn idempotence() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let tri = ConvexSetDescriptor::VPolytope {
            vertices: vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])],
        };
        let r1 = project_default(&s, &tri, &pt(&[3.0, 3.0])).unwrap();
        let r2 = project_default(&s, &tri, &r1.point).unwrap();
        let d = p_norm(3.0, r1.point.sub(&r2.point).as_slice());
        assert!(d <= 1e-9);
    }

    #[test]
    fn hilbert_box_residual_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let s = SpaceSpec::new(3, 2.0).unwrap();
        for _ in 0..100 {
            let lower: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..0.0)).collect();
            let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.1..3.0)).collect();
            let set = ConvexSetDescriptor::Box {
                lower: Point::new(lower),
                upper: Point::new(upper),
            };
            let x = pt(&[
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            ]);
            let r = project_default(&s, &set, &x).unwrap();
            assert!(r.vi_residual <= 1e-10);
        }
    }

    #[test]
    fn residual_flags_wrong_point() {
        let s = SpaceSpec::new(2, 2.0).unwrap();
        let tri = ConvexSetDescriptor::VPolytope {
            vertices: vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])],
        };
        // (0,2) is not the nearest point to (3,0); (2,0) is
        let r = vi_residual(&s, &pt(&[3.0, 0.0]), &pt(&[0.0, 2.0]), &tri).unwrap();
        assert!(r > 0.1);
        // and the residual rejects points off the set
        assert!(vi_residual(&s, &pt(&[3.0, 0.0]), &pt(&[5.0, 5.0]), &tri).is_err());
    }

    #[test]
    fn brute_force_matches_clamp() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let x = pt(&[2.0, -1.0]);
        let b = brute_force_project(&s, &unit_box(), &x, 40).unwrap();
        let clamp = pt(&[1.0, 0.0]);
        let d = p_norm(3.0, b.point.sub(&clamp).as_slice());
        assert!(d <= b.resolution, "{d} > {}", b.resolution);
    }

    #[test]
    fn brute_force_near_idempotent() {
        let s = SpaceSpec::new(2, 2.0).unwrap();
        let inside = pt(&[0.3, 0.7]);
        let b = brute_force_project(&s, &unit_box(), &inside, 40).unwrap();
        let d = p_norm(2.0, b.point.sub(&inside).as_slice());
        assert!(d <= b.resolution);
    }

    #[test]
    fn brute_force_matches_solver_on_polytopes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for &p in &[1.5, 2.0, 3.0] {
            let s = SpaceSpec::new(2, p).unwrap();
            for _ in 0..20 {
                let k = rng.gen_range(3..=5);
                let vertices: Vec<Point> = (0..k)
                    .map(|_| pt(&[rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]))
                    .collect();
                let set = ConvexSetDescriptor::VPolytope { vertices };
                let x = pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
                let r = project_default(&s, &set, &x).unwrap();
                assert!(r.converged);
                let b = brute_force_project(&s, &set, &x, 40).unwrap();
                let d = p_norm(p, r.point.sub(&b.point).as_slice());
                assert!(
                    d <= 2.0 * b.resolution,
                    "p = {p}: {d} > 2 * {}",
                    b.resolution
                );
            }
        }
    }

    #[test]
    fn nonexpansiveness_not_claimed_outside_hilbert() {
        // searches for an expansion witness in l_4; record-only, no margin
        // claim either way
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        let s = SpaceSpec::new(2, 4.0).unwrap();
        let mut worst: f64 = 0.0;
        let mut witness = String::new();
        for _ in 0..3000 {
            let vertices: Vec<Point> = (0..2)
                .map(|_| pt(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]))
                .collect();
            let set = ConvexSetDescriptor::VPolytope { vertices };
            let x = pt(&[rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
            let y = pt(&[rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
            let dxy = p_norm(4.0, x.sub(&y).as_slice());
            if dxy < 1e-6 {
                continue;
            }
            let rx = project_default(&s, &set, &x).unwrap();
            let ry = project_default(&s, &set, &y).unwrap();
            if !(rx.converged && ry.converged) {
                continue;
            }
            let ratio = p_norm(4.0, rx.point.sub(&ry.point).as_slice()) / dxy;
            if ratio > worst {
                worst = ratio;
                witness = format!("set {set:?}, x {x:?}, y {y:?}, ratio {ratio}");
            }
        }
        println!("worst Lipschitz ratio found in l_4: {worst}\n{witness}");
        assert!(worst.is_finite());
    }
}

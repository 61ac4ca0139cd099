//! Norms, the normalized duality mapping, convexity moduli of l_p and its
//! dual, and numerically inverted monotone functions.

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient space: dimension and exponent p with 1 < p < infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    dim: usize,
    p: f64,
}

impl SpaceSpec {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        Ok(SpaceSpec { dim, p })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Dual exponent q with 1/p + 1/q = 1.
    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// p-norm of a primal point.
    pub fn norm(&self, x: &Point) -> Result<f64> {
        self.check_dim(x.dim())?;
        Ok(p_norm(self.p, x.as_slice()))
    }

    /// q-norm of a dual vector.
    pub fn dual_norm(&self, w: &DualVector) -> Result<f64> {
        self.check_dim(w.dim())?;
        Ok(p_norm(self.q(), w.as_slice()))
    }

    /// Normalized duality mapping J: (Jx)_i = ||x||^(2-p) |x_i|^(p-1) sgn(x_i).
    ///
    /// Satisfies <Jx, x> = ||x||^2 and ||Jx||_q = ||x||_p, with J0 = 0.
    pub fn duality_map(&self, x: &Point) -> Result<DualVector> {
        self.check_dim(x.dim())?;
        let n = p_norm(self.p, x.as_slice());
        if n == 0.0 {
            return Ok(DualVector::new(vec![0.0; self.dim]));
        }
        let scale = n.powf(2.0 - self.p);
        let coords = x
            .as_slice()
            .iter()
            .map(|&xi| scale * xi.abs().powf(self.p - 1.0) * xi.signum())
            .map(|v| if v == 0.0 { 0.0 } else { v })
            .collect();
        Ok(DualVector::new(coords))
    }
}

/// Element of the primal space, measured in the p-norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

/// Element of the dual space, measured in the q-norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualVector(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }
}

impl DualVector {
    pub fn new(coords: Vec<f64>) -> Self {
        DualVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sub(&self, other: &DualVector) -> DualVector {
        DualVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> DualVector {
        DualVector(self.0.iter().map(|a| -a).collect())
    }
}

pub(crate) fn p_norm(p: f64, coords: &[f64]) -> f64 {
    coords
        .iter()
        .map(|c| c.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Dual product <w, v> = sum of w_i v_i.
pub fn dual_pairing(w: &DualVector, v: &Point) -> Result<f64> {
    if w.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: v.dim(),
        });
    }
    Ok(w.as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| a * b)
        .sum())
}

/// Constant from the Figiel scaling inequality, 1 < L <= 3.18.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigielConstant(f64);

impl FigielConstant {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 1.0 && l <= 3.18) {
            return Err(Error::BadFigielConstant(l));
        }
        Ok(FigielConstant(l))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Default for FigielConstant {
    fn default() -> Self {
        FigielConstant(3.18)
    }
}

/// Lower-bound modulus of convexity of l_r.
///
/// For r >= 2 the exact L_r formula 1 - (1 - (eps/2)^r)^(1/r); for
/// 1 < r < 2 the quadratic bound (r-1) eps^2 / 8. Strictly increasing on
/// (0, 2], zero at eps = 0.
pub fn modulus_convexity(r: f64, eps: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidExponent(r));
    }
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::OutOfRange {
            arg: eps,
            lo: 0.0,
            hi: 2.0,
        });
    }
    if r >= 2.0 {
        Ok(1.0 - (1.0 - (eps / 2.0).powf(r)).max(0.0).powf(1.0 / r))
    } else {
        Ok((r - 1.0) * eps * eps / 8.0)
    }
}

/// g_r(eps) = delta_r(eps) / eps, strictly increasing on (0, 2].
pub fn g_fn(r: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::OutOfRange {
            arg: eps,
            lo: f64::MIN_POSITIVE,
            hi: 2.0,
        });
    }
    Ok(modulus_convexity(r, eps)? / eps)
}

/// Result of inverting a monotone function on (0, 2].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Inverse {
    Value(f64),
    /// The requested value exceeds the range of the function on (0, 2];
    /// the corresponding bound carries no information.
    Vacuous,
}

impl Inverse {
    pub fn value(&self) -> Option<f64> {
        match self {
            Inverse::Value(v) => Some(*v),
            Inverse::Vacuous => None,
        }
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, Inverse::Vacuous)
    }
}

/// Invert a strictly increasing function f on (0, 2] by bisection.
///
/// f is extended with f(0) = 0. Returns `Vacuous` when v > f(2).
pub fn inverse_monotone<F: Fn(f64) -> f64>(f: F, v: f64, tol: f64) -> Result<Inverse> {
    if v < 0.0 {
        return Err(Error::OutOfRange {
            arg: v,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if tol <= 0.0 {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    // monotonicity check on a bracketing grid
    let mut prev = 0.0;
    for i in 1..=32 {
        let t = 2.0 * i as f64 / 32.0;
        let ft = f(t);
        if ft < prev - 1e-12 {
            return Err(Error::NotMonotone(t));
        }
        prev = ft;
    }
    if v == 0.0 {
        return Ok(Inverse::Value(0.0));
    }
    let f2 = f(2.0);
    if v > f2 {
        return Ok(Inverse::Vacuous);
    }
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64);
    let mut mid = 1.0;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm - v).abs() <= tol && hi - lo <= 1e-10 {
            break;
        }
        if fm < v {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(Inverse::Value(mid))
}

/// delta_r^{-1}(v) on [0, 2].
pub fn modulus_inverse(r: f64, v: f64, tol: f64) -> Result<Inverse> {
    modulus_convexity(r, 2.0)?; // validate r
    inverse_monotone(|t| modulus_convexity(r, t).unwrap(), v, tol)
}

/// g_r^{-1}(v) on [0, 2].
pub fn g_inverse(r: f64, v: f64, tol: f64) -> Result<Inverse> {
    modulus_convexity(r, 2.0)?;
    inverse_monotone(
        |t| {
            if t == 0.0 {
                0.0
            } else {
                g_fn(r, t).unwrap()
            }
        },
        v,
        tol,
    )
}

/// Margin eps^2 delta(eta) - (4L)^{-1} eta^2 delta(eps) of the Figiel
/// scaling inequality; nonnegative for the implemented moduli.
pub fn figiel_check(r: f64, eps: f64, eta: f64, l: &FigielConstant) -> Result<f64> {
    if !(eps > 0.0 && eps <= eta && eta <= 2.0) {
        return Err(Error::BadFigielArgs { eps, eta });
    }
    let d_eta = modulus_convexity(r, eta)?;
    let d_eps = modulus_convexity(r, eps)?;
    Ok(eps * eps * d_eta - eta * eta * d_eps / (4.0 * l.value()))
}

fn random_direction(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().any(|c| c.abs() > 1e-9) {
            return v;
        }
    }
}

/// Random point of the unit sphere of l_p^n.
pub fn random_unit(rng: &mut impl Rng, space: &SpaceSpec) -> Point {
    let v = random_direction(rng, space.dim());
    let n = p_norm(space.p(), &v);
    Point::new(v.into_iter().map(|c| c / n).collect())
}

/// Sampling upper estimate of the modulus of convexity of l_p^n.
///
/// Minimizes 1 - ||(x+y)/2|| over sampled unit pairs with ||x - y|| >= eps.
/// Always at least `modulus_convexity(p, eps)` up to sampling tolerance.
pub fn estimate_modulus_empirical(
    space: &SpaceSpec,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::OutOfRange {
            arg: eps,
            lo: 0.0,
            hi: 2.0,
        });
    }
    let p = space.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // the antipodal pair (x, -x) always satisfies ||x - y|| = 2 >= eps
    let mut best = 1.0_f64;
    for k in 0..samples {
        let x = random_unit(&mut rng, space);
        let w = if k % 4 == 0 {
            // near-antipodal endpoint so large eps stays reachable
            let d = random_direction(&mut rng, space.dim());
            let v: Vec<f64> = x
                .as_slice()
                .iter()
                .zip(&d)
                .map(|(xi, di)| -xi + 0.02 * di)
                .collect();
            let n = p_norm(p, &v);
            Point::new(v.into_iter().map(|c| c / n).collect())
        } else {
            random_unit(&mut rng, space)
        };
        let path = |t: f64| -> Option<Point> {
            let v: Vec<f64> = x
                .as_slice()
                .iter()
                .zip(w.as_slice())
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect();
            let n = p_norm(p, &v);
            if n < 1e-12 {
                return None;
            }
            Some(Point::new(v.into_iter().map(|c| c / n).collect()))
        };
        let dist = |y: &Point| p_norm(p, x.sub(y).as_slice());
        let end = match path(1.0) {
            Some(y) => y,
            None => continue,
        };
        if dist(&end) < eps {
            continue;
        }
        // bisect the path parameter so that ||x - y|| lands just above eps
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match path(mid) {
                Some(y) if dist(&y) >= eps => hi = mid,
                _ => lo = mid,
            }
        }
        if let Some(y) = path(hi) {
            if dist(&y) >= eps {
                let mid_norm = p_norm(p, x.add(&y).scale(0.5).as_slice());
                best = best.min(1.0 - mid_norm);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    #[test]
    fn euclidean_norm() {
        let s = SpaceSpec::new(2, 2.0).unwrap();
        assert!((s.norm(&pt(&[3.0, 4.0])).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(s.norm(&pt(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn p3_norm_direct() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let expect = 2.0_f64.powf(1.0 / 3.0);
        assert!((s.norm(&pt(&[1.0, 1.0])).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn norm_dimension_mismatch() {
        let s = SpaceSpec::new(3, 2.0).unwrap();
        assert!(s.norm(&pt(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn pairing_basics() {
        let w = DualVector::new(vec![1.0, 0.0]);
        let v = pt(&[0.0, 1.0]);
        assert_eq!(dual_pairing(&w, &v).unwrap(), 0.0);
        let w = DualVector::new(vec![1.0, 1.0]);
        let v = pt(&[1.0, 1.0]);
        assert_eq!(dual_pairing(&w, &v).unwrap(), 2.0);
    }

    #[test]
    fn pairing_holder() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = SpaceSpec::new(5, 3.0).unwrap();
        for _ in 0..200 {
            let w = DualVector::new(random_direction(&mut rng, 5));
            let v = Point::new(random_direction(&mut rng, 5));
            let lhs = dual_pairing(&w, &v).unwrap().abs();
            let rhs = p_norm(s.q(), w.as_slice()) * p_norm(s.p(), v.as_slice());
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn duality_map_identity_in_hilbert() {
        let s = SpaceSpec::new(3, 2.0).unwrap();
        let x = pt(&[1.0, -2.0, 0.5]);
        let j = s.duality_map(&x).unwrap();
        for (a, b) in j.as_slice().iter().zip(x.as_slice()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn duality_map_zero() {
        let s = SpaceSpec::new(4, 3.0).unwrap();
        let j = s.duality_map(&Point::zeros(4)).unwrap();
        assert!(j.as_slice().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn duality_map_p3_identities() {
        let s = SpaceSpec::new(2, 3.0).unwrap();
        let x = pt(&[1.0, 1.0]);
        let j = s.duality_map(&x).unwrap();
        let e = 2.0_f64.powf(-1.0 / 3.0);
        assert!((j.as_slice()[0] - e).abs() < 1e-14);
        assert!((j.as_slice()[1] - e).abs() < 1e-14);
        let pair = dual_pairing(&j, &x).unwrap();
        let n = s.norm(&x).unwrap();
        assert!((pair - n * n).abs() < 1e-13);
        assert!((s.dual_norm(&j).unwrap() - n).abs() < 1e-13);
    }

    #[test]
    fn duality_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let s = SpaceSpec::new(6, p).unwrap();
            for _ in 0..300 {
                let x = Point::new(
                    random_direction(&mut rng, 6)
                        .into_iter()
                        .map(|c| 5.0 * c)
                        .collect(),
                );
                let j = s.duality_map(&x).unwrap();
                let n = s.norm(&x).unwrap();
                let pair = dual_pairing(&j, &x).unwrap();
                assert!((pair - n * n).abs() <= 1e-12 * (1.0 + n * n));
                assert!((s.dual_norm(&j).unwrap() - n).abs() <= 1e-12 * (1.0 + n));
            }
        }
    }

    #[test]
    fn duality_map_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &p in &[1.5, 3.0, 4.0] {
            let s = SpaceSpec::new(4, p).unwrap();
            for _ in 0..300 {
                let x = Point::new(random_direction(&mut rng, 4));
                let y = Point::new(random_direction(&mut rng, 4));
                let jx = s.duality_map(&x).unwrap();
                let jy = s.duality_map(&y).unwrap();
                let v = dual_pairing(&jx.sub(&jy), &x.sub(&y)).unwrap();
                assert!(v >= -1e-12);
            }
        }
    }

    #[test]
    fn modulus_values() {
        // antipodal points in Hilbert space
        assert!((modulus_convexity(2.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(modulus_convexity(3.0, 0.0).unwrap(), 0.0);
        let v = modulus_convexity(4.0, 1.0).unwrap();
        let expect = 1.0 - (1.0 - 1.0 / 16.0_f64).powf(0.25);
        assert!((v - expect).abs() < 1e-15);
        assert!(modulus_convexity(2.0, 2.5).is_err());
        assert!(modulus_convexity(1.0, 1.0).is_err());
    }

    #[test]
    fn modulus_hilbert_bracket() {
        // eps^2/8 <= delta_H(eps) <= eps^2/4
        for i in 1..=40 {
            let eps = i as f64 * 0.05;
            let d = modulus_convexity(2.0, eps).unwrap();
            assert!(d >= eps * eps / 8.0 - 1e-15);
            assert!(d <= eps * eps / 4.0 + 1e-15);
        }
    }

    #[test]
    fn modulus_strictly_increasing() {
        for &r in &[1.5, 2.0, 3.0, 4.0, 4.0 / 3.0] {
            let mut prev = 0.0;
            for i in 1..=1000 {
                let eps = 2.0 * i as f64 / 1000.0;
                let d = modulus_convexity(r, eps).unwrap();
                assert!(d > prev);
                prev = d;
            }
        }
    }

    #[test]
    fn g_values() {
        assert!((g_fn(2.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let g = g_fn(1.5, 0.8).unwrap();
        assert!((g - 0.8 / 16.0).abs() < 1e-15);
        assert!(g_fn(2.0, 1e-9).unwrap() < 1e-8);
        assert!(g_fn(2.0, 0.0).is_err());
    }

    #[test]
    fn g_strictly_increasing() {
        for &r in &[1.5, 2.0, 3.0, 4.0, 4.0 / 3.0] {
            let mut prev = 0.0;
            for i in 1..=1000 {
                let eps = 2.0 * i as f64 / 1000.0;
                let g = g_fn(r, eps).unwrap();
                assert!(g > prev, "r = {r}, eps = {eps}");
                prev = g;
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = |t: f64| modulus_convexity(2.0, t).unwrap();
        for i in 1..=20 {
            let t = 2.0 * i as f64 / 20.0;
            let v = f(t);
            let inv = inverse_monotone(f, v, 1e-12).unwrap().value().unwrap();
            // argument accuracy; the value error can be amplified where the
            // modulus is steep (slope unbounded near eps = 2)
            assert!((inv - t).abs() <= 1e-9, "t = {t}, inv = {inv}");
        }
    }

    #[test]
    fn inverse_zero_and_vacuous() {
        let f = |t: f64| g_fn(1.5, t.max(1e-300)).unwrap();
        assert_eq!(
            inverse_monotone(f, 0.0, 1e-10).unwrap(),
            Inverse::Value(0.0)
        );
        // g_{1.5}(2) = 1/8 < 0.5
        assert!(inverse_monotone(f, 0.5, 1e-10).unwrap().is_vacuous());
    }

    #[test]
    fn inverse_rejects_decreasing() {
        assert!(matches!(
            inverse_monotone(|t| -t, 0.5, 1e-10),
            Err(Error::NotMonotone(_))
        ));
    }

    #[test]
    fn figiel_equal_arguments() {
        let l = FigielConstant::default();
        let eps = 0.7;
        let m = figiel_check(2.0, eps, eps, &l).unwrap();
        let expect =
            modulus_convexity(2.0, eps).unwrap() * eps * eps * (1.0 - 1.0 / (4.0 * l.value()));
        assert!((m - expect).abs() < 1e-15);
        assert!(m > 0.0);
    }

    #[test]
    fn figiel_grid_nonnegative() {
        let l = FigielConstant::default();
        for &r in &[1.5, 2.0, 3.0, 4.0, 3.0, 1.5, 4.0 / 3.0] {
            for k in 1..=40 {
                for m in k..=40 {
                    let eps = 0.05 * k as f64;
                    let eta = 0.05 * m as f64;
                    assert!(figiel_check(r, eps, eta, &l).unwrap() >= 0.0);
                }
            }
        }
    }

    // the bound calculators stay sound for any L >= 1/4 with these moduli;
    // checked here near the lower end of the admissible interval
    #[test]
    fn figiel_grid_nonnegative_small_l() {
        let l = FigielConstant::new(1.001).unwrap();
        for &r in &[1.5, 2.0, 3.0, 4.0, 4.0 / 3.0] {
            for k in 1..=40 {
                for m in k..=40 {
                    let eps = 0.05 * k as f64;
                    let eta = 0.05 * m as f64;
                    assert!(figiel_check(r, eps, eta, &l).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn figiel_rejects_bad_order() {
        let l = FigielConstant::default();
        assert!(figiel_check(2.0, 1.0, 0.5, &l).is_err());
    }

    #[test]
    fn empirical_modulus_hilbert() {
        let s = SpaceSpec::new(2, 2.0).unwrap();
        let v = estimate_modulus_empirical(&s, 1.0, 400, 1).unwrap();
        let expect = 1.0 - 3.0_f64.sqrt() / 2.0;
        assert!((v - expect).abs() < 1e-6, "got {v}, expect {expect}");
        let v2 = estimate_modulus_empirical(&s, 2.0, 200, 2).unwrap();
        assert!((v2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empirical_dominates_analytic() {
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let s = SpaceSpec::new(3, p).unwrap();
            for &eps in &[0.3, 1.0, 1.7] {
                let emp = estimate_modulus_empirical(&s, eps, 300, 5).unwrap();
                let ana = modulus_convexity(p, eps).unwrap();
                assert!(emp >= ana - 1e-6, "p = {p}, eps = {eps}: {emp} < {ana}");
            }
        }
    }

    #[test]
    fn empirical_rejects_zero_samples() {
        let s = SpaceSpec::new(2, 2.0).unwrap();
        assert!(matches!(
            estimate_modulus_empirical(&s, 1.0, 0, 1),
            Err(Error::NoSamples)
        ));
    }
}

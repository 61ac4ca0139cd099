//! Moduli of convexity delta_p(eps), the auxiliary curve g_p = delta_p / eps,
//! their inverses, and an empirical sanity check that the analytic curve is a
//! genuine lower bound.
//!
//! Run with: cargo run --example moduli_curves

use banachproj::space::{
    estimate_modulus_empirical, g_fn, g_inverse, modulus_convexity, Inverse,
};
use banachproj::SpaceSpec;

fn main() -> banachproj::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        let space = SpaceSpec::new(6, p)?;
        println!("p = {p}");
        println!("{:>6} {:>12} {:>12} {:>12}", "eps", "delta", "g", "empirical");
        for k in 1..=8 {
            let eps = 0.25 * k as f64;
            let delta = modulus_convexity(p, eps)?;
            let g = g_fn(p, eps)?;
            let emp = estimate_modulus_empirical(&space, eps, 2000, 7)?;
            println!("{eps:>6.2} {delta:>12.6} {g:>12.6} {emp:>12.6}");
        }

        // inverting g: the round trip and the vacuous regime
        let v = 0.5 * g_fn(p, 2.0)?;
        if let Inverse::Value(eps) = g_inverse(p, v, 1e-12)? {
            println!("  g^-1({v:.6}) = {eps:.6}, g(that) = {:.6}", g_fn(p, eps)?);
        }
        match g_inverse(p, 2.0 * g_fn(p, 2.0)?, 1e-12)? {
            Inverse::Vacuous => println!("  beyond g(2) the inverse is vacuous: no information"),
            Inverse::Value(v) => println!("  unexpected value {v}"),
        }
        println!();
    }
    Ok(())
}

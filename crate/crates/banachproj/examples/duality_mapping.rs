//! The normalized duality mapping J in l_p: coordinates, the identities
//! <Jx, x> = ||x||^2 and ||Jx||_q = ||x||_p, and the Hilbert special case.
//!
//! Run with: cargo run --example duality_mapping

use banachproj::space::dual_pairing;
use banachproj::{Point, SpaceSpec};

fn main() -> banachproj::Result<()> {
    let x = Point::new(vec![3.0, -4.0, 0.0, 1.0]);

    for p in [1.5, 2.0, 3.0, 4.0] {
        let space = SpaceSpec::new(4, p)?;
        let jx = space.duality_map(&x)?;
        let n = space.norm(&x)?;
        println!("p = {p}  (q = {:.4})", space.q());
        println!("  x        = {:?}", x.as_slice());
        println!("  Jx       = {:?}", jx.as_slice());
        println!("  <Jx, x>  = {:.12}  (||x||^2 = {:.12})", dual_pairing(&jx, &x)?, n * n);
        println!("  ||Jx||_q = {:.12}  (||x||_p = {:.12})", space.dual_norm(&jx)?, n);
        if p == 2.0 {
            println!("  p = 2: Jx equals x, the mapping is the identity");
        }
        println!();
    }
    Ok(())
}

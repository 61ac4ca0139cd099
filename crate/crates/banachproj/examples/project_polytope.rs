//! Certified metric projection: closed forms for boxes and balls, the
//! conditional-gradient solver for V-polytopes, and the variational
//! inequality residual that certifies each answer.
//!
//! Run with: cargo run --example project_polytope

use banachproj::{project_default, ConvexSetDescriptor, Point, SpaceSpec};

fn main() -> banachproj::Result<()> {
    let space = SpaceSpec::new(2, 3.0)?;

    let sets = [
        (
            "box [0,1]^2",
            ConvexSetDescriptor::Box {
                lower: Point::new(vec![0.0, 0.0]),
                upper: Point::new(vec![1.0, 1.0]),
            },
        ),
        (
            "l_3 ball around (1, 1)",
            ConvexSetDescriptor::Ball {
                center: Point::new(vec![1.0, 1.0]),
                radius: 0.5,
            },
        ),
        (
            "triangle hull{(0,0), (2,0), (0,2)}",
            ConvexSetDescriptor::VPolytope {
                vertices: vec![
                    Point::new(vec![0.0, 0.0]),
                    Point::new(vec![2.0, 0.0]),
                    Point::new(vec![0.0, 2.0]),
                ],
            },
        ),
    ];

    let x = Point::new(vec![2.5, 1.8]);
    println!("projecting x = {:?} in the l_3 norm\n", x.as_slice());
    for (name, set) in &sets {
        let result = project_default(&space, set, &x)?;
        println!("{name}");
        println!("  projection  = {:?}", result.point.as_slice());
        println!("  distance    = {:.12}", result.distance);
        println!("  vi_residual = {:.3e}  (<= 0 up to tolerance certifies optimality)", result.vi_residual);
        println!("  iterations  = {}, converged = {}\n", result.iterations, result.converged);
    }
    Ok(())
}

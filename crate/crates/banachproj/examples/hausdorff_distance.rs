//! Hausdorff distance between convex sets: exact values for translates and
//! aligned boxes, certified upper bounds when a solver is involved.
//!
//! Run with: cargo run --example hausdorff_distance

use banachproj::{hausdorff_distance, ConvexSetDescriptor, Point, SpaceSpec};

fn main() -> banachproj::Result<()> {
    let space = SpaceSpec::new(2, 2.0)?;
    let tol = 1e-10;

    let unit_box = ConvexSetDescriptor::Box {
        lower: Point::new(vec![0.0, 0.0]),
        upper: Point::new(vec![1.0, 1.0]),
    };
    let shifted = unit_box.translate(&Point::new(vec![0.3, -0.4]))?;
    println!(
        "box vs its (0.3, -0.4)-translate: H = {:.12}  (exactly ||t|| = 0.5)",
        hausdorff_distance(&space, &unit_box, &shifted, tol)?
    );

    let bigger = ConvexSetDescriptor::Box {
        lower: Point::new(vec![-1.0, -1.0]),
        upper: Point::new(vec![2.0, 2.0]),
    };
    println!(
        "unit box vs [-1,2]^2:              H = {:.12}  (corner gap sqrt(2))",
        hausdorff_distance(&space, &unit_box, &bigger, tol)?
    );

    let ball_a = ConvexSetDescriptor::Ball {
        center: Point::new(vec![0.0, 0.0]),
        radius: 1.0,
    };
    let ball_b = ConvexSetDescriptor::Ball {
        center: Point::new(vec![3.0, 0.0]),
        radius: 0.5,
    };
    println!(
        "two balls:                         H = {:.12}  (||c1 - c2|| + |r1 - r2| here)",
        hausdorff_distance(&space, &ball_a, &ball_b, tol)?
    );

    let triangle = ConvexSetDescriptor::VPolytope {
        vertices: vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![0.0, 1.0]),
        ],
    };
    println!(
        "unit box vs lower-left triangle:   H = {:.12}  (farthest corner (1,1))",
        hausdorff_distance(&space, &unit_box, &triangle, tol)?
    );
    Ok(())
}

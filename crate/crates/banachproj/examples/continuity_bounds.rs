//! The quantitative continuity estimates on a single instance: monotonicity
//! and continuity of the duality mapping, projection continuity in the
//! argument and in the set, and the composite bound.
//!
//! Run with: cargo run --example continuity_bounds

use banachproj::bounds::{
    hilbert_set_bounds, lemma1_outcome, lemma2_outcome, theorem1_outcome, theorem2_outcome,
    third_problem_outcome,
};
use banachproj::{
    project_default, BoundOutcome, ConvexSetDescriptor, FigielConstant, Point, SetPair, SpaceSpec,
};

fn show(name: &str, out: &BoundOutcome) {
    match out.rhs {
        Some(rhs) => println!(
            "{name}: lhs = {:.6e}  rhs = {:.6e}  margin = {:.3e}",
            out.lhs,
            rhs,
            out.margin.unwrap()
        ),
        None => println!("{name}: lhs = {:.6e}  rhs vacuous (no information at this scale)", out.lhs),
    }
}

fn main() -> banachproj::Result<()> {
    let space = SpaceSpec::new(2, 3.0)?;
    let l = FigielConstant::default();

    let x = Point::new(vec![0.9, 0.4]);
    let y = Point::new(vec![0.90005, 0.39996]);
    show("duality monotonicity  ", &lemma1_outcome(&space, &x, &y, &l)?);
    show("duality continuity    ", &lemma2_outcome(&space, &x, &y, &l)?);

    let set = ConvexSetDescriptor::VPolytope {
        vertices: vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![0.5, 0.0]),
            Point::new(vec![0.0, 0.5]),
        ],
    };
    let xbar = project_default(&space, &set, &x)?;
    let ybar = project_default(&space, &set, &y)?;
    show(
        "projection in argument",
        &theorem1_outcome(&space, &set, &x, &y, &xbar, &ybar, &l)?,
    );

    let shift = Point::new(vec![2e-5, -1e-5]);
    let pair = SetPair::translate_pair(&space, &set, &shift)?;
    let p1 = project_default(&space, &pair.omega1, &x)?;
    let p2 = project_default(&space, &pair.omega2, &x)?;
    show(
        "projection in set     ",
        &theorem2_outcome(&space, &pair, &x, &p1, &p2, &l)?,
    );

    let py1 = project_default(&space, &pair.omega1, &y)?;
    let py2 = project_default(&space, &pair.omega2, &y)?;
    show(
        "composite bound       ",
        &third_problem_outcome(&space, &pair, &x, &y, &p1, &py1, &py2, &l)?,
    );

    let (ours, comparison) = hilbert_set_bounds(1e-4, 1.0, 0.5)?;
    println!(
        "hilbert set bound     : sqrt(2 sigma (r + d)) = {ours:.6e}  vs comparison {comparison:.6e}"
    );
    Ok(())
}

//! Natural-gradient descent of a squared loss on the simplex.

use fisher_kahler::natgrad::{descend, squared_loss_gradient};
use fisher_kahler::simplex::{random_point, Distribution};

fn main() -> fisher_kahler::Result<()> {
    let target = Distribution::new(vec![0.1, 0.2, 0.3, 0.4])?;
    let start = random_point(4, 5);
    println!("gradient at start: {:.4?}", squared_loss_gradient(&start, &target)?.components());

    let trace = descend(&start, &target, 0.25, 300)?;
    for row in trace.rows.iter().step_by(50) {
        println!("iter {:3}: f = {:.3e}, p = {:.6?}", row.iter, row.loss, row.p);
    }
    println!("final: f = {:.3e}", trace.final_loss());

    // Too large a step pushes a weight through zero.
    match descend(&start, &target, 10.0, 10) {
        Err(e) => println!("step 10: {e}"),
        Ok(_) => println!("step 10 stayed inside"),
    }
    Ok(())
}

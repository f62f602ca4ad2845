//! Discretized LP estimate and the structure read off its optimum.

use delsarte::lp;
use rug::Rational;

fn main() {
    let m: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(43);
    let est = lp::estimate(m, &Rational::from((1, 2)), None, None).expect("LP solves");
    println!("m={m} cap={} grid={} pivots={}", est.degree_cap, est.grid_size, est.solution.iterations);
    println!("w estimate {}", est.solution.w_estimate.to_f64());
    for (k, x) in est.solution.x.iter().enumerate() {
        println!("  f_{:<3} {:+.6e}", 2 * k + 2, x.to_f64());
    }
    for g in &est.guesses {
        println!("guess form={} K={} degree={}: {}", g.spec.form, g.spec.k, g.spec.degree(), g.notes);
    }
}

//! Runs every certification check on the m = 43 candidate.

use delsarte::pipeline::{solve, SolveOptions};

fn main() {
    let s = solve(&SolveOptions::new(43)).expect("m = 43 certifies");
    println!("{}", s.summary());
    for c in &s.checks {
        println!("{c}");
    }
    println!("{}", s.uniqueness.check);
    println!("tail threshold n0 = {}", s.positivity.n0);
    for (node, w) in s.functional.nodes.iter().zip(&s.functional.weights) {
        println!("lambda({}) = {:.15e}", node.label(&s.functional.s), w.to_f64());
    }
}

//! Builds the form 3, K = 3 system at m = 43 and solves it through the eliminant.

use delsarte::construct::{construct_candidates, FormSpec};
use delsarte::gegenbauer::BasisContext;
use rug::Rational;

fn main() {
    let ctx = BasisContext::new(43).unwrap();
    let spec = FormSpec::new(3, 3).unwrap();
    let c = construct_candidates(&ctx, spec, &Rational::from((1, 2)), 512).unwrap();
    let f = c.trace.eliminant.as_ref().expect("K = 3 has an eliminant");
    println!("eliminant degree {}", f.degree().unwrap_or(0));
    println!("real roots: {}", c.roots.len());
    let cand = c.select().expect("one admissible candidate");
    println!("xi = {:.20}", cand.xi.as_ref().unwrap().to_f64());
    for (i, a) in cand.zeros.iter().enumerate() {
        println!("a{} = {:.17}", i + 1, a.to_f64());
    }
    println!("q = {:.17}  r = {:.17}", cand.q.as_ref().unwrap().to_f64(), cand.r.as_ref().unwrap().to_f64());
    for (k, f) in cand.basis().iter().enumerate() {
        println!("f_{:<2} {:.12e}", 2 * k, f.to_f64());
    }
}

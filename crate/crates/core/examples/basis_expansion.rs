//! Expands an even polynomial in the normalized Gegenbauer basis and back.

use delsarte::gegenbauer::{BasisContext, EvenPolynomial, PrecisionTag};
use rug::Rational;

fn main() {
    let m = 8;
    let ctx = BasisContext::new(m).expect("m >= 2");
    // p(t) = t^2 (t^2 - 1/4)
    let p = EvenPolynomial::from_even(
        vec![Rational::new(), Rational::from((-1, 4)), Rational::from(1)],
        PrecisionTag::Exact,
    );
    let b = ctx.expand_in_basis(&p);
    for (k, c) in b.iter().enumerate() {
        println!("f_{} = {c}", 2 * k);
    }
    println!("p(1) = {}", b.iter().sum::<Rational>());
    for n in [2, 4] {
        let coeffs: Vec<String> = ctx.gegenbauer_coeffs(n).iter().map(|c| c.to_string()).collect();
        println!("R_{n} = [{}]", coeffs.join(", "));
    }
}

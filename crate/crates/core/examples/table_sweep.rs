//! Solves a range of dimensions and compares with the bundled registry.

use delsarte::numeric::fmt_sci;
use delsarte::pipeline::{solve, SolveOptions};
use delsarte::tables;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("integer bound"));
    let lo = args.next().unwrap_or(3);
    let hi = args.next().unwrap_or(30);
    for m in lo..=hi {
        match solve(&SolveOptions::new(m)) {
            Ok(s) => {
                let cmp = tables::compare(m, &s.bound);
                let status = cmp.as_ref().map_or("no-registry".to_string(), |c| format!("{:?}", c.status));
                let rd = cmp.as_ref().map_or(String::new(), |c| fmt_sci(&c.rel_diff, 2));
                println!("{m:>4} {:>28} {:>24} {status:>8} {rd}", s.bound.even_floor, s.spec.to_string());
            }
            Err(e) => println!("{m:>4} error [{}]: {e}", e.stage()),
        }
    }
    for a in tables::anomalies() {
        println!("registry anomaly: {a:?}");
    }
}

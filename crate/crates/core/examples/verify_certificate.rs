//! Writes a certificate, reloads it, and re-verifies it from the text alone.

use delsarte::certify::{verify_certificate, Certificate};
use delsarte::pipeline::{solve, SolveOptions};

fn main() {
    let m: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(24);
    let json = solve(&SolveOptions::new(m)).unwrap().certificate.to_json().unwrap();
    println!("{} bytes", json.len());
    let cert = Certificate::from_json(&json).unwrap();
    for c in verify_certificate(&cert).unwrap() {
        println!("{c}");
    }

    let mut tampered = cert.clone();
    tampered.bound.w = format!("1{}", tampered.bound.w);
    tampered.bound.w_exact = None;
    let failed: Vec<_> = verify_certificate(&tampered).unwrap().into_iter().filter(|c| !c.pass).map(|c| c.name).collect();
    println!("after editing w: {failed:?}");
}

//! Delsarte linear-programming bounds `w(m, s)` for antipodal spherical codes
//! with maximal inner product `s`, constructed in closed form and certified.
//!
//! The runnable programs in `examples/` are the intended entry points:
//!
//! | example | shows |
//! |---|---|
//! | `basis_expansion` | exact expansion in the normalized Gegenbauer basis |
//! | `lp_estimate` | discretized LP optimum and the structure guessed from it |
//! | `construct_m43` | eliminant, roots and extremal polynomial for `m = 43` |
//! | `certify_m43` | every certification check on that polynomial |
//! | `table_sweep` | a range of dimensions against the bundled registry |
//! | `verify_certificate` | serialize, reload and re-verify a certificate |
//!
//! The one-call path is [`pipeline::solve`]:
//!
//! ```
//! use delsarte::pipeline::{solve, SolveOptions};
//!
//! let s = solve(&SolveOptions::new(24)).unwrap();
//! assert_eq!(s.bound.w_exact.unwrap(), 196560);
//! assert!(s.certificate.all_pass());
//! ```

pub mod error;
pub mod gegenbauer;
pub mod numeric;
pub mod poly;
pub mod construct;
pub mod certify;
pub mod tables;
pub mod lp;
pub mod pipeline;
pub mod cli;

//! Desk-scale verification lab for the Frobenius statistics of genus-2
//! symplectic compatible systems.
//!
//! The library is organised around the pipeline
//!
//! ```text
//!   genus2 (point counts -> Frobenius records)
//!      |                         \
//!   ffield (F_l, F_{l^k}, polys)  harness (pi_f(x,a), pi(x,a;l), bound curves)
//!      |                         /
//!   gsp4 (GSp4 / group scheme)  chebotarev (Li, effective bounds, simulator)
//!      |
//!   census (exact cardinality and dimension checks)
//! ```
//!
//! plus [`twists`] for inner-twist detection on eigenvalue systems over small
//! number fields and [`cli`] for the command surface and the record cache.

pub mod arith;
pub mod census;
pub mod chebotarev;
pub mod cli;
pub mod ffield;
pub mod genus2;
pub mod gsp4;
pub mod harness;
pub mod twists;

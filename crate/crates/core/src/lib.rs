//! Dense complex-matrix toolkit for simplifying finite operators with polynomials.
//!
//! The crate is organized around one question: given a square complex matrix
//! `A`, how much simpler can `p(A)` be made by choosing the polynomial `p`
//! well, and what does the answer cost in norms, growth functions, and
//! spectral bookkeeping?  The modules build on each other roughly bottom-up:
//!
//! * [`numkernel`] — the numeric substrate: [`CMatrix`](numkernel::CMatrix),
//!   LU/QR/SVD/Schur factorizations, polynomial roots, and a plain-text
//!   matrix interchange format.
//! * [`multicentric`] — series calculus with several expansion centers at
//!   once: `phi(z) = sum_j delta_j(z) f_j(p(z))`.
//! * [`capacity`] — minimal norms of monic polynomials in `A` and the
//!   resulting capacity profiles.
//! * [`meromorphic`] — logarithmic growth curves of resolvent-type matrix
//!   functions and the perturbation inequalities they satisfy.
//! * [`projection`] — contour-integral spectral projections on circles and
//!   lemniscates, with explicit norm budgets.
//! * [`classify`] — polynomial classification searches: minimal and
//!   simplifying polynomials, polynomially-normal and polynomially-unitary
//!   certificates.
//! * [`blockops`] — upper-triangular 2x2 block operators, Sylvester
//!   equations, and what coupling blocks do to degrees and growth.
//! * [`zoo`] — a library of structured example operators with predicted
//!   spectra and truncation diagnostics.
//! * [`synth`] — seeded random instance generators shared by test suites and
//!   the command-line driver.

pub mod blockops;
pub mod capacity;
pub mod classify;
pub mod error;
pub mod meromorphic;
pub mod multicentric;
pub mod projection;
pub mod numkernel;
pub mod synth;
pub mod zoo;

pub use error::{Error, Result};

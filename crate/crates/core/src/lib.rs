//! Computational Iwasawa theory over `Z_p`, with `p = 2` as the default.
//!
//! The crate is organised bottom-up:
//!
//! - [`padic`]: fixed-precision p-adic integers, logarithm, exponential.
//! - [`series`]: truncated power series over `Z_p` (the Iwasawa algebra),
//!   Weierstrass division and preparation, `mu`/`lambda` invariants.
//! - [`cyclotomic`]: `Z_p[zeta_d]`, evaluation of series at `zeta - 1`,
//!   norms, and the check relating `mu`, `lambda` to valuations of norms.
//! - [`mahler`]: measures on `Z_p` as Mahler series.
//! - [`coleman`]: the logarithmic operator attaching a measure on the units
//!   to a power series.
//! - [`galois`]: measures and pseudo-measures on `Gamma x H`, characters,
//!   p-adic L-values.
//! - [`lambda_modules`]: finitely presented torsion modules and their
//!   characteristic ideals.
//! - [`lattice`]: submodules of `(Z/p^l)^n` in Howell form.
//! - [`euler`]: group-ring combinatorics of Kolyvagin derivatives over
//!   synthetic Euler systems.
//! - [`json`]: the file formats read and written by the command line.
//! - [`cli`]: the `iwasawa` command line front end.

pub mod error;
pub mod padic;
pub mod series;
pub mod weierstrass;
pub mod cyclotomic;
pub mod mahler;
pub mod coleman;
pub mod galois;
pub mod lambda_modules;
pub mod lattice;
pub mod euler;
pub mod json;
pub mod cli;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicInt, UnitDecomposition, Valuation};
pub use series::{Coeff, IwasawaSeries, MuLambda, Series};
pub use weierstrass::{weierstrass_divide, weierstrass_prepare, WeierstrassData};

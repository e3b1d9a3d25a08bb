//! Exact arithmetic toolkit for the curve family `x^a + y^a + z^b x^c y^c = 0`
//! over finite fields of odd characteristic.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: `F_p` / `F_{p^2}` arithmetic, power-residue counting and
//!   multinomial coefficients modulo `p`.
//! * [`criterion`]: the 25-coefficient superspeciality test for the genus-5
//!   quintic `x y z^3 + s x^5 + t y^5`.
//! * [`pointcount`]: rational points on the nonsingular model and the
//!   Hasse–Weil classification.
//! * [`congruence`]: residue-class predictions (`n`, `d`, densities, the
//!   maximal-parameter table).
//! * [`cover`]: symbolic verification of the Hermitian-curve substitutions.
//! * [`oracle`]: slow brute-force references used to validate everything
//!   above.

pub mod congruence;
pub mod cover;
pub mod criterion;
mod error;
pub mod field;
pub mod oracle;
pub mod pointcount;

pub use error::{Error, ErrorKind, Result};
pub use field::{FieldElement, GaloisField, PrimeField};

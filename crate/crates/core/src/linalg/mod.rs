//! Exact linear algebra over `F_p` and `Z/e` used by the cohomology engine.

pub mod fp;
pub mod gf2;
pub mod modular;
pub mod zn;

pub use fp::FpRref;
pub use gf2::Gf2Rref;
pub use zn::{quotient_mod, Congruences, ModQuotient, ZnKernel, ZnSolver};

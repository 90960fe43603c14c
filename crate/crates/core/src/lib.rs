//! Higher-dimensional Reidemeister torsion for circles, tori, torus-knot
//! exteriors, Brieskorn spheres and Seifert fibered spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`sl2_rep`]: `SL(2, C)` matrices, conjugacy-class descriptors and the
//!   symmetric powers `σ_n`.
//! * [`torsion_core`]: torsion of based acyclic chain complexes, used as a
//!   brute-force oracle for every closed form in the crate.
//! * [`model_complexes`]: twisted complexes of `S¹` and `T²`, acyclicity
//!   criteria and the closed-form circle torsion.
//! * [`surgery_brieskorn`]: the Dehn-filling formula and its specialisation
//!   to surgeries on torus knots.
//! * [`seifert`]: Seifert indices, closed-form torsion and leading
//!   coefficients.
//! * [`char_variety`]: SU(2) character-variety components of Seifert fibered
//!   homology spheres and the leading-coefficient function on them.
//! * [`verify`]: the cross-check battery behind `rtorsion verify`.

pub mod char_variety;
pub mod error;
pub mod exact;
pub mod model_complexes;
pub mod numeric;
pub mod seifert;
pub mod sl2_rep;
pub mod surgery_brieskorn;
pub mod torsion_core;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Log2Multiple;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

//! Leavitt path algebras of finite directed graphs, their spatial
//! representations on finite weighted ℓᵖ spaces, and a verification harness
//! for the uniqueness theorems at desk scale.
//!
//! * [`graphs`]: graph model, path combinatorics and graph surgeries.
//! * [`leavitt`]: exact symbolic arithmetic in `L_Q` with a canonical normal form.
//! * [`spatial`]: spatial partial isometries and atomic Cuntz–Krieger families.
//! * [`pnorm`]: operator norms on weighted ℓᵖ spaces.
//! * [`verify`]: relation checks, injectivity and isometry on filtration levels.

pub mod graphs;
pub mod leavitt;
pub mod pnorm;
pub mod spatial;
pub mod verify;

pub use num_complex::Complex64;

/// Dense complex matrix used for all represented operators.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

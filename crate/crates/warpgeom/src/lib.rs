//! Numerical toolkit for non-degenerate hypersurfaces of semi-Riemannian
//! warped products `ε·I ×_a M(c)`.
//!
//! The crate verifies the six structure conditions on chart-sampled
//! hypersurface data, assembles the connection / Maurer-Cartan forms of an
//! adapted moving frame, checks the flatness identity `dΥ + Υ∧Υ = 0`,
//! integrates the frame equation `B⁻¹dB = Υ` to rebuild the local isometric
//! immersion, and evaluates the marginally-trapped-leaf criterion for
//! Robertson-Walker 4-spacetimes.
//!
//! All computation is numeric on rectangular chart grids; scalar inputs
//! (warping functions, profile curves) are closed-form expressions evaluated
//! with exact second-order forward-mode jets.

pub mod ambient;
pub mod calculus;
pub mod conditions;
pub mod error;
pub mod expr;
pub mod frames;
pub mod grid;
pub mod horizons;
pub mod jet;
pub mod linalg;
pub mod reconstruct;
pub mod scalar_field;
pub mod scenarios;
pub mod surface;

pub use error::{Error, Result};
pub use expr::Expr;
pub use jet::Jet2;
pub use scalar_field::ScalarField1D;

//! Linearization of `f(x) = λx + Σ a_i x^i` at a hyperbolic fixed point.
//!
//! The Schröder equation `g ∘ f = λ g` has a unique formal solution with
//! `g'(0) = 1` whenever `|λ| != 0, 1`. This module computes it, the radii
//! that control where it converges and where `f` and `g` are injective, and
//! checks the coefficient bounds that make those radii work.

mod bounds;
mod lemma1;
mod map;
mod radii;
mod solve;

pub use bounds::{check_bound_attracting, check_bound_repelling, check_model, BoundExpr, BoundVerdict, Verdict};
pub use lemma1::{lemma1_check, Basis, InjectivityReport};
pub use map::{AffineTail, MapSpec, Regime, Tail};
pub use radii::{
    radii, radius_delta, radius_gamma, radius_rf, radius_rho, sandwich_holds, LogRadius, Radii, RadiusStatus,
};
pub use solve::{delta_g_empirical, identity_residuals, schroder_solve, ConjugacyReport, IdentityCheck, Residual};

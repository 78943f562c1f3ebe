//! Exact computations with rational Cherednik algebras `H_{t,c}(W, h)` for
//! small complex reflection groups, with an emphasis on the specialisation
//! `t = 0`: PBW normal forms, the Poisson bracket on the centre, parabolic
//! strata and symplectic leaves, restricted algebras and their blocks, and the
//! completion isomorphism to centralizer matrix algebras.

pub mod completion;
pub mod error;
pub mod exact;
pub mod invariants;
mod par;
pub mod rca;
pub mod refl;
pub mod restricted;

pub use error::{Error, Result};

//! Backward reachability for max-plus linear systems with additive
//! disturbances.
//!
//! All sets are tropical polyhedra over exact rationals: cones are kept in
//! generator form ([`ConeV`]) or constraint form ([`ConeM`]), polyhedra as
//! `Span(rays) ⊕ Conv(points)` ([`Polyhedron`]). The one-step backward
//! reachable set is [`reach::upsilon`].

pub mod error;
pub mod halfspace;
pub mod io;
pub mod maxplus;
pub mod reach;
pub mod sets;

pub use error::{Error, Result};
pub use halfspace::{intersect_all, intersect_pseudo, PseudoHalfSpace};
pub use maxplus::{MaxPlus, MaxPlusMatrix, MaxPlusVector};
pub use reach::{SystemModel, TargetSet};
pub use sets::{ConeM, ConeV, Polyhedron};
